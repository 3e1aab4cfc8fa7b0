//! Defining functions of the radial profile equation
//!
//! ```text
//! h'' + h'/r - (m²/r²) sin h cos h = λ sin h cos h + ω sin h
//! ```
//!
//! together with the potential `G`, the energy density and the table that
//! maps an `(λ, ω)` pair onto the clause of the classification theorem it
//! can possibly satisfy.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Parameters `(λ, ω, m)` of one instance of the profile equation.
///
/// The degree is stored as given but every computation uses `|m|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub lambda: f64,
    pub omega: f64,
    m: i32,
}

impl ModelParams {
    pub fn new(lambda: f64, omega: f64, m: i32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("m must be nonzero".into()));
        }
        if !lambda.is_finite() || !omega.is_finite() {
            return Err(Error::InvalidParams(
                "lambda and omega must be finite".into(),
            ));
        }
        Ok(Self { lambda, omega, m })
    }

    /// The conformal (harmonic map) case `λ = ω = 0`.
    pub fn conformal(m: i32) -> Result<Self> {
        Self::new(0.0, 0.0, m)
    }

    /// Degree as supplied, sign included.
    pub fn signed_degree(&self) -> i32 {
        self.m
    }

    /// `|m|`, the degree used by all computations.
    pub fn degree(&self) -> u32 {
        self.m.unsigned_abs()
    }

    pub fn m_sq(&self) -> f64 {
        let m = self.degree() as f64;
        m * m
    }

    pub fn is_conformal(&self) -> bool {
        self.lambda == 0.0 && self.omega == 0.0
    }

    pub fn g(&self, h: f64) -> f64 {
        eval_g(self, h)
    }

    pub fn g_prime(&self, h: f64) -> f64 {
        eval_g_prime(self, h)
    }

    pub fn potential(&self, x: f64, k: i64) -> f64 {
        eval_big_g(self, x, k)
    }
}

/// `g(h) = λ sin h cos h + ω sin h`.
pub fn eval_g(p: &ModelParams, h: f64) -> f64 {
    let (s, c) = h.sin_cos();
    p.lambda * s * c + p.omega * s
}

/// `g'(h) = λ cos 2h + ω cos h`.
pub fn eval_g_prime(p: &ModelParams, h: f64) -> f64 {
    p.lambda * (2.0 * h).cos() + p.omega * h.cos()
}

/// Primitive of `g` anchored at `kπ`:
/// `G(x, k) = (λ/2) sin²x + ω((-1)^|k| - cos x)`.
pub fn eval_big_g(p: &ModelParams, x: f64, k: i64) -> f64 {
    let parity = if k.unsigned_abs() % 2 == 0 { 1.0 } else { -1.0 };
    let s = x.sin();
    0.5 * p.lambda * s * s + p.omega * (parity - x.cos())
}

/// Right-hand side of the profile equation as a first-order system in
/// `(h, h')`. Returns `(h', h'')`.
pub fn rhs(p: &ModelParams, r: f64, state: (f64, f64)) -> Result<(f64, f64)> {
    if r.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::SingularRadius(r));
    }
    Ok(rhs_unchecked(p, r, state.0, state.1))
}

#[inline]
pub(crate) fn rhs_unchecked(p: &ModelParams, r: f64, h: f64, dh: f64) -> (f64, f64) {
    let (s, c) = h.sin_cos();
    let ddh = -dh / r + p.m_sq() / (r * r) * s * c + p.lambda * s * c + p.omega * s;
    (dh, ddh)
}

/// Integrand of the energy functional including the measure factor:
/// `(h'² + (m²/r²) sin²h) r`.
pub fn energy_density(m: i32, r: f64, h: f64, dh: f64) -> f64 {
    let m = m.unsigned_abs() as f64;
    let s = h.sin();
    (dh * dh + m * m / (r * r) * s * s) * r
}

/// Clause of the classification theorem an `(λ, ω)` pair may satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    CaseI,
    CaseII,
    CaseIII,
    CaseIV,
    CaseV,
    NoFiniteEnergyVortex,
}

/// Parity of `k` in an admissible limit `kπ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
    Any,
    None,
}

impl Parity {
    pub fn admits(self, k: i64) -> bool {
        match self {
            Parity::Any => true,
            Parity::None => false,
            Parity::Even => k % 2 == 0,
            Parity::Odd => k % 2 != 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseLabel {
    pub tag: CaseTag,
    pub admissible_limit_parity: Parity,
    pub exponential_tail_guaranteed: bool,
}

impl CaseLabel {
    const fn of(tag: CaseTag, parity: Parity, exponential: bool) -> Self {
        Self {
            tag,
            admissible_limit_parity: parity,
            exponential_tail_guaranteed: exponential,
        }
    }
}

/// Necessary-condition table for finite-energy vortices with `a ≠ 0`.
///
/// A label other than `NoFiniteEnergyVortex` does not assert existence.
/// Case I records `Odd` parity: the instanton with `a > 0` tends to `π`
/// (and to `-π` for `a < 0`).
pub fn classify_params(lambda: f64, omega: f64) -> CaseLabel {
    classify_params_with_tol(lambda, omega, 0.0)
}

/// As [`classify_params`], but treats `|λ ∓ ω| ≤ line_tol` (and
/// `|λ|, |ω| ≤ line_tol` at the origin) as lying on the exceptional lines.
pub fn classify_params_with_tol(lambda: f64, omega: f64, line_tol: f64) -> CaseLabel {
    use CaseTag::*;
    let zero = |x: f64| x.abs() <= line_tol;
    if zero(lambda) && zero(omega) {
        return CaseLabel::of(CaseI, Parity::Odd, false);
    }
    if zero(lambda - omega) {
        return CaseLabel::of(CaseII, Parity::Odd, false);
    }
    if zero(lambda + omega) {
        return CaseLabel::of(CaseIII, Parity::Even, false);
    }
    if 0.0 < omega && omega < lambda {
        return CaseLabel::of(CaseIV, Parity::Odd, true);
    }
    if -lambda < omega && omega < 0.0 {
        return CaseLabel::of(CaseV, Parity::Even, true);
    }
    CaseLabel::of(NoFiniteEnergyVortex, Parity::None, false)
}

/// `kπ` as a float.
pub fn level(k: i64) -> f64 {
    k as f64 * PI
}

/// Nearest integer `k` with `kπ` closest to `h`.
pub fn nearest_level(h: f64) -> i64 {
    (h / PI).round() as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn p(lambda: f64, omega: f64, m: i32) -> ModelParams {
        ModelParams::new(lambda, omega, m).unwrap()
    }

    #[test]
    fn g_values() {
        assert!(eval_g(&p(1.0, 0.5, 1), PI).abs() < 1e-15);
        assert!((eval_g(&p(0.0, 1.0, 1), FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert!((eval_g(&p(1.0, 0.0, 1), PI / 4.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn g_prime_values() {
        assert!((eval_g_prime(&p(1.0, 0.5, 1), PI) - 0.5).abs() < 1e-15);
        assert!((eval_g_prime(&p(1.0, 0.5, 1), 0.0) - 1.5).abs() < 1e-15);
        assert_eq!(eval_g_prime(&p(0.0, 0.0, 1), 1.234), 0.0);
    }

    #[test]
    fn potential_values() {
        assert_eq!(eval_big_g(&p(1.0, 0.5, 1), 0.0, 0), 0.0);
        assert!((eval_big_g(&p(1.0, 0.5, 1), 0.0, 1) + 1.0).abs() < 1e-15);
        assert!((eval_big_g(&p(1.0, 1.0, 1), PI, 0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn potential_vanishes_at_its_anchor() {
        let q = p(0.7, -1.3, 2);
        for k in -3..=3 {
            assert!(eval_big_g(&q, level(k), k).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn potential_derivative_is_g() {
        let q = p(0.8, 0.3, 1);
        let step = 1e-4;
        for i in 0..=80 {
            let x = -2.0 * PI + i as f64 * (4.0 * PI / 80.0);
            for k in [0, 1] {
                let fd = (eval_big_g(&q, x + step, k) - eval_big_g(&q, x - step, k)) / (2.0 * step);
                assert!((fd - eval_g(&q, x)).abs() < 1e-8, "x={x}");
            }
        }
    }

    #[test]
    fn rhs_values() {
        assert_eq!(rhs(&p(2.0, -1.0, 3), 1.0, (0.0, 0.0)).unwrap(), (0.0, 0.0));
        let (d, dd) = rhs(&p(0.0, 0.0, 1), 1.0, (FRAC_PI_2, 1.0)).unwrap();
        assert_eq!(d, 1.0);
        assert!((dd + 1.0).abs() < 1e-15);
        let (d, dd) = rhs(&p(0.0, 1.0, 1), 2.0, (FRAC_PI_2, 0.0)).unwrap();
        assert_eq!(d, 0.0);
        assert!((dd - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rhs_rejects_origin() {
        assert!(rhs(&p(1.0, 1.0, 1), 0.0, (0.1, 0.1)).is_err());
        assert!(rhs(&p(1.0, 1.0, 1), -1.0, (0.1, 0.1)).is_err());
    }

    #[test]
    fn rhs_far_field_is_autonomous() {
        let q = p(1.0, 0.5, 2);
        let (h, dh) = (1.1, 0.0);
        let (_, dd) = rhs(&q, 1e6, (h, dh)).unwrap();
        assert!((dd - eval_g(&q, h)).abs() < 1e-11);
    }

    #[test]
    fn energy_density_values() {
        assert_eq!(energy_density(1, 1.0, 0.0, 0.0), 0.0);
        assert!((energy_density(1, 2.0, FRAC_PI_2, 0.0) - 0.5).abs() < 1e-15);
        assert!((energy_density(2, 1.0, FRAC_PI_2, 1.0) - 5.0).abs() < 1e-15);
        assert!((energy_density(-2, 1.0, FRAC_PI_2, 1.0) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn zero_degree_rejected() {
        let err = ModelParams::new(1.0, 1.0, 0).unwrap_err();
        assert_eq!(err.to_string(), "invalid parameters: m must be nonzero");
        assert!(ModelParams::new(f64::NAN, 1.0, 1).is_err());
        assert_eq!(p(1.0, 1.0, -3).degree(), 3);
    }

    #[test]
    fn classification_table() {
        use CaseTag::*;
        let l = classify_params(0.0, 0.0);
        assert_eq!(l.tag, CaseI);
        let l = classify_params(1.0, 0.5);
        assert_eq!(l.tag, CaseIV);
        assert_eq!(l.admissible_limit_parity, Parity::Odd);
        assert!(l.exponential_tail_guaranteed);
        assert_eq!(classify_params(0.0, 1.0).tag, NoFiniteEnergyVortex);
        assert_eq!(classify_params(1.0, 0.0).tag, NoFiniteEnergyVortex);
        assert_eq!(classify_params(-1.0, 0.0).tag, NoFiniteEnergyVortex);
        assert_eq!(classify_params(-1.0, 0.5).tag, NoFiniteEnergyVortex);
        let l = classify_params(1.0, 1.0);
        assert_eq!((l.tag, l.admissible_limit_parity), (CaseII, Parity::Odd));
        assert!(!l.exponential_tail_guaranteed);
        let l = classify_params(-2.0, -2.0);
        assert_eq!(l.tag, CaseII);
        let l = classify_params(1.0, -1.0);
        assert_eq!((l.tag, l.admissible_limit_parity), (CaseIII, Parity::Even));
        assert_eq!(classify_params(-1.0, 1.0).tag, CaseIII);
        let l = classify_params(1.0, -0.5);
        assert_eq!((l.tag, l.admissible_limit_parity), (CaseV, Parity::Even));
        assert!(l.exponential_tail_guaranteed);
    }

    #[test]
    fn line_tolerance_widens_exceptional_lines() {
        assert_eq!(classify_params(1.0, 1.0 + 1e-12).tag, CaseTag::NoFiniteEnergyVortex);
        assert_eq!(
            classify_params_with_tol(1.0, 1.0 + 1e-12, 1e-9).tag,
            CaseTag::CaseII
        );
    }

    proptest! {
        #[test]
        fn g_is_odd(lambda in -5.0f64..5.0, omega in -5.0f64..5.0, h in -20.0f64..20.0) {
            let q = p(lambda, omega, 1);
            prop_assert!((eval_g(&q, -h) + eval_g(&q, h)).abs() <= 1e-12);
        }

        #[test]
        fn flipping_omega_swaps_parity(lambda in 0.01f64..5.0, frac in 0.01f64..0.99) {
            let omega = frac * lambda;
            let up = classify_params(lambda, omega);
            let down = classify_params(lambda, -omega);
            prop_assert_eq!(up.tag, CaseTag::CaseIV);
            prop_assert_eq!(down.tag, CaseTag::CaseV);
            prop_assert_eq!(up.admissible_limit_parity, Parity::Odd);
            prop_assert_eq!(down.admissible_limit_parity, Parity::Even);
        }

        #[test]
        fn exponential_flag_matches_tag(lambda in -3.0f64..3.0, omega in -3.0f64..3.0) {
            let l = classify_params(lambda, omega);
            let expected = matches!(l.tag, CaseTag::CaseIV | CaseTag::CaseV);
            prop_assert_eq!(l.exponential_tail_guaranteed, expected);
        }
    }
}
