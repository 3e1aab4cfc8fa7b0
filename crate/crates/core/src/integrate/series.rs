//! Truncated power series at the regular singular point `r = 0`.
//!
//! With `h(0) = 0` and `h^(m)(0) = a` the solution starts as
//! `h(r) = c_m r^m + c_{m+2} r^{m+2} + ...` where `c_m = a/m!`. The second
//! coefficient comes from matching the `r^m` terms of the equation after
//! expanding `sin h cos h` and `g(h)` to cubic order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Largest hand-off radius the series is ever trusted to.
pub const MAX_HANDOFF_RADIUS: f64 = 0.1;
const MIN_HANDOFF_RADIUS: f64 = 1e-10;

/// Coefficients of the two-term expansion plus the first omitted one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoefficients {
    pub m: u32,
    /// `c_m = a / m!`
    pub leading: f64,
    /// `c_{m+2}`
    pub second: f64,
    /// `c_{m+4}`, used only for the truncation estimate.
    pub third: f64,
}

impl SeriesCoefficients {
    pub fn new(p: &ModelParams, a: f64) -> Self {
        let m = p.degree();
        let mf = m as f64;
        let c1 = a / factorial(m);
        let lin = p.lambda + p.omega;
        // sin h cos h = h - 2h³/3 + 2h⁵/15, g(h) = (λ+ω)h - (2λ/3 + ω/6)h³
        let cubic_g = 2.0 * p.lambda / 3.0 + p.omega / 6.0;
        let c1_3 = c1 * c1 * c1;

        let mut rhs2 = lin * c1;
        if m == 1 {
            rhs2 -= 2.0 / 3.0 * c1_3;
        }
        let c2 = rhs2 / (4.0 * (mf + 1.0));

        let mut rhs3 = lin * c2;
        match m {
            1 => {
                rhs3 += -2.0 * c1 * c1 * c2 - cubic_g * c1_3 + 2.0 / 15.0 * c1_3 * c1 * c1;
            }
            2 => rhs3 -= 2.0 / 3.0 * 4.0 * c1_3,
            _ => {}
        }
        let c3 = rhs3 / (8.0 * (mf + 2.0));

        Self {
            m,
            leading: c1,
            second: c2,
            third: c3,
        }
    }

    /// `(h, h')` of the two-term expansion at `r`.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let m = self.m as i32;
        let rm1 = r.powi(m - 1);
        let rm = rm1 * r;
        let r2 = r * r;
        let h = self.leading * rm + self.second * rm * r2;
        let dh = m as f64 * self.leading * rm1 + (m + 2) as f64 * self.second * rm1 * r2;
        (h, dh)
    }

    /// Bound on the error of [`eval`](Self::eval) in both `h` and `r·h'`.
    ///
    /// Sums `p·|c|·r^p` over the first omitted linear term, the first
    /// cubic term when it is not already part of `c_{m+4}` (m ≥ 3), and a
    /// crude bound for the term after that.
    pub fn truncation_estimate(&self, r: f64, p: &ModelParams) -> f64 {
        let m = self.m as i32;
        let mf = self.m as f64;
        let c1 = self.leading.abs();
        let mut est = (mf + 4.0) * self.third.abs() * r.powi(m + 4);
        if m >= 3 {
            est += 3.0 * mf * c1.powi(3) / 12.0 * r.powi(3 * m);
        }
        let scale = (p.lambda.abs() + p.omega.abs()) / 8.0 + c1.powf(2.0 / mf);
        est += (mf + 6.0) * c1 * (scale * r * r).powi(3) * r.powi(m);
        est
    }
}

pub(crate) fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// State handed from the series to the numerical integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StartState {
    pub r0: f64,
    pub h: f64,
    pub dh: f64,
    pub truncation_estimate: f64,
    pub coefficients: SeriesCoefficients,
}

/// Largest radius at which the truncation estimate stays below
/// `series_tol`, capped at [`MAX_HANDOFF_RADIUS`].
pub fn series_start(p: &ModelParams, a: f64, series_tol: f64) -> Result<StartState> {
    if !a.is_finite() {
        return Err(Error::InvalidConfig(format!("shooting parameter {a} is not finite")));
    }
    if !(series_tol > 0.0) {
        return Err(Error::InvalidConfig("series_tol must be positive".into()));
    }
    let coefficients = SeriesCoefficients::new(p, a);
    let est = |r: f64| coefficients.truncation_estimate(r, p);

    let r0 = if est(MAX_HANDOFF_RADIUS) <= series_tol {
        MAX_HANDOFF_RADIUS
    } else {
        let (mut lo, mut hi) = (MIN_HANDOFF_RADIUS.ln(), MAX_HANDOFF_RADIUS.ln());
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if est(mid.exp()) <= series_tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo.exp()
    };
    let (h, dh) = coefficients.eval(r0);
    Ok(StartState {
        r0,
        h,
        dh,
        truncation_estimate: est(r0),
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(lambda: f64, omega: f64, m: i32) -> ModelParams {
        ModelParams::new(lambda, omega, m).unwrap()
    }

    // Taylor coefficients of 2·arctan(c·r^m): 2c r^m - (2/3)c³ r^{3m} + (2/5)c⁵ r^{5m}
    #[test]
    fn instanton_coefficients() {
        let c = SeriesCoefficients::new(&p(0.0, 0.0, 1), 2.0);
        assert_eq!(c.leading, 2.0);
        assert!((c.second + 2.0 / 3.0).abs() < 1e-15);
        assert!((c.third - 0.4).abs() < 1e-15);

        let c = SeriesCoefficients::new(&p(0.0, 0.0, 2), 4.0);
        assert_eq!(c.leading, 2.0);
        assert_eq!(c.second, 0.0);
        assert!((c.third + 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn second_coefficient_degree_one() {
        for &(lambda, omega, a) in &[(1.0, 0.5, 0.3), (-2.0, 0.7, 1.9), (0.0, 1.0, -4.0)] {
            let c = SeriesCoefficients::new(&p(lambda, omega, 1), a);
            let expected = ((lambda + omega) * a - 2.0 / 3.0 * a * a * a) / 8.0;
            assert!((c.second - expected).abs() < 1e-14);
        }
    }

    // The equation residual of the three-term polynomial must vanish
    // faster than every matched order.
    #[test]
    fn series_satisfies_equation_to_order() {
        for m in 1..=3 {
            let q = p(0.9, -0.4, m);
            let c = SeriesCoefficients::new(&q, 1.3);
            let mi = m as i32;
            let poly = |r: f64| {
                c.leading * r.powi(mi) + c.second * r.powi(mi + 2) + c.third * r.powi(mi + 4)
            };
            let d1 = |r: f64| {
                let mf = m as f64;
                mf * c.leading * r.powi(mi - 1)
                    + (mf + 2.0) * c.second * r.powi(mi + 1)
                    + (mf + 4.0) * c.third * r.powi(mi + 3)
            };
            let d2 = |r: f64| {
                let mf = m as f64;
                mf * (mf - 1.0) * c.leading * r.powi(mi - 2)
                    + (mf + 2.0) * (mf + 1.0) * c.second * r.powi(mi)
                    + (mf + 4.0) * (mf + 3.0) * c.third * r.powi(mi + 2)
            };
            let residual = |r: f64| {
                let h = poly(r);
                let (_, dd) = crate::model::rhs_unchecked(&q, r, h, d1(r));
                (d2(r) - dd).abs()
            };
            // leftover is O(r^{m+4}) for the degree-one series (nonlinear
            // fifth-order terms) and at least that for higher degrees
            let r1 = residual(0.1);
            let r2 = residual(0.05);
            let order = (r1 / r2).log2();
            assert!(order > mi as f64 + 3.5, "m={m} order={order}");
        }
    }

    #[test]
    fn zero_start() {
        let s = series_start(&p(1.0, 0.5, 1), 0.0, 1e-12).unwrap();
        assert_eq!((s.h, s.dh), (0.0, 0.0));
        assert_eq!(s.truncation_estimate, 0.0);
    }

    #[test]
    fn handoff_respects_tolerance() {
        for m in 1..=4 {
            for a in [0.01, 1.0, 50.0] {
                let q = p(1.0, 0.5, m);
                let s = series_start(&q, a, 1e-12).unwrap();
                assert!(s.truncation_estimate <= 1e-12);
                assert!(s.r0 > 0.0 && s.r0 <= MAX_HANDOFF_RADIUS);
                let (h, dh) = s.coefficients.eval(s.r0);
                assert_eq!((h, dh), (s.h, s.dh));
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(series_start(&p(1.0, 0.5, 1), f64::NAN, 1e-12).is_err());
        assert!(series_start(&p(1.0, 0.5, 1), 1.0, 0.0).is_err());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(1), 1.0);
        assert_eq!(factorial(5), 120.0);
    }
}
