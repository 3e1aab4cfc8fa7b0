//! Measurements on computed profiles: energy, the Pohozaev identity,
//! exponential tails and oscillatory tails.

mod oscillation;
mod quadrature;
mod tail;

use serde::{Deserialize, Serialize};

pub use oscillation::{
    interleaves, oscillation_report, partial_energies, partial_energy_growth, EnergyGrowth,
    OscillationReport,
};
pub use tail::{tail_report, TailDirection, TailReport};

use crate::integrate::RadialProfile;
use crate::model::{energy_density, eval_big_g, ModelParams};

/// Energy `J = ∫ (h'² + (m²/r²) sin²h) r dr` over `[0, r_final]`, without
/// the overall factor `π`.
pub fn energy(profile: &RadialProfile) -> f64 {
    cumulative_energy(profile).last().copied().unwrap_or(0.0)
}

/// Energy over `[0, r_i]` at every sample.
pub fn cumulative_energy(profile: &RadialProfile) -> Vec<f64> {
    let m = profile.params.signed_degree();
    quadrature::cumulative(profile, |r, h, dh| energy_density(m, r, h, dh))
}

/// Energy over `[r_from, r_to]`, both inside the integrated range.
pub fn energy_between(profile: &RadialProfile, r_from: f64, r_to: f64) -> f64 {
    let m = profile.params.signed_degree();
    quadrature::between(profile, r_from, r_to, |r, h, dh| energy_density(m, r, h, dh))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PohozaevSample {
    pub r: f64,
    /// `(r h')²`
    pub lhs: f64,
    /// `m² sin²h + 2 G(h) r² - 4 ∫_0^r G(h(t)) t dt`
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PohozaevLedger {
    pub k: i64,
    pub samples: Vec<PohozaevSample>,
    /// `max |lhs - rhs| / (1 + lhs)`
    pub sup_relative_residual: f64,
}

/// Both sides of the Pohozaev identity at every sample of `profile`.
///
/// The identity holds for every solution of the profile equation,
/// whatever its behaviour at infinity. `k` only fixes the additive
/// constant of `G`, which cancels between the two `G` terms.
pub fn pohozaev_residual(p: &ModelParams, profile: &RadialProfile, k: i64) -> PohozaevLedger {
    let running = quadrature::cumulative(profile, |r, h, _| eval_big_g(p, h, k) * r);
    let m_sq = p.m_sq();
    let mut sup: f64 = 0.0;
    let samples = profile
        .samples
        .iter()
        .zip(running)
        .map(|(s, int_g)| {
            let lhs = (s.r * s.dh).powi(2);
            let sin = s.h.sin();
            let rhs = m_sq * sin * sin + 2.0 * eval_big_g(p, s.h, k) * s.r * s.r - 4.0 * int_g;
            let residual = lhs - rhs;
            sup = sup.max(residual.abs() / (1.0 + lhs));
            PohozaevSample { r: s.r, lhs, rhs, residual }
        })
        .collect();
    PohozaevLedger {
        k,
        samples,
        sup_relative_residual: sup,
    }
}

/// Least-squares slope and intercept of `y` against `x`, with the slope's
/// standard error.
pub(crate) fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let se = if n > 2 {
        let ss: f64 = x
            .iter()
            .zip(y)
            .map(|(a, b)| (b - intercept - slope * a).powi(2))
            .sum();
        (ss / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some((slope, intercept, se))
}
