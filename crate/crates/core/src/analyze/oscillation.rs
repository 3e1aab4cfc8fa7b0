//! Oscillatory tails around a level `kπ` with `g'(kπ) < 0`.
//!
//! Zeros of `h - kπ` and extrema of `h` are located on the dense output;
//! the phase `θ = arctan(h̃' / (α h̃))` with `α = sqrt(-g'(kπ))` and
//! energies over growing radii `[R₀, R₀·2^j]` are sampled.
//!
//! The asymptotic zero spacing is `π/α`, consistent with `θ' ≈ -α` and with
//! the Bessel-type linearisation `h̃'' + h̃'/r + α² h̃ = 0`.

use serde::{Deserialize, Serialize};

use super::{energy_between, linear_fit};
use crate::error::{Error, Result};
use crate::integrate::RadialProfile;
use crate::model::{level, ModelParams};

const MIN_ZEROS: usize = 4;
const LATE_GAPS: usize = 8;
const ROOT_TOL: f64 = 1e-10;
/// Growth per doubling of `R` below this fraction of the accumulated
/// energy is treated as convergence.
const GROWTH_FLOOR: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationReport {
    pub k: i64,
    pub zeros: Vec<f64>,
    pub maxima: Vec<f64>,
    pub minima: Vec<f64>,
    pub alpha: f64,
    pub mean_late_spacing: f64,
    pub phase_samples: Vec<(f64, f64)>,
    pub partial_energies: Vec<(f64, f64)>,
}

impl OscillationReport {
    pub fn start_radius(&self) -> f64 {
        self.zeros[0]
    }

    pub fn energy_growth(&self) -> EnergyGrowth {
        partial_energy_growth(&self.partial_energies)
    }
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut f_lo = f(lo);
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Zeros of `h - kπ` and extrema of `h` along the whole profile, as
/// `(zeros, maxima, minima)`.
fn locate(profile: &RadialProfile, target: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let s = &profile.samples;
    let (mut zeros, mut maxima, mut minima) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..s.len().saturating_sub(1) {
        let (a, b) = (s[i], s[i + 1]);
        let (da, db) = (a.h - target, b.h - target);
        if da == 0.0 {
            zeros.push(a.r);
        } else if da * db < 0.0 {
            zeros.push(bisect(a.r, b.r, |r| profile.hermite(i, r).0 - target));
        }
        if a.dh * b.dh < 0.0 {
            let r = bisect(a.r, b.r, |r| profile.hermite(i, r).1);
            if a.dh > 0.0 {
                maxima.push(r);
            } else {
                minima.push(r);
            }
        }
    }
    (zeros, maxima, minima)
}

/// Zeros, extrema, phase and energy growth of the oscillation of
/// `profile` around `kπ`.
///
/// The report starts at the first zero `R₀` of `h - kπ`.
pub fn oscillation_report(p: &ModelParams, profile: &RadialProfile, k: i64) -> Result<OscillationReport> {
    let gp = p.g_prime(level(k));
    if !(gp < 0.0) {
        return Err(Error::WrongRegime {
            expected: "<",
            value: gp,
        });
    }
    let target = level(k);
    let alpha = (-gp).sqrt();
    let (zeros, maxima, minima) = locate(profile, target);
    if zeros.len() < MIN_ZEROS {
        return Err(Error::TooFewZeros {
            found: zeros.len(),
            needed: MIN_ZEROS,
        });
    }
    let r_start = zeros[0];
    let maxima: Vec<f64> = maxima.into_iter().filter(|&r| r > r_start).collect();
    let minima: Vec<f64> = minima.into_iter().filter(|&r| r > r_start).collect();

    let gaps: Vec<f64> = zeros.windows(2).map(|w| w[1] - w[0]).collect();
    let late = &gaps[gaps.len().saturating_sub(LATE_GAPS)..];
    let mean_late_spacing = late.iter().sum::<f64>() / late.len() as f64;

    let phase_samples = profile
        .samples
        .iter()
        .filter(|s| s.r >= r_start)
        .map(|s| (s.r, (s.dh / (alpha * (s.h - target))).atan()))
        .collect();

    Ok(OscillationReport {
        k,
        zeros,
        maxima,
        minima,
        alpha,
        mean_late_spacing,
        phase_samples,
        partial_energies: partial_energies(profile, r_start),
    })
}

/// `(R, J over [R₀, R])` for `R = R₀·2^j` up to the end of the profile.
pub fn partial_energies(profile: &RadialProfile, r_start: f64) -> Vec<(f64, f64)> {
    let r_end = profile.r_final();
    let mut out = Vec::new();
    let mut r = r_start;
    let mut acc = 0.0;
    let mut prev = r_start;
    while r <= r_end {
        acc += energy_between(profile, prev, r);
        out.push((r, acc));
        prev = r;
        r *= 2.0;
    }
    out
}

/// Checks that zeros and extrema strictly alternate, with maxima and
/// minima alternating in turn: `a₁ < M₁ < a₂ < L₁ < a₃ < …` (or starting
/// with a minimum).
pub fn interleaves(report: &OscillationReport) -> bool {
    let mut events: Vec<(f64, u8)> = report.zeros.iter().map(|&r| (r, 0u8)).collect();
    events.extend(report.maxima.iter().map(|&r| (r, 1u8)));
    events.extend(report.minima.iter().map(|&r| (r, 2u8)));
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    if events.first().map(|e| e.1) != Some(0) {
        return false;
    }
    let mut last_extremum = None;
    for w in events.windows(2) {
        if w[0].0 >= w[1].0 {
            return false;
        }
        let (a, b) = (w[0].1, w[1].1);
        if (a == 0) == (b == 0) {
            return false;
        }
        if b != 0 {
            if last_extremum == Some(b) {
                return false;
            }
            last_extremum = Some(b);
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGrowth {
    /// Least-squares slope of `J([R₀, R])` against `log₂ R` over the later
    /// half of the samples.
    pub slope_per_log2: f64,
    pub slope_std_err: f64,
    pub diverging: bool,
}

/// Decide whether partial energies keep growing with `log₂ R`.
///
/// Divergence requires the two-standard-error lower bound of the late
/// slope to exceed one percent of the accumulated energy per doubling.
pub fn partial_energy_growth(partial: &[(f64, f64)]) -> EnergyGrowth {
    let none = EnergyGrowth {
        slope_per_log2: 0.0,
        slope_std_err: 0.0,
        diverging: false,
    };
    if partial.len() < 3 {
        return none;
    }
    let late = &partial[partial.len() / 2 - usize::from(partial.len() % 2 == 0)..];
    let late = if late.len() < 3 { &partial[partial.len() - 3..] } else { late };
    let (x, y): (Vec<f64>, Vec<f64>) = late.iter().map(|&(r, j)| (r.log2(), j)).unzip();
    let Some((slope, _, se)) = linear_fit(&x, &y) else {
        return none;
    };
    let scale = partial.last().map_or(0.0, |p| p.1.abs());
    EnergyGrowth {
        slope_per_log2: slope,
        slope_std_err: se,
        diverging: slope - 2.0 * se > GROWTH_FLOOR * scale && slope > 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyze::testing::synthetic;
    use crate::integrate::TerminalKind;
    use std::f64::consts::PI;

    fn osc_params() -> ModelParams {
        ModelParams::new(0.0, 1.0, 1).unwrap()
    }

    fn decaying(alpha: f64) -> impl Fn(f64) -> (f64, f64) {
        move |r: f64| {
            let amp = r.powf(-0.5);
            let (s, c) = (alpha * r).sin_cos();
            (PI + amp * c, -alpha * amp * s - 0.5 * amp / r * c)
        }
    }

    #[test]
    fn synthetic_spacing_and_structure() {
        let prof = synthetic(osc_params(), decaying(1.0), 2.0, 200.0, 20_000, TerminalKind::Oscillating(1));
        let rep = oscillation_report(&osc_params(), &prof, 1).unwrap();
        assert!((rep.mean_late_spacing - PI).abs() < 0.02 * PI);
        assert!(interleaves(&rep));
        assert_eq!(rep.alpha, 1.0);
        // zeros of cos r are at (n + 1/2)π
        for z in &rep.zeros {
            let n = z / PI - 0.5;
            assert!((n - n.round()).abs() < 1e-6, "{z}");
        }
    }

    #[test]
    fn synthetic_energy_diverges() {
        let prof = synthetic(osc_params(), decaying(1.0), 2.0, 400.0, 40_000, TerminalKind::Oscillating(1));
        let rep = oscillation_report(&osc_params(), &prof, 1).unwrap();
        let g = rep.energy_growth();
        assert!(g.diverging, "{g:?}");
        assert!(g.slope_per_log2 > 0.0);
    }

    #[test]
    fn phase_decreases_between_zeros() {
        let prof = synthetic(osc_params(), decaying(1.0), 2.0, 100.0, 10_000, TerminalKind::Oscillating(1));
        let rep = oscillation_report(&osc_params(), &prof, 1).unwrap();
        let late: Vec<_> = rep.phase_samples.iter().filter(|(r, _)| *r > 50.0).collect();
        let mut drops = 0;
        for w in late.windows(2) {
            let d = w[1].1 - w[0].1;
            // a jump of +π marks the passage through a zero of h̃
            if d < 1.0 {
                assert!(d < 0.0, "phase increased at r = {}", w[1].0);
                drops += 1;
            }
        }
        assert!(drops > 100);
    }

    #[test]
    fn needs_enough_zeros_and_a_well() {
        let prof = synthetic(osc_params(), decaying(1.0), 2.0, 8.0, 500, TerminalKind::Exhausted);
        assert!(matches!(
            oscillation_report(&osc_params(), &prof, 1),
            Err(Error::TooFewZeros { .. })
        ));
        let saddle = ModelParams::new(1.0, 0.5, 1).unwrap();
        assert!(matches!(
            oscillation_report(&saddle, &prof, 1),
            Err(Error::WrongRegime { .. })
        ));
    }

    #[test]
    fn interleaving_detects_violations() {
        let mut rep = OscillationReport {
            k: 1,
            zeros: vec![1.0, 3.0, 5.0],
            maxima: vec![2.0],
            minima: vec![4.0],
            alpha: 1.0,
            mean_late_spacing: 2.0,
            phase_samples: vec![],
            partial_energies: vec![],
        };
        assert!(interleaves(&rep));
        rep.maxima.push(4.5);
        assert!(!interleaves(&rep));
        rep.maxima.pop();
        rep.minima = vec![2.5];
        rep.maxima = vec![2.0];
        assert!(!interleaves(&rep));
    }

    #[test]
    fn flat_energy_does_not_diverge() {
        let zero: Vec<(f64, f64)> = (0..6).map(|j| (2f64.powi(j), 0.0)).collect();
        let g = partial_energy_growth(&zero);
        assert_eq!(g.slope_per_log2, 0.0);
        assert!(!g.diverging);
        let saturating: Vec<(f64, f64)> =
            (0..10).map(|j| (2f64.powi(j), 2.0 - 2.0 / 4f64.powi(j))).collect();
        assert!(!partial_energy_growth(&saturating).diverging);
        let linear: Vec<(f64, f64)> = (0..8).map(|j| (2f64.powi(j), 3.0 * j as f64)).collect();
        assert!(partial_energy_growth(&linear).diverging);
    }
}
