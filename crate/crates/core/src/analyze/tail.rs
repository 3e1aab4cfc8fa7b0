use serde::{Deserialize, Serialize};

use super::linear_fit;
use crate::error::{Error, Result};
use crate::integrate::{RadialProfile, TerminalKind};
use crate::model::{level, ModelParams};

/// Samples dropped at the end of the tail before fitting; the terminal
/// event's neighbourhood is polluted by the stopping criterion.
const TAIL_DISCARD: usize = 5;
const MIN_MONOTONE_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailDirection {
    DecreasesTo,
    IncreasesTo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub k: i64,
    /// Radius after which `h - kπ` and `h'` keep their signs. `None` when
    /// that stretch is shorter than ten samples; the fit then uses the
    /// trailing samples regardless.
    pub monotone_from: Option<f64>,
    pub direction: TailDirection,
    /// Decay rate from a log-linear fit of `|h - kπ|`.
    pub fitted_rate: f64,
    /// `sqrt(g'(kπ)/2)`, the rate guaranteed for monotone tails.
    pub paper_bound: f64,
    /// `sqrt(g'(kπ))`, the rate of the linearised equation.
    pub linearized_rate: f64,
    pub fit_samples: usize,
}

/// Classify and measure the exponential approach of a converged profile
/// to `kπ`.
pub fn tail_report(p: &ModelParams, profile: &RadialProfile, k: i64) -> Result<TailReport> {
    if profile.terminal.kind != TerminalKind::ConvergedTo(k) {
        return Err(Error::NotConverged);
    }
    let gp = p.g_prime(level(k));
    if !(gp > 0.0) {
        return Err(Error::WrongRegime {
            expected: ">",
            value: gp,
        });
    }
    let target = level(k);
    // trailing samples that round to kπ carry no sign information
    let end = profile
        .samples
        .iter()
        .rposition(|x| x.h != target)
        .ok_or(Error::EmptyProfile)?;
    let s = &profile.samples[..=end];
    let last = s[end];
    let dev_sign = (last.h - target).signum();
    let slope_sign = last.dh.signum();

    let mut first = s.len() - 1;
    while first > 0 {
        let prev = s[first - 1];
        if (prev.h - target).signum() != dev_sign || prev.dh.signum() != slope_sign || prev.dh == 0.0 {
            break;
        }
        first -= 1;
    }
    let run = s.len() - first;
    let monotone = run >= MIN_MONOTONE_SAMPLES;
    let monotone_from = monotone.then(|| s[first].r);

    let window: Vec<_> = if monotone {
        let r_mid = 0.5 * (s[first].r + last.r);
        let upto = s.len().saturating_sub(TAIL_DISCARD).max(first + 2).min(s.len());
        s[first..upto].iter().filter(|x| x.r >= r_mid).collect()
    } else {
        s[s.len().saturating_sub(MIN_MONOTONE_SAMPLES)..].iter().collect()
    };
    let (x, y): (Vec<f64>, Vec<f64>) = window
        .iter()
        .filter(|x| x.h != target)
        .map(|x| (x.r, (x.h - target).abs().ln()))
        .unzip();
    let fitted_rate = linear_fit(&x, &y).map_or(f64::NAN, |(slope, _, _)| -slope);

    Ok(TailReport {
        k,
        monotone_from,
        direction: if dev_sign > 0.0 {
            TailDirection::DecreasesTo
        } else {
            TailDirection::IncreasesTo
        },
        fitted_rate,
        paper_bound: (gp / 2.0).sqrt(),
        linearized_rate: gp.sqrt(),
        fit_samples: x.len(),
    })
}
