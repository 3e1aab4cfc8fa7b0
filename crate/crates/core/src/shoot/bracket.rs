use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{shoot, ShootConfig, ShotClass, ShotOutcome};
use crate::error::{Error, Result};
use crate::integrate::RadialProfile;
use crate::model::ModelParams;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketResult {
    pub a_lo: f64,
    pub a_hi: f64,
    pub a_star: f64,
    /// `max(|h - kπ|, |h'|)` at the closest approach of the `a_star` shot.
    pub residual: f64,
    pub iterations: usize,
    pub accepted: bool,
    pub r_closest: f64,
    #[serde(skip)]
    pub outcome: Option<Box<ShotOutcome>>,
}

impl BracketResult {
    /// Profile of the `a_star` shot up to its closest approach.
    pub fn solution_profile(&self, k: i64) -> Option<RadialProfile> {
        self.outcome.as_ref().map(|o| o.solution_profile(k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub a: f64,
    pub class: ShotClass,
    pub crossing_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub k: i64,
    pub scan: Vec<ScanPoint>,
    pub brackets: Vec<BracketResult>,
}

impl SearchReport {
    pub fn accepted(&self) -> impl Iterator<Item = &BracketResult> {
        self.brackets.iter().filter(|b| b.accepted)
    }

    /// True when no scanned shot was an undershoot, overshoot or hit.
    pub fn only_indeterminate(&self) -> bool {
        self.scan.iter().all(|s| s.class == ShotClass::Indeterminate)
    }
}

/// Scan grid: logarithmic with `points_per_decade` when the range keeps
/// one sign, linear otherwise.
pub fn scan_grid(range: (f64, f64), points_per_decade: usize) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidConfig(format!("bad a-range {lo}:{hi}")));
    }
    if lo == hi {
        return Ok(vec![lo]);
    }
    let ppd = points_per_decade.max(1);
    if lo * hi > 0.0 {
        let (l, h) = (lo.abs().log10(), hi.abs().log10());
        let n = ((h - l).abs() * ppd as f64).ceil().max(1.0) as usize;
        let mut grid: Vec<f64> = (0..=n)
            .map(|i| lo.signum() * 10f64.powf(l + (h - l) * i as f64 / n as f64))
            .collect();
        grid[0] = lo;
        grid[n] = hi;
        Ok(grid)
    } else {
        let n = 2 * ppd;
        Ok((0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect())
    }
}

/// Scan `a_range`, bisect every undershoot/overshoot transition and
/// report all brackets.
pub fn find_brackets(
    p: &ModelParams,
    k: i64,
    a_range: (f64, f64),
    cfg: &ShootConfig,
) -> Result<SearchReport> {
    let grid = scan_grid(a_range, cfg.points_per_decade)?;
    let shots: Vec<ShotOutcome> = grid
        .par_iter()
        .map(|&a| shoot(p, a, k, cfg))
        .collect::<Result<_>>()?;
    let scan: Vec<ScanPoint> = shots
        .iter()
        .map(|o| ScanPoint {
            a: o.a,
            class: o.class,
            crossing_count: o.crossing_count,
        })
        .collect();

    if let Some(hit) = shots.iter().find(|o| o.class == ShotClass::Hit) {
        let b = BracketResult {
            a_lo: hit.a,
            a_hi: hit.a,
            a_star: hit.a,
            residual: hit.residual,
            iterations: 0,
            accepted: hit.residual < cfg.shoot_tol,
            r_closest: hit.r_closest,
            outcome: Some(Box::new(hit.clone())),
        };
        return Ok(SearchReport {
            k,
            scan,
            brackets: vec![b],
        });
    }

    let pairs: Vec<(&ShotOutcome, &ShotOutcome)> = shots
        .windows(2)
        .filter(|w| {
            matches!(
                (w[0].class, w[1].class),
                (ShotClass::Undershoot, ShotClass::Overshoot) | (ShotClass::Overshoot, ShotClass::Undershoot)
            )
        })
        .map(|w| (&w[0], &w[1]))
        .collect();
    let brackets = pairs
        .par_iter()
        .map(|(lo, hi)| bisect(p, k, lo, hi, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchReport { k, scan, brackets })
}

fn bisect(
    p: &ModelParams,
    k: i64,
    lo: &ShotOutcome,
    hi: &ShotOutcome,
    cfg: &ShootConfig,
) -> Result<BracketResult> {
    let (mut a_lo, mut a_hi) = (lo.a, hi.a);
    let class_lo = lo.class;
    let mut iterations = 0;
    let mut stopped: Option<ShotOutcome> = None;
    while iterations < cfg.max_bisections {
        let mid = 0.5 * (a_lo + a_hi);
        if mid <= a_lo.min(a_hi) || mid >= a_lo.max(a_hi) {
            break;
        }
        iterations += 1;
        let out = shoot(p, mid, k, cfg)?;
        match out.class {
            ShotClass::Hit | ShotClass::Indeterminate => {
                stopped = Some(out);
                break;
            }
            c if c == class_lo => a_lo = mid,
            _ => a_hi = mid,
        }
        if (a_hi - a_lo).abs() <= cfg.bracket_rel_width * mid.abs() {
            break;
        }
    }
    let best = match stopped {
        Some(out) => out,
        None => shoot(p, 0.5 * (a_lo + a_hi), k, cfg)?,
    };
    let (a_min, a_max) = if a_lo < a_hi { (a_lo, a_hi) } else { (a_hi, a_lo) };
    Ok(BracketResult {
        a_lo: a_min,
        a_hi: a_max,
        a_star: best.a,
        residual: best.residual,
        iterations,
        accepted: best.residual < cfg.shoot_tol,
        r_closest: best.r_closest,
        outcome: Some(Box::new(best)),
    })
}

/// First accepted bracket in scan order.
///
/// Fails with [`Error::NoBracketFound`] when the scan shows no
/// undershoot/overshoot transition, or when no transition refines to a
/// trajectory within `shoot_tol` of `kπ`.
pub fn find_a(p: &ModelParams, k: i64, a_range: (f64, f64), cfg: &ShootConfig) -> Result<BracketResult> {
    let report = find_brackets(p, k, a_range, cfg)?;
    let n = report.brackets.len();
    report.brackets.into_iter().find(|b| b.accepted).ok_or_else(|| {
        Error::NoBracketFound(if n == 0 {
            "no undershoot/overshoot transition on the scan grid".into()
        } else {
            format!("{n} transition(s) found but none converges to k*pi within shoot_tol")
        })
    })
}
