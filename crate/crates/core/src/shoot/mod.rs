//! Shooting on the initial slope `a` for the boundary condition
//! `h(r) → kπ`.
//!
//! A single shot is classified as soon as its fate relative to the target
//! level is clear: it either passes the target (`Overshoot`) or turns back
//! before reaching it (`Undershoot`). A change of class between adjacent
//! scan points brackets a trajectory that approaches `kπ` without doing
//! either, which bisection then refines.

mod bracket;

use serde::{Deserialize, Serialize};

pub use bracket::{find_a, find_brackets, BracketResult, ScanPoint, SearchReport};

use crate::error::Result;
use crate::integrate::{integrate_with, IntegrateConfig, RadialProfile, Sample, TerminalEvent, TerminalKind};
use crate::model::{level, ModelParams};

/// Closed-form instanton `2·arctan(a r^|m| / (2|m|!))` of the conformal case.
pub fn bp_exact(m: i32, a: f64, r: f64) -> f64 {
    let m = m.unsigned_abs();
    let fact: f64 = (1..=m).map(f64::from).product();
    2.0 * (a / (2.0 * fact) * r.powi(m as i32)).atan()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootConfig {
    pub integrate: IntegrateConfig,
    pub shoot_tol: f64,
    /// How far past `kπ` a trajectory must go to count as an overshoot.
    pub conv_margin: f64,
    pub points_per_decade: usize,
    pub max_bisections: usize,
    /// Relative bracket width at which bisection stops.
    pub bracket_rel_width: f64,
    /// Radius used instead of `r_max` when `λ = ω = 0`, where the approach
    /// to `kπ` is algebraic and only very large radii get within tolerance.
    pub r_max_scale_free: f64,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            integrate: IntegrateConfig::default(),
            shoot_tol: 1e-6,
            conv_margin: 0.0,
            points_per_decade: 64,
            max_bisections: 200,
            bracket_rel_width: 1e-14,
            r_max_scale_free: 1e10,
        }
    }
}

impl ShootConfig {
    pub(crate) fn integrate_for(&self, p: &ModelParams) -> IntegrateConfig {
        let mut cfg = self.integrate;
        cfg.run_to_r_max = false;
        if p.is_conformal() {
            cfg.r_max = cfg.r_max.max(self.r_max_scale_free);
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShotClass {
    Undershoot,
    Overshoot,
    Hit,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotOutcome {
    pub a: f64,
    pub class: ShotClass,
    pub terminal: TerminalEvent,
    /// Sign changes of `h - kπ` along the profile.
    pub crossing_count: usize,
    /// Smallest `max(|h - kπ|, |h'|)` seen while approaching the target.
    pub residual: f64,
    /// Radius where `residual` was attained.
    pub r_closest: f64,
    #[serde(skip)]
    pub profile: RadialProfile,
}

/// Tracks the approach to `kπ` and decides the shot as early as possible.
struct Approach {
    k: i64,
    target: f64,
    orient: f64,
    margin: f64,
    /// Turning points this close to the target count as hits.
    hit_band: f64,
    /// Turning points still expected before the final approach (one when
    /// the target is the starting level).
    turns_left: u32,
    class: Option<ShotClass>,
    residual: f64,
    r_closest: f64,
}

impl Approach {
    fn new(k: i64, a: f64, margin: f64, hit_band: f64) -> Self {
        let orient = if k != 0 { k.signum() as f64 } else { a.signum() };
        Self {
            k,
            target: level(k),
            orient,
            margin,
            hit_band,
            turns_left: u32::from(k == 0),
            class: None,
            residual: f64::INFINITY,
            r_closest: f64::NAN,
        }
    }

    fn observe(&mut self, s: &Sample) -> bool {
        let y = self.orient * (s.h - self.target);
        let dy = self.orient * s.dh;
        if self.turns_left > 0 {
            if dy < 0.0 {
                self.turns_left -= 1;
            } else if self.k == 0 && y > std::f64::consts::PI {
                // left the basin of the starting level
                self.class = Some(ShotClass::Indeterminate);
                return true;
            } else {
                return false;
            }
        }
        // final approach: y < 0 moving up (k ≠ 0) or y > 0 moving down (k = 0)
        let (dist, toward) = if self.k != 0 { (-y, dy) } else { (y, -dy) };
        let res = dist.abs().max(s.dh.abs());
        if res < self.residual {
            self.residual = res;
            self.r_closest = s.r;
        }
        if dist < -self.margin.max(self.hit_band) {
            self.class = Some(ShotClass::Overshoot);
            return true;
        }
        if toward < 0.0 {
            if dist.abs() <= self.hit_band {
                self.class = Some(ShotClass::Hit);
                return true;
            }
            if dist > 0.0 {
                self.class = Some(ShotClass::Undershoot);
                return true;
            }
        }
        false
    }
}

/// Integrate one shot and classify it relative to the target `kπ`.
pub fn shoot(p: &ModelParams, a: f64, k: i64, cfg: &ShootConfig) -> Result<ShotOutcome> {
    let icfg = cfg.integrate_for(p);
    // With λ = ω = 0 every a > 0 is an instanton and the r^m mode of the
    // linearisation amplifies integration error without bound, so a shot
    // that turns within shoot_tol of kπ is as close as the integration can
    // tell.
    let hit_band = if p.is_conformal() { cfg.shoot_tol } else { 0.0 };
    let mut approach = Approach::new(k, a, cfg.conv_margin, hit_band);
    let profile = {
        let approach = &mut approach;
        integrate_with(p, a, &icfg, move |samples: &[Sample]| {
            approach.observe(samples.last().expect("non-empty"))
        })?
    };
    let crossing_count = count_crossings(&profile.samples, level(k));

    let class = match (approach.class, profile.terminal.kind) {
        (Some(c), _) => c,
        (None, TerminalKind::ConvergedTo(j)) if j == k => ShotClass::Hit,
        (None, TerminalKind::ConvergedTo(j)) if k != 0 => {
            if (j * k.signum()) < k.abs() {
                ShotClass::Undershoot
            } else {
                ShotClass::Overshoot
            }
        }
        _ if a == 0.0 && k == 0 => ShotClass::Hit,
        _ => ShotClass::Indeterminate,
    };

    let (mut residual, mut r_closest) = (approach.residual, approach.r_closest);
    if class == ShotClass::Hit && approach.class.is_none() {
        let last = profile.last().copied().expect("non-empty profile");
        residual = (last.h - level(k)).abs().max(last.dh.abs());
        r_closest = last.r;
    }

    Ok(ShotOutcome {
        a,
        class,
        terminal: profile.terminal.clone(),
        crossing_count,
        residual,
        r_closest,
        profile,
    })
}

pub(crate) fn count_crossings(samples: &[Sample], target: f64) -> usize {
    let mut count = 0;
    let mut prev_sign = 0.0;
    for s in samples {
        let d = s.h - target;
        if d == 0.0 {
            continue;
        }
        let sg = d.signum();
        if prev_sign != 0.0 && sg != prev_sign {
            count += 1;
        }
        prev_sign = sg;
    }
    count
}

/// The solution profile ends where `|h - kπ|` is still this multiple of
/// the shot's residual, so that the growing mode excited by the error in
/// `a` stays at about one percent of the decaying one.
const SOLUTION_CUT_FACTOR: f64 = 100.0;

impl ShotOutcome {
    /// The trajectory labelled as converged to `kπ`, cut before the
    /// shooting error becomes visible: at the last radius before the
    /// closest approach where `|h - kπ| >= 100·residual`, or at the closest
    /// approach itself if there is none.
    pub fn solution_profile(&self, k: i64) -> RadialProfile {
        if !self.r_closest.is_finite() || self.class == ShotClass::Hit {
            return self.profile.clone();
        }
        let target = level(k);
        let floor = SOLUTION_CUT_FACTOR * self.residual;
        let r_cut = self
            .profile
            .samples
            .iter()
            .take_while(|s| s.r <= self.r_closest)
            .filter(|s| (s.h - target).abs() >= floor)
            .map(|s| s.r)
            .last()
            .unwrap_or(self.r_closest);
        self.profile.truncated(
            r_cut,
            TerminalEvent::new(TerminalKind::ConvergedTo(k), r_cut).with_diagnostic(format!(
                "cut before closest approach at r = {:e}, residual {:e}",
                self.r_closest, self.residual
            )),
        )
    }
}
