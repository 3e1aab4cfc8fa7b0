//! Initial-value integration of the profile equation from the singular
//! origin.
//!
//! A trajectory is started from the two-term series at a small radius
//! `r0` (see [`series_start`]) and advanced with an adaptive Dormand–Prince
//! 5(4) pair. Every accepted step is recorded; cubic Hermite interpolation
//! between step points serves as dense output.

mod dopri;
mod series;
mod terminal;

use serde::{Deserialize, Serialize};

pub use series::{series_start, SeriesCoefficients, StartState, MAX_HANDOFF_RADIUS};
pub use terminal::{detect_terminal, TerminalDetector, TerminalEvent, TerminalKind, TerminalRules};

use crate::error::{Error, Result};
use crate::model::{rhs_unchecked, ModelParams};
use dopri::Stepper;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub r: f64,
    pub h: f64,
    pub dh: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateConfig {
    pub r_max: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub conv_tol: f64,
    pub series_tol: f64,
    pub window: usize,
    pub n_osc: usize,
    pub k_div: u32,
    /// Ignore convergence and oscillation events and keep going to
    /// `r_max`; the event is then classified once at the end.
    pub run_to_r_max: bool,
    pub max_steps: usize,
}

impl Default for IntegrateConfig {
    fn default() -> Self {
        Self {
            r_max: 200.0,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            conv_tol: 1e-8,
            series_tol: 1e-12,
            window: 32,
            n_osc: 8,
            k_div: 3,
            run_to_r_max: false,
            max_steps: 2_000_000,
        }
    }
}

impl IntegrateConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("r_max", self.r_max),
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("conv_tol", self.conv_tol),
            ("series_tol", self.series_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be positive".into()));
        }
        Ok(())
    }

    pub fn rules_for(&self, p: &ModelParams) -> TerminalRules {
        TerminalRules {
            conv_tol: self.conv_tol,
            window: self.window,
            n_osc: self.n_osc,
            k_div: self.k_div,
            position_only: p.is_conformal(),
        }
    }

    /// Same configuration with both integrator tolerances scaled.
    pub fn with_tolerance_scale(mut self, factor: f64) -> Self {
        self.rel_tol *= factor;
        self.abs_tol *= factor;
        self
    }
}

/// A computed trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub samples: Vec<Sample>,
    pub terminal: TerminalEvent,
    pub params: ModelParams,
    pub a: f64,
    pub start: StartState,
}

impl RadialProfile {
    /// Wrap externally computed samples (for example a closed form) so the
    /// analysis functions can be applied to them. The head `[0, r0)` with
    /// `r0` the first sample radius is taken as identically zero.
    pub fn from_samples(params: ModelParams, samples: Vec<Sample>, terminal: TerminalEvent) -> Result<Self> {
        let first = samples.first().ok_or(Error::EmptyProfile)?;
        if !samples.windows(2).all(|w| w[0].r < w[1].r) || !(first.r > 0.0) {
            return Err(Error::InvalidConfig("sample radii must be positive and increasing".into()));
        }
        let mut start = series_start(&params, 0.0, 1e-12)?;
        start.r0 = first.r;
        Ok(Self {
            samples,
            terminal,
            params,
            a: 0.0,
            start,
        })
    }

    pub fn r0(&self) -> f64 {
        self.start.r0
    }

    pub fn r_final(&self) -> f64 {
        self.samples.last().map_or(self.start.r0, |s| s.r)
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Interval index `i` with `samples[i].r <= r <= samples[i+1].r`.
    fn interval(&self, r: f64) -> Option<usize> {
        let n = self.samples.len();
        if n < 2 || r < self.samples[0].r || r > self.samples[n - 1].r {
            return None;
        }
        let idx = self.samples.partition_point(|s| s.r <= r);
        Some(idx.clamp(1, n - 1) - 1)
    }

    /// Dense output `(h, h')` at `r` by cubic Hermite interpolation on the
    /// step interval containing `r`. `None` outside `[r0, r_final]`; on
    /// `[0, r0)` the series is used.
    pub fn eval(&self, r: f64) -> Option<(f64, f64)> {
        if r >= 0.0 && r < self.start.r0 {
            return Some(self.start.coefficients.eval(r));
        }
        if self.samples.len() == 1 && r == self.samples[0].r {
            return Some((self.samples[0].h, self.samples[0].dh));
        }
        let i = self.interval(r)?;
        Some(self.hermite(i, r))
    }

    pub(crate) fn hermite(&self, i: usize, r: f64) -> (f64, f64) {
        let (s0, s1) = (self.samples[i], self.samples[i + 1]);
        let dr = s1.r - s0.r;
        if dr <= 0.0 {
            return (s0.h, s0.dh);
        }
        let t = (r - s0.r) / dr;
        let dd0 = rhs_unchecked(&self.params, s0.r, s0.h, s0.dh).1;
        let dd1 = rhs_unchecked(&self.params, s1.r, s1.h, s1.dh).1;
        (
            hermite(t, dr, s0.h, s0.dh, s1.h, s1.dh),
            hermite(t, dr, s0.dh, dd0, s1.dh, dd1),
        )
    }

    /// Profile cut at `r_cut`, with a new terminal event.
    pub fn truncated(&self, r_cut: f64, terminal: TerminalEvent) -> RadialProfile {
        let mut samples: Vec<Sample> = self.samples.iter().copied().filter(|s| s.r < r_cut).collect();
        if let Some((h, dh)) = self.eval(r_cut) {
            if samples.last().map_or(true, |s| s.r < r_cut) {
                samples.push(Sample { r: r_cut, h, dh });
            }
        }
        RadialProfile {
            samples,
            terminal,
            params: self.params,
            a: self.a,
            start: self.start,
        }
    }
}

fn hermite(t: f64, dr: f64, y0: f64, d0: f64, y1: f64, d1: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * dr * d0 + h01 * y1 + h11 * dr * d1
}

/// Hook called after every accepted step. Returning `true` stops the
/// integration with [`TerminalKind::Interrupted`].
pub trait StepMonitor {
    fn on_step(&mut self, samples: &[Sample]) -> bool;
}

impl<F: FnMut(&[Sample]) -> bool> StepMonitor for F {
    fn on_step(&mut self, samples: &[Sample]) -> bool {
        self(samples)
    }
}

struct NoMonitor;

impl StepMonitor for NoMonitor {
    fn on_step(&mut self, _: &[Sample]) -> bool {
        false
    }
}

/// Integrate from the series start to the first terminal event or
/// `cfg.r_max`.
pub fn integrate(p: &ModelParams, a: f64, cfg: &IntegrateConfig) -> Result<RadialProfile> {
    integrate_with(p, a, cfg, NoMonitor)
}

pub fn integrate_with<M: StepMonitor>(
    p: &ModelParams,
    a: f64,
    cfg: &IntegrateConfig,
    mut monitor: M,
) -> Result<RadialProfile> {
    cfg.validate()?;
    let start = series_start(p, a, cfg.series_tol)?;
    if cfg.r_max <= start.r0 {
        return Err(Error::InvalidConfig(format!(
            "r_max = {} does not exceed the series hand-off radius {}",
            cfg.r_max, start.r0
        )));
    }
    let first = Sample {
        r: start.r0,
        h: start.h,
        dh: start.dh,
    };
    let profile = |samples, terminal| RadialProfile {
        samples,
        terminal,
        params: *p,
        a,
        start,
    };

    if a == 0.0 {
        let samples = vec![first, Sample { r: cfg.r_max, h: 0.0, dh: 0.0 }];
        return Ok(profile(samples, TerminalEvent::new(TerminalKind::Exhausted, cfg.r_max)));
    }

    let rules = cfg.rules_for(p);
    let mut detector = TerminalDetector::new(*p, rules, start.h);
    let mut samples = vec![first];
    detector.push(first);

    let mut stepper = Stepper::new(p, cfg.rel_tol, cfg.abs_tol);
    let mut r = start.r0;
    let mut y = [start.h, start.dh];
    let mut k1 = stepper.deriv(r, y);
    let mut step = stepper.initial_step(r, y, k1, cfg.r_max - r);

    loop {
        let remaining = cfg.r_max - r;
        if remaining <= 1e-12 * cfg.r_max {
            let kind = if cfg.run_to_r_max {
                match detector.check(&samples) {
                    Some(k @ (TerminalKind::ConvergedTo(_) | TerminalKind::Oscillating(_))) => k,
                    _ => TerminalKind::Exhausted,
                }
            } else {
                TerminalKind::Exhausted
            };
            return Ok(profile(samples, TerminalEvent::new(kind, r)));
        }
        if samples.len() >= cfg.max_steps {
            let ev = TerminalEvent::new(TerminalKind::Exhausted, r)
                .with_diagnostic(format!("step budget of {} exhausted", cfg.max_steps));
            return Ok(profile(samples, ev));
        }

        let last_step = step >= remaining;
        let h_try = if last_step { remaining } else { step };
        let trial = stepper.attempt(r, y, k1, h_try);
        let next = stepper.next_step(h_try, trial.err);

        if trial.err > 1.0 {
            step = next;
            if step < 1e-14 * r.max(1.0) {
                let ev = TerminalEvent::new(TerminalKind::Diverged, r)
                    .with_diagnostic(format!("step size underflow at r = {r:e}"));
                return Ok(profile(samples, ev));
            }
            continue;
        }

        r = if last_step { cfg.r_max } else { r + h_try };
        y = trial.y;
        k1 = trial.dy;
        step = next;
        let s = Sample { r, h: y[0], dh: y[1] };
        samples.push(s);
        detector.push(s);

        match detector.check(&samples) {
            Some(TerminalKind::Diverged) => {
                return Ok(profile(samples, TerminalEvent::new(TerminalKind::Diverged, r)));
            }
            Some(kind) if !cfg.run_to_r_max => {
                return Ok(profile(samples, TerminalEvent::new(kind, r)));
            }
            _ => {}
        }
        if monitor.on_step(&samples) {
            return Ok(profile(samples, TerminalEvent::new(TerminalKind::Interrupted, r)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(m: i32, a: f64, r: f64) -> f64 {
        let mm = m.unsigned_abs();
        2.0 * (a / (2.0 * series::factorial(mm)) * r.powi(mm as i32)).atan()
    }

    #[test]
    fn zero_shot_is_constant() {
        let p = ModelParams::new(1.0, 0.5, 1).unwrap();
        let prof = integrate(&p, 0.0, &IntegrateConfig::default()).unwrap();
        assert_eq!(prof.terminal.kind, TerminalKind::Exhausted);
        assert!(prof.samples.iter().all(|s| s.h == 0.0 && s.dh == 0.0));
    }

    #[test]
    fn instanton_degree_one() {
        let p = ModelParams::conformal(1).unwrap();
        let cfg = IntegrateConfig {
            r_max: 20.0,
            ..Default::default()
        };
        let prof = integrate(&p, 2.0, &cfg).unwrap();
        assert_eq!(prof.terminal.kind, TerminalKind::Exhausted);
        let err = prof
            .samples
            .iter()
            .map(|s| (s.h - 2.0 * s.r.atan()).abs())
            .fold(0.0, f64::max);
        assert!(err < 10.0 * cfg.rel_tol, "sup error {err:e}");
    }

    #[test]
    fn samples_strictly_increase() {
        let p = ModelParams::new(1.0, 0.5, 2).unwrap();
        let prof = integrate(&p, 0.7, &IntegrateConfig::default()).unwrap();
        assert_eq!(prof.samples[0].r, prof.r0());
        assert!(prof.samples.windows(2).all(|w| w[0].r < w[1].r));
    }

    #[test]
    fn dense_output_tracks_exact_solution() {
        let p = ModelParams::conformal(2).unwrap();
        let cfg = IntegrateConfig {
            r_max: 10.0,
            ..Default::default()
        };
        let prof = integrate(&p, 4.0, &cfg).unwrap();
        for i in 0..1000 {
            let r = 0.001 + i as f64 * 0.00999;
            let (h, _) = prof.eval(r).unwrap();
            assert!((h - bp(2, 4.0, r)).abs() < 1e-8, "r={r}");
        }
        assert!(prof.eval(10.5).is_none());
    }

    #[test]
    fn rejects_bad_config() {
        let p = ModelParams::new(1.0, 0.5, 1).unwrap();
        let cfg = IntegrateConfig {
            rel_tol: -1.0,
            ..Default::default()
        };
        assert!(integrate(&p, 1.0, &cfg).is_err());
        let cfg = IntegrateConfig {
            r_max: 1e-9,
            ..Default::default()
        };
        assert!(integrate(&p, 1.0, &cfg).is_err());
    }

    #[test]
    fn monitor_can_interrupt() {
        let p = ModelParams::new(1.0, 0.5, 1).unwrap();
        let prof = integrate_with(&p, 1.0, &IntegrateConfig::default(), |s: &[Sample]| {
            s.last().unwrap().r > 3.0
        })
        .unwrap();
        assert_eq!(prof.terminal.kind, TerminalKind::Interrupted);
        assert!(prof.r_final() > 3.0 && prof.r_final() < 5.0);
    }
}
