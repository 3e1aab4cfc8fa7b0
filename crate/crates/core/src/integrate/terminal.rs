//! Classification of a trajectory in progress.
//!
//! Precedence is `Diverged > ConvergedTo > Oscillating > Continue`.

use serde::{Deserialize, Serialize};

use super::Sample;
use crate::model::{level, nearest_level, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "k")]
pub enum TerminalKind {
    ConvergedTo(i64),
    Oscillating(i64),
    Diverged,
    Exhausted,
    /// Stopped by a caller-supplied monitor (shooting decided early).
    Interrupted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalEvent {
    pub kind: TerminalKind,
    pub r_final: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl TerminalEvent {
    pub fn new(kind: TerminalKind, r_final: f64) -> Self {
        Self {
            kind,
            r_final,
            diagnostic: None,
        }
    }

    pub fn with_diagnostic(mut self, msg: impl Into<String>) -> Self {
        self.diagnostic = Some(msg.into());
        self
    }
}

/// Thresholds for [`TerminalDetector`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerminalRules {
    pub conv_tol: f64,
    /// Trailing window, in accepted steps, for the convergence test.
    pub window: usize,
    /// Sign changes of `h - kπ` required to call a trajectory oscillating.
    pub n_osc: usize,
    /// Extra multiples of `π` beyond the start level tolerated before
    /// declaring divergence.
    pub k_div: u32,
    /// Test `|h - kπ|` only, skipping `|r h'|`. Needed where convergence
    /// is algebraic (the conformal case).
    pub position_only: bool,
}

impl Default for TerminalRules {
    fn default() -> Self {
        Self {
            conv_tol: 1e-8,
            window: 32,
            n_osc: 8,
            k_div: 3,
            position_only: false,
        }
    }
}

/// Incremental detector fed one accepted sample at a time.
#[derive(Debug, Clone)]
pub struct TerminalDetector {
    rules: TerminalRules,
    params: ModelParams,
    div_threshold: f64,
    extrema: Vec<f64>,
    last: Option<Sample>,
}

impl TerminalDetector {
    pub fn new(params: ModelParams, rules: TerminalRules, h_start: f64) -> Self {
        let div_threshold =
            ((h_start.abs() / std::f64::consts::PI).ceil() + rules.k_div as f64) * std::f64::consts::PI;
        Self {
            rules,
            params,
            div_threshold,
            extrema: Vec::new(),
            last: None,
        }
    }

    pub fn rules(&self) -> &TerminalRules {
        &self.rules
    }

    /// Record a new sample. Must be called in order of increasing `r`.
    pub fn push(&mut self, s: Sample) {
        if let Some(prev) = self.last {
            if prev.dh * s.dh < 0.0 || (prev.dh != 0.0 && s.dh == 0.0) {
                let ext = if prev.dh > 0.0 { prev.h.max(s.h) } else { prev.h.min(s.h) };
                self.extrema.push(ext);
            }
        }
        self.last = Some(s);
    }

    /// Check the state after the most recent [`push`](Self::push).
    /// `samples` must be the full list pushed so far.
    pub fn check(&self, samples: &[Sample]) -> Option<TerminalKind> {
        let last = *samples.last()?;
        if !last.h.is_finite() || !last.dh.is_finite() || last.h.abs() > self.div_threshold {
            return Some(TerminalKind::Diverged);
        }
        if let Some(k) = self.converged(samples) {
            return Some(TerminalKind::ConvergedTo(k));
        }
        self.oscillating().map(TerminalKind::Oscillating)
    }

    fn converged(&self, samples: &[Sample]) -> Option<i64> {
        let w = self.rules.window;
        if samples.len() < w || w == 0 {
            return None;
        }
        let k = nearest_level(samples.last()?.h);
        let target = level(k);
        let tol = self.rules.conv_tol;
        let ok = samples[samples.len() - w..].iter().all(|s| {
            (s.h - target).abs() < tol && (self.rules.position_only || (s.r * s.dh).abs() < tol)
        });
        ok.then_some(k)
    }

    fn oscillating(&self) -> Option<i64> {
        let n = self.rules.n_osc + 1;
        if self.extrema.len() < n || n < 3 {
            return None;
        }
        let tail = &self.extrema[self.extrema.len() - n..];
        let mean = tail.iter().sum::<f64>() / n as f64;
        let k = nearest_level(mean);
        if self.params.g_prime(level(k)) >= 0.0 {
            return None;
        }
        let dev: Vec<f64> = tail.iter().map(|e| e - level(k)).collect();
        let alternates = dev.windows(2).all(|w| w[0] * w[1] < 0.0);
        let decays = dev.windows(3).all(|w| w[2].abs() < w[0].abs());
        (alternates && decays).then_some(k)
    }
}

/// Classify a complete or partial sample list as seen at its last sample.
///
/// `h_start` sets the divergence threshold and is normally `h(r0)`.
pub fn detect_terminal(
    params: &ModelParams,
    samples: &[Sample],
    rules: TerminalRules,
    h_start: f64,
) -> Option<TerminalKind> {
    let mut det = TerminalDetector::new(*params, rules, h_start);
    for s in samples {
        det.push(*s);
    }
    det.check(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params(lambda: f64, omega: f64) -> ModelParams {
        ModelParams::new(lambda, omega, 1).unwrap()
    }

    fn sampled(f: impl Fn(f64) -> (f64, f64), r0: f64, r1: f64, n: usize) -> Vec<Sample> {
        (0..n)
            .map(|i| {
                let r = r0 + (r1 - r0) * i as f64 / (n - 1) as f64;
                let (h, dh) = f(r);
                Sample { r, h, dh }
            })
            .collect()
    }

    #[test]
    fn converged_window() {
        let s = sampled(|r| (PI * (1.0 + 1e-12 * (r).sin()), 1e-14), 10.0, 20.0, 40);
        let got = detect_terminal(&params(1.0, 0.5), &s, TerminalRules::default(), 1e-3);
        assert_eq!(got, Some(TerminalKind::ConvergedTo(1)));
    }

    #[test]
    fn convergence_needs_small_radial_slope() {
        // |h - π| is tiny but r·h' is not
        let s = sampled(|_| (PI, 1e-6), 10.0, 20.0, 40);
        let rules = TerminalRules::default();
        assert_eq!(detect_terminal(&params(1.0, 0.5), &s, rules, 1e-3), None);
        let rules = TerminalRules {
            position_only: true,
            ..rules
        };
        assert_eq!(
            detect_terminal(&params(1.0, 0.5), &s, rules, 1e-3),
            Some(TerminalKind::ConvergedTo(1))
        );
    }

    #[test]
    fn divergence_threshold() {
        let s = sampled(|r| (r, 1.0), 0.0, 8.0 * PI + 0.1, 200);
        let rules = TerminalRules::default();
        assert_eq!(
            detect_terminal(&params(1.0, 0.5), &s, rules, 1e-6),
            Some(TerminalKind::Diverged)
        );
        // below (1 + 3)π nothing fires
        let s = sampled(|r| (r, 1.0), 0.0, 3.9 * PI, 200);
        assert_eq!(detect_terminal(&params(1.0, 0.5), &s, rules, 1e-6), None);
    }

    #[test]
    fn non_finite_is_divergence() {
        let s = vec![Sample { r: 1.0, h: 0.1, dh: f64::NAN }];
        assert_eq!(
            detect_terminal(&params(1.0, 0.5), &s, TerminalRules::default(), 0.0),
            Some(TerminalKind::Diverged)
        );
    }

    #[test]
    fn decaying_oscillation_around_pi() {
        let f = |r: f64| {
            let amp = r.powf(-0.5);
            (PI + amp * r.cos(), -amp * r.sin() - 0.5 * amp / r * r.cos())
        };
        // 12 sign changes of h - π on [20, 20 + 12π]
        let s = sampled(f, 20.0, 20.0 + 12.0 * PI, 4000);
        assert_eq!(
            detect_terminal(&params(0.0, 1.0), &s, TerminalRules::default(), 1e-3),
            Some(TerminalKind::Oscillating(1))
        );
        // g'(π) > 0 rules out a decaying oscillation around π
        assert_eq!(detect_terminal(&params(1.0, 0.5), &s, TerminalRules::default(), 1e-3), None);
    }

    #[test]
    fn growing_oscillation_is_not_oscillating() {
        let f = |r: f64| {
            let amp = 0.01 * r.sqrt();
            (PI + amp * r.cos(), -amp * r.sin())
        };
        let s = sampled(f, 20.0, 20.0 + 12.0 * PI, 4000);
        assert_eq!(detect_terminal(&params(0.0, 1.0), &s, TerminalRules::default(), 1e-3), None);
    }

    #[test]
    fn divergence_takes_precedence() {
        let mut s = sampled(|_| (PI, 0.0), 1.0, 10.0, 40);
        s.push(Sample {
            r: 11.0,
            h: 50.0,
            dh: 0.0,
        });
        assert_eq!(
            detect_terminal(&params(1.0, 0.5), &s, TerminalRules::default(), 0.1),
            Some(TerminalKind::Diverged)
        );
    }
}
