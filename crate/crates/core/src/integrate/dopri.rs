//! Dormand–Prince 5(4) pair with a PI step-size controller, specialised
//! to the two-dimensional state `(h, h')`.

use crate::model::{rhs_unchecked, ModelParams};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// b5 - b4
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// continuous extension; the quartic correction to the cubic Hermite
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const ALPHA: f64 = 0.2 - 0.75 * BETA;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

pub(crate) type State = [f64; 2];

#[inline]
fn f(p: &ModelParams, r: f64, y: State) -> State {
    let (a, b) = rhs_unchecked(p, r, y[0], y[1]);
    [a, b]
}

#[inline]
fn axpy(y: State, terms: &[(f64, State)], step: f64) -> State {
    let mut out = y;
    for &(c, k) in terms {
        out[0] += step * c * k[0];
        out[1] += step * c * k[1];
    }
    out
}

pub(crate) struct Trial {
    pub y: State,
    pub dy: State,
    pub err: f64,
}

pub(crate) struct Stepper<'a> {
    p: &'a ModelParams,
    rel_tol: f64,
    abs_tol: f64,
    err_prev: f64,
    rejected_last: bool,
}

impl<'a> Stepper<'a> {
    pub fn new(p: &'a ModelParams, rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            p,
            rel_tol,
            abs_tol,
            err_prev: 1e-4,
            rejected_last: false,
        }
    }

    pub fn deriv(&self, r: f64, y: State) -> State {
        f(self.p, r, y)
    }

    /// One trial step from `(r, y)` with slope `k1` (FSAL).
    pub fn attempt(&self, r: f64, y: State, k1: State, step: f64) -> Trial {
        let p = self.p;
        let k2 = f(p, r + C2 * step, axpy(y, &[(A21, k1)], step));
        let k3 = f(p, r + C3 * step, axpy(y, &[(A31, k1), (A32, k2)], step));
        let k4 = f(p, r + C4 * step, axpy(y, &[(A41, k1), (A42, k2), (A43, k3)], step));
        let k5 = f(
            p,
            r + C5 * step,
            axpy(y, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)], step),
        );
        let k6 = f(
            p,
            r + step,
            axpy(y, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)], step),
        );
        let y_new = axpy(
            y,
            &[(A71, k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)],
            step,
        );
        let k7 = f(p, r + step, y_new);

        let mut sq = 0.0;
        let mut dense: f64 = 0.0;
        for i in 0..2 {
            let e = step
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.abs_tol + self.rel_tol * y[i].abs().max(y_new[i].abs());
            sq += (e / sc) * (e / sc);
            // Hermite deviates from the continuous extension by
            // θ²(1-θ)²·q, largest at the midpoint
            let q = step
                * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            dense = dense.max((q / 16.0).abs() / sc);
        }
        let err = (sq / 2.0).sqrt().max(dense);
        Trial {
            y: y_new,
            dy: k7,
            err: if err.is_finite() && y_new.iter().all(|v| v.is_finite()) {
                err
            } else {
                f64::INFINITY
            },
        }
    }

    /// Next step size after a trial with normalised error `err`.
    /// Updates controller memory only on acceptance.
    pub fn next_step(&mut self, step: f64, err: f64) -> f64 {
        if !err.is_finite() {
            self.rejected_last = true;
            return step * FAC_MIN;
        }
        let err = err.max(1e-10);
        if err <= 1.0 {
            let mut fac = SAFETY * err.powf(-ALPHA) * self.err_prev.powf(BETA);
            fac = fac.clamp(FAC_MIN, FAC_MAX);
            if self.rejected_last {
                fac = fac.min(1.0);
            }
            self.err_prev = err;
            self.rejected_last = false;
            step * fac
        } else {
            self.rejected_last = true;
            let fac = (SAFETY * err.powf(-ALPHA)).max(FAC_MIN);
            step * fac
        }
    }

    /// Hairer's starting step heuristic.
    pub fn initial_step(&self, r: f64, y: State, dy: State, span: f64) -> f64 {
        let sc = |i: usize| self.abs_tol + self.rel_tol * y[i].abs();
        let norm = |v: State| ((v[0] / sc(0)).powi(2) / 2.0 + (v[1] / sc(1)).powi(2) / 2.0).sqrt();
        let d0 = norm(y);
        let d1 = norm(dy);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * r.max(1e-3) } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span);
        let y1 = axpy(y, &[(1.0, dy)], h0);
        let dy1 = f(self.p, r + h0, y1);
        let d2 = norm([dy1[0] - dy[0], dy1[1] - dy[1]]) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(1.0 / 5.0)
        };
        (100.0 * h0).min(h1).min(span)
    }
}
