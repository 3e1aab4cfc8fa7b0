//! Running integrals along a profile.
//!
//! Each step interval is integrated with Simpson's rule, the midpoint
//! value coming from the profile's Hermite dense output. The head
//! `[0, r0]` is integrated from the series with an 8-point Gauss–Legendre
//! rule, which is exact to rounding for the low-degree integrands there.

use crate::integrate::RadialProfile;

const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `∫_0^{r0} f(r, h, h') dr` with `(h, h')` from the series.
pub(crate) fn head_integral(profile: &RadialProfile, f: &impl Fn(f64, f64, f64) -> f64) -> f64 {
    let r0 = profile.r0();
    let half = 0.5 * r0;
    let mut acc = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        for r in [half * (1.0 - x), half * (1.0 + x)] {
            let (h, dh) = profile.start.coefficients.eval(r);
            acc += w * f(r, h, dh);
        }
    }
    acc * half
}

/// Cumulative `∫_0^{r_i} f dr` at every sample `r_i`.
pub(crate) fn cumulative(profile: &RadialProfile, f: impl Fn(f64, f64, f64) -> f64) -> Vec<f64> {
    let n = profile.samples.len();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let mut acc = head_integral(profile, &f);
    out.push(acc);
    for i in 0..n - 1 {
        let (s0, s1) = (profile.samples[i], profile.samples[i + 1]);
        let dr = s1.r - s0.r;
        let rm = s0.r + 0.5 * dr;
        let (hm, dhm) = profile.hermite(i, rm);
        acc += dr / 6.0 * (f(s0.r, s0.h, s0.dh) + 4.0 * f(rm, hm, dhm) + f(s1.r, s1.h, s1.dh));
        out.push(acc);
    }
    out
}

/// `∫_{r_from}^{r_to} f dr` on the dense output, Simpson on each step
/// interval (clipped to the range).
pub(crate) fn between(
    profile: &RadialProfile,
    r_from: f64,
    r_to: f64,
    f: impl Fn(f64, f64, f64) -> f64,
) -> f64 {
    let s = &profile.samples;
    if s.len() < 2 || r_to <= r_from {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..s.len() - 1 {
        let a = s[i].r.max(r_from);
        let b = s[i + 1].r.min(r_to);
        if b <= a {
            continue;
        }
        let m = 0.5 * (a + b);
        let fa = {
            let (h, dh) = profile.hermite(i, a);
            f(a, h, dh)
        };
        let fm = {
            let (h, dh) = profile.hermite(i, m);
            f(m, h, dh)
        };
        let fb = {
            let (h, dh) = profile.hermite(i, b);
            f(b, h, dh)
        };
        acc += (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }
    acc
}
