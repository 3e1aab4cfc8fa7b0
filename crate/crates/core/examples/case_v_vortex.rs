//! A vortex that leaves 0 and returns to it (`λ = 1, ω = -0.5`, limit
//! `k = 0`), and the odd symmetry `a → -a`, `h → -h`.
//!
//! ```text
//! cargo run --example case_v_vortex
//! ```

use vortexlab::analyze::tail_report;
use vortexlab::integrate::{integrate, IntegrateConfig};
use vortexlab::model::classify_params;
use vortexlab::shoot::{find_a, ShootConfig};
use vortexlab::ModelParams;

fn main() -> vortexlab::Result<()> {
    let label = classify_params(1.0, -0.5);
    println!("label {:?}, admissible limits {:?}", label.tag, label.admissible_limit_parity);

    for m in [1, 2] {
        let p = ModelParams::new(1.0, -0.5, m)?;
        let b = find_a(&p, 0, (0.1, 10.0), &ShootConfig::default())?;
        let prof = b.solution_profile(0).expect("bisected shot");
        let peak = prof.samples.iter().max_by(|x, y| x.h.total_cmp(&y.h)).unwrap();
        let tail = tail_report(&p, &prof, 0)?;
        println!(
            "m = {m}: a* = {:.12} peak h = {:.6} at r = {:.4}, tail rate {:.4} (linearised {:.4})",
            b.a_star, peak.h, peak.r, tail.fitted_rate, tail.linearized_rate
        );

        let cfg = IntegrateConfig { r_max: 20.0, ..Default::default() };
        let up = integrate(&p, b.a_star, &cfg)?;
        let down = integrate(&p, -b.a_star, &cfg)?;
        let asym = up
            .samples
            .iter()
            .zip(&down.samples)
            .map(|(u, d)| (u.h + d.h).abs())
            .fold(0.0, f64::max);
        println!("        max |h(a*) + h(-a*)| on [r0, 20] = {asym:.1e}");
    }
    Ok(())
}
