//! Oscillation around `π` when `g'(π) < 0` (`λ = 0, ω = 1`): zeros, extrema,
//! the phase function and the growth of the energy.
//!
//! ```text
//! cargo run --example oscillating_tail -- 0.5
//! ```

use vortexlab::analyze::{interleaves, oscillation_report};
use vortexlab::integrate::{integrate, IntegrateConfig};
use vortexlab::ModelParams;

fn main() -> vortexlab::Result<()> {
    let a: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let p = ModelParams::new(0.0, 1.0, 1)?;
    let cfg = IntegrateConfig {
        r_max: 400.0,
        run_to_r_max: true,
        ..Default::default()
    };
    let prof = integrate(&p, a, &cfg)?;
    println!("a = {a}: terminal {:?}", prof.terminal.kind);

    let rep = oscillation_report(&p, &prof, 1)?;
    println!(
        "{} zeros from R0 = {:.4}; interleaving {}; late spacing {:.5} vs pi/alpha = {:.5}",
        rep.zeros.len(),
        rep.start_radius(),
        interleaves(&rep),
        rep.mean_late_spacing,
        std::f64::consts::PI / rep.alpha
    );

    println!("\n{:>10} {:>14}", "R", "J([R0, R])");
    for (r, j) in &rep.partial_energies {
        println!("{r:>10.3} {j:>14.6}");
    }
    let g = rep.energy_growth();
    println!(
        "growth per doubling of R: {:.3} ± {:.3}, diverging: {}",
        g.slope_per_log2, g.slope_std_err, g.diverging
    );

    let late: Vec<_> = rep.phase_samples.iter().filter(|(r, _)| *r > 300.0).take(6).collect();
    println!("\nphase samples near r = 300:");
    for (r, theta) in late {
        println!("  r = {r:.4}  theta = {theta:+.5}");
    }
    Ok(())
}
