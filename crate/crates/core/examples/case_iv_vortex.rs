//! Shoot for the vortex `h → π` at `λ = 1, ω = 0.5, m = 1` and analyse it:
//! energy, Pohozaev residual and the exponential tail.
//!
//! ```text
//! cargo run --example case_iv_vortex
//! ```

use vortexlab::analyze::{energy, pohozaev_residual, tail_report};
use vortexlab::shoot::{find_brackets, ShootConfig};
use vortexlab::ModelParams;

fn main() -> vortexlab::Result<()> {
    let p = ModelParams::new(1.0, 0.5, 1)?;
    let report = find_brackets(&p, 1, (0.1, 10.0), &ShootConfig::default())?;
    for b in &report.brackets {
        println!(
            "bracket [{:.15}, {:.15}] a* = {:.13} residual {:.2e} after {} bisections{}",
            b.a_lo,
            b.a_hi,
            b.a_star,
            b.residual,
            b.iterations,
            if b.accepted { "" } else { " (rejected)" }
        );
    }
    let best = report.accepted().next().expect("a solution in (0.1, 10)");
    let prof = best.solution_profile(1).expect("bisected shot");

    let tail = tail_report(&p, &prof, 1)?;
    println!("energy J = {:.10}", energy(&prof));
    println!("Pohozaev sup residual = {:.2e}", pohozaev_residual(&p, &prof, 1).sup_relative_residual);
    println!(
        "tail {:?}, monotone from r = {:?}: rate {:.4}, guaranteed {:.4}, linearised {:.4}",
        tail.direction, tail.monotone_from, tail.fitted_rate, tail.paper_bound, tail.linearized_rate
    );

    println!("\n{:>8} {:>14} {:>14}", "r", "h", "h'");
    for r in [0.5, 1.0, 2.0, 4.0, 8.0, 12.0, 16.0, 20.0] {
        if let Some((h, dh)) = prof.eval(r) {
            println!("{r:>8.2} {h:>14.10} {dh:>14.6e}");
        }
    }
    Ok(())
}
