//! The `sweep` command as a library call: labels plus a shooting search in
//! every cell, written as JSON.
//!
//! ```text
//! cargo run --example sweep_report > sweep.json
//! ```

use vortexlab::cli::{cmd_sweep, RunConfig, SweepSpec};

fn main() -> vortexlab::Result<()> {
    let spec = SweepSpec {
        lambda_range: (-1.0, 1.0),
        omega_range: (-1.0, 1.0),
        n: 5,
        line_tol: 0.0,
        empirical: true,
    };
    let rep = cmd_sweep(&spec, &RunConfig::default())?;
    for e in rep.empirical.iter().filter(|e| e.bracket_found) {
        eprintln!("solution at (lambda, omega) = ({}, {}) for k = {}: a* = {:?}", e.lambda, e.omega, e.k, e.a_star);
    }
    println!("{}", serde_json::to_string_pretty(&rep)?);
    Ok(())
}
