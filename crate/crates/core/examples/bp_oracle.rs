//! Integrate the conformal case `λ = ω = 0` and compare with the closed-form
//! instanton `2·arctan(a r^m / (2 m!))`, pointwise and in energy.
//!
//! ```text
//! cargo run --example bp_oracle
//! ```

use vortexlab::analyze::energy;
use vortexlab::integrate::{integrate, IntegrateConfig};
use vortexlab::shoot::bp_exact;
use vortexlab::ModelParams;

fn main() -> vortexlab::Result<()> {
    println!("{:>2} {:>6} {:>12} {:>14} {:>10}", "m", "a", "sup|h-BP|", "J(r<=1e4)", "|J-4m|");
    for m in 1..=3 {
        let p = ModelParams::conformal(m)?;
        let a = 2.0 * (1..=m).product::<i32>() as f64;

        let near = integrate(&p, a, &IntegrateConfig { r_max: 20.0, ..Default::default() })?;
        let sup = near
            .samples
            .iter()
            .map(|s| (s.h - bp_exact(m, a, s.r)).abs())
            .fold(0.0, f64::max);

        let far = integrate(
            &p,
            a,
            &IntegrateConfig {
                r_max: 1e4,
                run_to_r_max: true,
                ..Default::default()
            },
        )?;
        let j = energy(&far);
        println!("{m:>2} {a:>6} {sup:>12.3e} {j:>14.9} {:>10.2e}", (j - 4.0 * m as f64).abs());
    }
    Ok(())
}
