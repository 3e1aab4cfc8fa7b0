//! Scan the initial slope `a` for one target level and print where the
//! shot classification changes, followed by every refined bracket.
//!
//! ```text
//! cargo run --example shot_scan -- LAMBDA OMEGA M K A_LO A_HI
//! cargo run --example shot_scan -- -1 0.5 1 1 0.1 10
//! ```

use vortexlab::shoot::{find_brackets, ShootConfig};
use vortexlab::ModelParams;

fn main() -> vortexlab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, default: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    let p = ModelParams::new(num(0, 1.0), num(1, 0.5), num(2, 1.0) as i32)?;
    let k = num(3, 1.0) as i64;
    let range = (num(4, 0.1), num(5, 10.0));

    let rep = find_brackets(&p, k, range, &ShootConfig::default())?;
    println!("lambda = {}, omega = {}, m = {}, k = {k}", p.lambda, p.omega, p.signed_degree());
    let mut last = None;
    for s in &rep.scan {
        if last != Some(s.class) {
            println!("  from a = {:<12.6} {:?} ({} crossings of k*pi)", s.a, s.class, s.crossing_count);
            last = Some(s.class);
        }
    }
    if rep.brackets.is_empty() {
        println!("no transition to refine");
    }
    for b in &rep.brackets {
        println!(
            "  bracket a* = {:.13}, residual {:.2e} at r = {:.3}: {}",
            b.a_star,
            b.residual,
            b.r_closest,
            if b.accepted { "accepted" } else { "rejected" }
        );
    }
    Ok(())
}
