//! Text rendering of the case table over a square of `(λ, ω)`.
//!
//! ```text
//! cargo run --example phase_map -- 21
//! ```

use vortexlab::model::{classify_params, CaseTag};

fn glyph(tag: CaseTag) -> char {
    match tag {
        CaseTag::CaseI => 'I',
        CaseTag::CaseII => '=',
        CaseTag::CaseIII => 'x',
        CaseTag::CaseIV => '4',
        CaseTag::CaseV => '5',
        CaseTag::NoFiniteEnergyVortex => '.',
    }
}

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(21).max(2);
    let at = |i: usize| -1.0 + 2.0 * i as f64 / (n - 1) as f64;
    println!("omega runs upward, lambda to the right, both over [-1, 1]");
    for j in (0..n).rev() {
        let row: String = (0..n).map(|i| glyph(classify_params(at(i), at(j)).tag)).collect();
        println!("{:>6.2} {row}", at(j));
    }
    println!("I: case I  =: lambda = omega  x: lambda = -omega  4, 5: cases IV, V  .: none");
}
