//! Radially equivariant vortex profiles of the easy-axis Landau–Lifshitz
//! equation.
//!
//! The profile `h(r)` solves
//!
//! ```text
//! h'' + h'/r - (m²/r²) sin h cos h = λ sin h cos h + ω sin h,   h(0) = 0, h^(m)(0) = a
//! ```
//!
//! and a vortex is a solution with `h(r) → kπ`. The crate integrates the
//! singular initial-value problem, shoots on `a` for vortex boundary
//! conditions, and measures energy, the Pohozaev identity, exponential tails
//! and oscillatory tails on the computed profiles.

pub mod analyze;
pub mod cli;
pub mod error;
pub mod integrate;
pub mod model;
pub mod shoot;

pub use analyze::{energy, pohozaev_residual};
pub use error::{Error, Result};
pub use integrate::{integrate, IntegrateConfig, RadialProfile, Sample, TerminalEvent, TerminalKind};
pub use model::{classify_params, CaseLabel, CaseTag, ModelParams, Parity};
