//! Polymer-gas analysis of bounded integer spin systems.
//!
//! The crate rewrites the partition function of a spin system with spins in
//! `{0, ±1, …, ±N}`, a crystal field `D` and pair potentials vanishing on zero
//! spins as a hard-core polymer gas, and checks when its cluster expansion
//! converges. Everything is computed exactly on small finite volumes:
//!
//! - [`model`]: sites, volumes, pair potentials, dominating couplings and the
//!   two structural assumptions on the potential.
//! - [`combinatorics`]: connected graphs, labeled trees, the Penrose map and
//!   the tree-graph bound.
//! - [`polymers`]: polymer activities and their size-resolved bounds.
//! - [`expansion`]: brute-force partition functions, the polymer partition
//!   function, and the truncated cluster series of the pressure.
//! - [`convergence`]: the polymer-gas convergence criterion, its closed-form
//!   sufficient conditions and the analyticity intervals in `β`.
//! - [`cli`]: config parsing and the `verify | scan | activities | expansion`
//!   front end used by the `polyspin` binary.

pub mod cli;
pub mod combinatorics;
pub mod convergence;
mod error;
pub mod expansion;
pub mod model;
pub mod polymers;

pub use error::{Error, Result};

/// Relative tolerance for identities that are exact in real arithmetic.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

/// `|a - b| / max(|a|, |b|)`, or zero when both vanish.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
