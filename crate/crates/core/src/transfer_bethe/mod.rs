//! Solvability witnesses: commuting transfer matrices, Bethe roots for the
//! XXX chain, and their cross-check against exact diagonalization.
//!
//! Conventions, used throughout: rapidities enter as `λ ± i/2`, the bond is
//! `h = P - I`, and a magnon with rapidity `λ` carries energy
//! `-1 / (λ² + 1/4)` and momentum phase `(λ + i/2) / (λ - i/2)`.

mod bethe;
mod spectrum;
mod transfer;

pub use bethe::*;
pub use spectrum::*;
pub use transfer::*;
