//! Deciding whether collections of quantum probabilities admit a classical
//! (Kolmogorovian) representation, and constructing one when they do.
//!
//! * [`hilbert`]: vectors, projectors, density operators and the trace rule.
//! * [`lattice`]: the subspace lattice, the frequency inequality and a
//!   violating state for every non-commuting pair of projectors.
//! * [`polytope`]: correlation polytopes, LP membership certificates and the
//!   Clauser–Horne system.
//! * [`classical`]: finite probability spaces with exact rational weights.
//! * [`extension`]: one classical space reproducing the quantum
//!   probabilities of several measurements as conditional probabilities.
//! * [`scenarios`]: the worked examples as checked reports.

pub mod classical;
pub mod error;
pub mod extension;
pub mod hilbert;
pub mod lattice;
pub mod polytope;
pub mod random;
pub mod rational;
pub mod scenarios;
pub mod simplex;

pub use error::{Error, Result};
pub use rational::Rational;
