//! Stability bounds for atoms and molecules in the ultrarelativistic
//! (zero-mass) Thomas–Fermi–Weizsäcker model.
//!
//! The crate is `no_std` and needs only `alloc`. It covers
//!
//! * the model constants ([`params`]),
//! * radial quadrature and the four energy terms for spherical densities ([`quadrature`]),
//! * atomic and molecular critical charges ([`critical_charge`]),
//! * Voronoi half-distances and the cell potentials Φ and W ([`geometry`]),
//! * the executable molecular stability certificate ([`certificate`]),
//! * numerical checks of the ball-localized uncertainty principle ([`uncertainty_lab`]),
//! * a derivative-free search for negative-energy trial densities ([`instability_search`]),
//! * property suites with pass/fail summaries ([`suites`]).
//!
//! Natural units ħ = c = 1 are used throughout. Lengths carry an arbitrary
//! unit because the functional is 1-homogeneous under `ρ(x) ↦ t³ρ(tx)`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod certificate;
pub mod critical_charge;
mod error;
pub mod geometry;
pub mod instability_search;
pub mod optimize;
pub mod params;
pub mod quadrature;
pub mod suites;
pub mod uncertainty_lab;

pub use error::{Error, Result};
pub use params::ModelParams;

/// Physical fine structure constant used as the default, `1/137`.
pub const ALPHA_PHYSICAL: f64 = 1.0 / 137.0;
