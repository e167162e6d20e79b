//! Hindered tetrahedral rotors in tetrahedral crystal sites.
//!
//! The crate computes orientation levels of a spherical-top molecule (NH₄⁺,
//! CH₄) in a site potential, labels them with the irreducible representations
//! of the proper-rotation product group T × T̄, and builds infrared
//! vibration-orientation and rotational Raman line lists under thermal or
//! spin-frozen populations. On top of that it fits model parameters to
//! observed peak positions and computes qubit-addressability quantities.
//!
//! Modules:
//!
//! - [`symmetry`]: character tables, reduction, descent correlation, Raman
//!   counting, nuclear-spin decomposition and selection rules.
//! - [`rotor`]: symmetric-top basis, Wigner symbols, the hindered-rotor
//!   Hamiltonian, dense and symmetry-blocked eigen-solvers, level labels.
//! - [`spectrum`]: populations, line lists and band-envelope synthesis.
//! - [`fitting`]: bounded multistart simplex fits of line positions and envelopes.
//! - [`qubitplan`]: Δω tables, channel counts, dilution distances, couplings.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod fitting;
pub mod geometry;
pub mod qubitplan;
pub mod rotor;
pub mod spectrum;
pub mod symmetry;
pub mod units;

pub use nalgebra::Complex;

/// Complex scalar used for characters and rotation matrices.
pub type C64 = Complex<f64>;
