//! The hindered spherical-top rotor `H = B [P² + β V(ω)]`.
//!
//! Energies are in cm⁻¹. `V` is a [`Potential`] of unit range, so β is the
//! barrier in units of B. Two eigen-solvers are provided:
//!
//! - [`diagonalize`] builds the full real Hamiltonian over the |J m k⟩ basis,
//!   splits it into its uncoupled sparsity blocks and solves each densely;
//!   [`classify_levels`] then labels degenerate clusters by projecting with
//!   product-group characters.
//! - [`RotorSolver`] works directly in symmetry-adapted blocks, one per
//!   T×T̄ irrep, and keeps the β-independent pieces between solves. It is the
//!   fast path used by the spectrum and fitting code.

mod basis;
mod blocked;
mod eigen;
mod hamiltonian;
mod levels;
pub mod potential;
mod wigner;

pub use basis::{basis_size, build_basis, j_offset, state_index, BasisState};
pub use blocked::{RotorSolver, SymmetryBlock};
pub use eigen::{
    class_representatives, classify_levels, cluster_characters, diagonalize, Eigensystem, FlaggedCluster,
    LevelTable, DEFAULT_CLUSTER_TOL,
};
pub use hamiltonian::{hamiltonian_matrix, potential_matrix};
pub use levels::{barrier_height, find_level, tunneling_frequencies, EnergyLevel};
pub use potential::Potential;
pub use wigner::{small_d, wigner3j, wigner_d, wigner_d_all, wigner_d_euler};

use alloc::string::String;
use core::fmt;

/// Default rotational constant for NH₄⁺, cm⁻¹.
pub const DEFAULT_B: f64 = 5.9;
pub const DEFAULT_JMAX: i32 = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct RotorModel {
    /// Rotational constant B, cm⁻¹.
    pub b: f64,
    /// Dimensionless field strength β ≥ 0.
    pub beta: f64,
    pub potential: Potential,
    pub jmax: i32,
}

impl RotorModel {
    /// Model with the default rank-3 potential.
    pub fn new(b: f64, beta: f64, jmax: i32) -> Result<RotorModel, RotorError> {
        let m = RotorModel {
            b,
            beta,
            potential: Potential::default_rank3(),
            jmax,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_potential(b: f64, beta: f64, potential: Potential, jmax: i32) -> Result<RotorModel, RotorError> {
        let m = RotorModel {
            b,
            beta,
            potential,
            jmax,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), RotorError> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(RotorError::InvalidModel {
                field: "B",
                reason: "must be positive",
            });
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(RotorError::InvalidModel {
                field: "beta",
                reason: "must be non-negative",
            });
        }
        if self.jmax < 2 {
            return Err(RotorError::InvalidModel {
                field: "Jmax",
                reason: "must be at least 2",
            });
        }
        if !self.potential.is_normalized() {
            return Err(RotorError::UnnormalizedPotential {
                range: self.potential.range(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RotorError {
    InvalidModel { field: &'static str, reason: &'static str },
    UnsupportedRank(i32),
    EmptyPotential,
    FlatPotential,
    UnnormalizedPotential { range: f64 },
    NonConvergence { block: usize, dimension: usize, norm: f64 },
    MissingLevel(String),
}

impl fmt::Display for RotorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotorError::InvalidModel { field, reason } => write!(f, "invalid model: {field} {reason}"),
            RotorError::UnsupportedRank(l) => write!(
                f,
                "rank {l} has no unique T-invariant with a real Hamiltonian (supported: 3, 4, 7)"
            ),
            RotorError::EmptyPotential => f.write_str("potential has no terms"),
            RotorError::FlatPotential => f.write_str("potential is constant over orientations"),
            RotorError::UnnormalizedPotential { range } => {
                write!(f, "potential range is {range}, expected 1")
            }
            RotorError::NonConvergence { block, dimension, norm } => write!(
                f,
                "eigen-solver did not converge on block {block} (dimension {dimension}, Frobenius norm {norm:.6e})"
            ),
            RotorError::MissingLevel(l) => write!(f, "level {l} not found"),
        }
    }
}

impl core::error::Error for RotorError {}
