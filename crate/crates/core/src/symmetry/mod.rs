//! Character tables, reduction, descent correlation, Raman counting,
//! nuclear-spin decomposition and selection rules.
//!
//! Every table is built in its complex form, so the standard invariants
//! (Σ dim² = |G|, row orthogonality) hold exactly. Groups whose complex irreps
//! come in conjugate pairs (T and T×T̄) also carry a *real form*: conjugate
//! pairs merged into one physically irreducible row (T's `E` is `1E + 2E`).
//! Real-form rows are what the level tables and the CLI display; they are
//! valid labels for [`selection_allowed`] but not for the orthogonality checks.

mod ops;
mod rovib;
mod spin;
mod table;

pub use ops::{
    correlate, decompose, raman_active_count, raman_active_labels, restrict_td_to_d2d,
    selection_allowed, Decomposition,
};
pub use rovib::{rovib_label, spin_species_of_mol, ProductComponent, RovibLabel, ROVIB_DICTIONARY};
pub use spin::{spin_decomposition, spin_permutation_characters, SpinLabel, SpinSpecies};
pub use table::{character_table, product_label, GroupClass, GroupId, GroupTable, Irrep, IrrepLabel, TIrrep};

use alloc::string::String;
use core::fmt;

/// Multiplicity rounding tolerance used by [`decompose`].
pub const MULTIPLICITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum SymmetryError {
    UnknownGroup(String),
    UnknownIrrep { group: String, label: String },
    CharacterCount { expected: usize, got: usize },
    NonIntegerMultiplicity { irrep: String, value: f64 },
    GroupMismatch { expected: String, got: String },
}

impl fmt::Display for SymmetryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryError::UnknownGroup(g) => {
                write!(f, "unknown group `{g}` (expected one of T, T_d, D_2d, C_3v, TxT)")
            }
            SymmetryError::UnknownIrrep { group, label } => {
                write!(f, "group {group} has no irrep `{label}`")
            }
            SymmetryError::CharacterCount { expected, got } => {
                write!(f, "expected {expected} characters (one per class), got {got}")
            }
            SymmetryError::NonIntegerMultiplicity { irrep, value } => {
                write!(f, "invalid representation: multiplicity of {irrep} is {value}")
            }
            SymmetryError::GroupMismatch { expected, got } => {
                write!(f, "labels from different groups: {expected} and {got}")
            }
        }
    }
}

impl core::error::Error for SymmetryError {}
