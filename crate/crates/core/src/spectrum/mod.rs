//! Populations, line lists and band envelopes.
//!
//! Levels come from [`crate::rotor`]; every function here is a pure map
//! from a level table (plus band/population settings) to lines or samples.

mod lines;
mod population;
mod synth;

pub use lines::{
    rotational_raman_lines, sum_band_lines, vibration_orientation_lines, vibration_transition_table, Activity,
    LevelId, Line, LineStrengths, RamanOptions, VibrationBandModel, VibrationTransition, DW_L1_STAR, DW_LE3_STAR,
};
pub use population::{populations, spin_weight, PopulationMode, PopulationModel};
pub use synth::{synthesize, LineShape, SpectrumConfig, Synthesis};

use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum SpectrumError {
    /// A parameter violates its invariant; `field` names it.
    Invalid { field: &'static str, reason: String },
    MissingLevel(String),
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumError::Invalid { field, reason } => write!(f, "invalid {field}: {reason}"),
            SpectrumError::MissingLevel(l) => write!(f, "required level {l} is missing from the level table"),
        }
    }
}

impl core::error::Error for SpectrumError {}

pub(crate) fn invalid(field: &'static str, reason: &str) -> SpectrumError {
    SpectrumError::Invalid {
        field,
        reason: String::from(reason),
    }
}
