use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{RotorError, RotorModel};
use crate::symmetry::{GroupId, IrrepLabel, RovibLabel, SpinLabel, ROVIB_DICTIONARY};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyLevel {
    /// cm⁻¹ above the lowest level.
    pub energy: f64,
    pub degeneracy: usize,
    pub rovib_label: IrrepLabel,
    pub spin_species: SpinLabel,
    /// n in (Γ)_n: 1 for the lowest level of this label.
    pub ordinal: usize,
    /// Another label has the same energy within the clustering tolerance.
    pub shared: bool,
}

impl EnergyLevel {
    /// Name in the usual `(L1)1` form.
    pub fn name(&self) -> String {
        format!("({}){}", self.rovib_label.label, self.ordinal)
    }
}

fn dictionary_index(label: &str) -> usize {
    ROVIB_DICTIONARY
        .iter()
        .position(|e| e.label == label)
        .unwrap_or(usize::MAX)
}

/// Builds the sorted, labelled level list from (absolute energy, label) pairs.
pub(crate) fn assemble_levels(mut raw: Vec<(f64, &'static RovibLabel)>, tol: f64) -> Vec<EnergyLevel> {
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ground = raw.first().map_or(0.0, |r| r.0);
    // runs of equal energy share the run's lowest value and are ordered by dictionary position
    let mut ordered: Vec<(f64, &'static RovibLabel, bool)> = Vec::with_capacity(raw.len());
    let mut start = 0;
    while start < raw.len() {
        let mut end = start + 1;
        while end < raw.len() && raw[end].0 - raw[end - 1].0 <= tol {
            end += 1;
        }
        let mut run: Vec<_> = raw[start..end].to_vec();
        run.sort_by_key(|r| dictionary_index(r.1.label));
        let shared = run.iter().any(|r| r.1.label != run[0].1.label);
        let e0 = run.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        for r in run {
            ordered.push((e0, r.1, shared));
        }
        start = end;
    }
    let mut counts = [0usize; ROVIB_DICTIONARY.len()];
    ordered
        .into_iter()
        .map(|(e, entry, shared)| {
            let i = dictionary_index(entry.label);
            counts[i] += 1;
            EnergyLevel {
                energy: (e - ground).max(0.0),
                degeneracy: entry.dimension(),
                rovib_label: IrrepLabel {
                    group: GroupId::TxT,
                    label: entry.label.to_string(),
                    dimension: entry.dimension(),
                },
                spin_species: entry.spin,
                ordinal: counts[i],
                shared,
            }
        })
        .collect()
}

/// Level `(label)ordinal`, e.g. `find_level(levels, "L1", 1)`.
pub fn find_level<'a>(levels: &'a [EnergyLevel], label: &str, ordinal: usize) -> Result<&'a EnergyLevel, RotorError> {
    levels
        .iter()
        .find(|l| l.rovib_label.label == label && l.ordinal == ordinal)
        .ok_or_else(|| RotorError::MissingLevel(format!("({label}){ordinal}")))
}

/// (ω_LA, ω_LE2) = (E(L1)1 − E(A1)1, E(E2)1 − E(L1)1).
pub fn tunneling_frequencies(levels: &[EnergyLevel]) -> Result<(f64, f64), RotorError> {
    let a = find_level(levels, "A1", 1)?.energy;
    let l = find_level(levels, "L1", 1)?.energy;
    let e = find_level(levels, "E2", 1)?.energy;
    Ok((l - a, e - l))
}

/// β·B·(max V − min V), with the range located numerically.
pub fn barrier_height(model: &RotorModel) -> f64 {
    model.beta * model.b * model.potential.range()
}
