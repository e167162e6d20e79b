//! Infrared vibration-orientation, rotational Raman and lattice sum-band lines.
//!
//! Vibration-orientation lines take a molecule from a ground-state
//! orientation level to an orientation level of the excited (triply
//! degenerate) vibrational state, marked `*`. Excited-state orientation
//! energies are the ground-state ones scaled by `excited_scale` about (L1)1*,
//! so the reference (L1)1 → (L1)1* sits at `nu0`:
//!
//! `ν = nu0 + s (E_u − E_(L1)1) − (E_l − E_(L1)1) + offset`.
//!
//! Raman lines stay in the ground vibrational state. Both kinds conserve the
//! nuclear-spin species, and the line strength is the per-state population
//! of the lower level times the degeneracy of the upper level, times an
//! optional per-transition factor.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::population::populations;
use super::{invalid, PopulationModel, SpectrumError};
use crate::rotor::{find_level, EnergyLevel};
use crate::symmetry::{
    character_table, raman_active_labels, selection_allowed, GroupId, IrrepLabel, SpinLabel, TIrrep, ROVIB_DICTIONARY,
};
use crate::C64;

pub const DW_L1_STAR: &str = "dw_l1_star";
pub const DW_LE3_STAR: &str = "dw_le3_star";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Activity {
    #[cfg_attr(feature = "serde", serde(rename = "IR"))]
    Ir,
    Raman,
}

impl Activity {
    pub fn as_str(self) -> &'static str {
        match self {
            Activity::Ir => "IR",
            Activity::Raman => "Raman",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LevelId {
    /// `(Γ)n` name of the orientation level.
    pub level: String,
    /// In the excited vibrational state.
    pub excited: bool,
    /// Plus one lattice-mode quantum.
    pub lattice: bool,
}

impl LevelId {
    pub fn ground(level: &str) -> LevelId {
        LevelId {
            level: level.to_string(),
            excited: false,
            lattice: false,
        }
    }

    pub fn excited(level: &str) -> LevelId {
        LevelId {
            excited: true,
            ..LevelId::ground(level)
        }
    }
}

impl core::fmt::Display for LevelId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.level)?;
        if self.excited {
            f.write_str("*")?;
        }
        if self.lattice {
            f.write_str("+lat")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Line {
    /// cm⁻¹.
    pub frequency: f64,
    pub intensity: f64,
    pub lower: LevelId,
    pub upper: LevelId,
    pub activity: Activity,
    /// Nuclear-spin species shared by both ends.
    pub spin: SpinLabel,
}

impl Line {
    /// `lower->upper`, e.g. `(A1)1->(L1)1*`.
    pub fn label(&self) -> String {
        format!("{}->{}", self.lower, self.upper)
    }
}

/// Optional per-transition strength factors keyed by [`Line::label`]; default 1.
pub type LineStrengths = BTreeMap<String, f64>;

/// Vibration-orientation band settings.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VibrationBandModel {
    pub nu0: f64,
    pub excited_scale: f64,
    pub extra_offsets: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VibrationTransition {
    pub lower: (&'static str, usize),
    pub upper: (&'static str, usize),
    /// Name of the additive offset applied to this line, if any.
    pub offset: Option<&'static str>,
}

const fn vt(
    lower: (&'static str, usize),
    upper: (&'static str, usize),
    offset: Option<&'static str>,
) -> VibrationTransition {
    VibrationTransition { lower, upper, offset }
}

/// The main vibration-orientation transitions from (A1)1, (L1)1 and (E2)1,
/// plus the high-frequency (L1)1 lines carrying named offsets.
pub fn vibration_transition_table() -> Vec<VibrationTransition> {
    alloc::vec![
        vt(("A1", 1), ("L1", 1), None),
        vt(("L1", 1), ("A1", 1), None),
        vt(("L1", 1), ("L1", 1), None),
        vt(("L1", 1), ("E2", 1), None),
        vt(("E2", 1), ("L1", 1), None),
        vt(("L1", 1), ("L1", 2), Some(DW_L1_STAR)),
        vt(("L1", 1), ("I1", 1), Some(DW_L1_STAR)),
        vt(("L1", 1), ("I2", 1), Some(DW_L1_STAR)),
        vt(("L1", 1), ("E3", 1), Some(DW_LE3_STAR)),
    ]
}

fn txt_label(label: &str) -> IrrepLabel {
    character_table("TxT").and_then(|t| t.label(label)).expect("dictionary label")
}

fn mol_factors(label: &str) -> Vec<TIrrep> {
    ROVIB_DICTIONARY
        .iter()
        .find(|e| e.label == label)
        .map(|e| e.components.iter().map(|c| c.1).collect())
        .unwrap_or_default()
}

/// Spin conservation through a vibrational excitation of F symmetry: some
/// molecular factor of F ⊗ Γ_upper must match one of the lower level.
fn spin_allowed_through_vibration(lower: &str, upper: &str) -> bool {
    let f = TIrrep::F.characters();
    let sizes = [1.0, 4.0, 4.0, 3.0];
    mol_factors(upper).iter().any(|u| {
        mol_factors(lower).iter().any(|l| {
            let (cu, cl) = (u.characters(), l.characters());
            let n: C64 = (0..4).map(|c| f[c] * cu[c] * cl[c].conj() * sizes[c]).sum::<C64>() / 12.0;
            n.re > 0.5
        })
    })
}

/// Lines of the vibration-orientation band.
pub fn vibration_orientation_lines(
    levels: &[EnergyLevel],
    band: &VibrationBandModel,
    pop: &PopulationModel,
    strengths: Option<&LineStrengths>,
) -> Result<Vec<Line>, SpectrumError> {
    if !(band.nu0 > 0.0) {
        return Err(invalid("nu0", "must be positive"));
    }
    if !(band.excited_scale > 0.0) {
        return Err(invalid("excited_scale", "must be positive"));
    }
    let p = populations(levels, pop)?;
    let get = |name: (&str, usize)| -> Result<(usize, &EnergyLevel), SpectrumError> {
        let l = find_level(levels, name.0, name.1).map_err(|_| SpectrumError::MissingLevel(format!("({}){}", name.0, name.1)))?;
        let i = levels.iter().position(|x| core::ptr::eq(x, l)).unwrap_or(0);
        Ok((i, l))
    };
    let (_, l1) = get(("L1", 1))?;
    let operator = txt_label("L1");
    let s = band.excited_scale;
    let mut out = Vec::new();
    for t in vibration_transition_table() {
        let (il, lower) = get(t.lower)?;
        let (_, upper) = get(t.upper)?;
        if !selection_allowed(&lower.rovib_label, &upper.rovib_label, &operator).unwrap_or(false)
            || !spin_allowed_through_vibration(&lower.rovib_label.label, &upper.rovib_label.label)
        {
            continue;
        }
        let offset = t.offset.map_or(0.0, |k| band.extra_offsets.get(k).copied().unwrap_or(0.0));
        let frequency = band.nu0 + s * (upper.energy - l1.energy) - (lower.energy - l1.energy) + offset;
        let mut line = Line {
            frequency,
            intensity: 0.0,
            lower: LevelId::ground(&lower.name()),
            upper: LevelId::excited(&upper.name()),
            activity: crate::spectrum::Activity::Ir,
            spin: lower.spin_species,
        };
        let factor = strengths.and_then(|m| m.get(&line.label()).copied()).unwrap_or(1.0);
        line.intensity = p[il] / lower.degeneracy as f64 * upper.degeneracy as f64 * factor;
        out.push(line);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RamanOptions {
    /// Largest Raman shift kept, cm⁻¹.
    pub max_shift: f64,
}

impl Default for RamanOptions {
    fn default() -> Self {
        RamanOptions { max_shift: 100.0 }
    }
}

/// Stokes rotational Raman lines between ground-vibrational levels.
pub fn rotational_raman_lines(
    levels: &[EnergyLevel],
    pop: &PopulationModel,
    options: &RamanOptions,
    strengths: Option<&LineStrengths>,
) -> Result<Vec<Line>, SpectrumError> {
    let p = populations(levels, pop)?;
    let table = character_table(GroupId::TxT.name()).expect("built-in");
    // complex Raman irreps → the real-form labels containing them
    let active: Vec<String> = raman_active_labels(GroupId::TxT).into_iter().map(|l| l.label).collect();
    let operators: Vec<IrrepLabel> = ROVIB_DICTIONARY
        .iter()
        .filter(|e| {
            e.components
                .iter()
                .all(|&(s, m)| active.contains(&crate::symmetry::product_label(s, m)))
        })
        .map(|e| table.label(e.label).expect("dictionary label"))
        .collect();
    // allowedness depends only on the two dictionary labels
    let mut allowed_pairs = BTreeMap::new();
    for a in ROVIB_DICTIONARY {
        for b in ROVIB_DICTIONARY {
            let (la, lb) = (table.label(a.label).expect("dictionary label"), table.label(b.label).expect("dictionary label"));
            let ok = operators.iter().any(|op| selection_allowed(&la, &lb, op).unwrap_or(false));
            allowed_pairs.insert((a.label, b.label), ok);
        }
    }
    let mut out = Vec::new();
    for (il, lower) in levels.iter().enumerate() {
        if p[il] <= 0.0 {
            continue;
        }
        for upper in levels {
            let shift = upper.energy - lower.energy;
            if shift <= 0.0 || shift > options.max_shift || upper.spin_species != lower.spin_species {
                continue;
            }
            let key = (lower.rovib_label.label.as_str(), upper.rovib_label.label.as_str());
            if !allowed_pairs.iter().any(|(k, v)| *v && k.0 == key.0 && k.1 == key.1) {
                continue;
            }
            let mut line = Line {
                frequency: shift,
                intensity: 0.0,
                lower: LevelId::ground(&lower.name()),
                upper: LevelId::ground(&upper.name()),
                activity: crate::spectrum::Activity::Raman,
                spin: lower.spin_species,
            };
            let factor = strengths.and_then(|m| m.get(&line.label()).copied()).unwrap_or(1.0);
            line.intensity = p[il] / lower.degeneracy as f64 * upper.degeneracy as f64 * factor;
            out.push(line);
        }
    }
    Ok(out)
}

/// Copies of `base` shifted up by one lattice quantum, intensities scaled.
pub fn sum_band_lines(base: &[Line], lattice_freq: f64, intensity_scale: f64) -> Result<Vec<Line>, SpectrumError> {
    if !(lattice_freq >= 0.0) {
        return Err(invalid("lattice_freq", "must be non-negative"));
    }
    if !(intensity_scale >= 0.0) {
        return Err(invalid("sum_scale", "must be non-negative"));
    }
    Ok(base
        .iter()
        .map(|l| Line {
            frequency: l.frequency + lattice_freq,
            intensity: l.intensity * intensity_scale,
            upper: LevelId {
                lattice: true,
                ..l.upper.clone()
            },
            ..l.clone()
        })
        .collect())
}
