use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

use super::{invalid, SpectrumError};
use crate::rotor::EnergyLevel;
use crate::symmetry::{spin_decomposition, SpinLabel};
use crate::units::kt_cm1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PopulationMode {
    Thermal,
    SpinFrozen,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PopulationModel {
    pub mode: PopulationMode,
    /// Kelvin.
    pub temperature: f64,
    /// Species fractions (A, E, F) used in spin-frozen mode.
    pub frozen_fractions: [f64; 3],
}

impl PopulationModel {
    /// High-temperature statistical fractions (5/16, 2/16, 9/16).
    pub fn statistical_fractions() -> [f64; 3] {
        let species = spin_decomposition();
        let total: usize = species.iter().map(|s| s.total_count).sum();
        let mut out = [0.0; 3];
        for s in species {
            out[s.label.index()] = s.total_count as f64 / total as f64;
        }
        out
    }

    pub fn thermal(temperature: f64) -> PopulationModel {
        PopulationModel {
            mode: PopulationMode::Thermal,
            temperature,
            frozen_fractions: Self::statistical_fractions(),
        }
    }

    pub fn spin_frozen(temperature: f64) -> PopulationModel {
        PopulationModel {
            mode: PopulationMode::SpinFrozen,
            ..Self::thermal(temperature)
        }
    }

    pub fn validate(&self) -> Result<(), SpectrumError> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(invalid("T", "must be positive"));
        }
        if self.frozen_fractions.iter().any(|f| !(*f >= 0.0)) {
            return Err(invalid("fractions", "must be non-negative"));
        }
        let sum: f64 = self.frozen_fractions.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(invalid("fractions", "must sum to 1"));
        }
        Ok(())
    }
}

/// Allowed nuclear-spin functions per rovibrational state of a species.
pub fn spin_weight(label: SpinLabel) -> f64 {
    spin_decomposition()
        .into_iter()
        .find(|s| s.label == label)
        .map_or(1.0, |s| s.spin_weight as f64)
}

/// Fraction of all molecules in each level (summed over its degenerate states).
///
/// Thermal: p ∝ g_spin g_rovib exp(−E/kT). Spin-frozen: each species keeps its
/// fixed fraction, distributed by the same Boltzmann factors inside the species.
/// A species with a nonzero fraction but no level in the table is dropped and
/// the rest renormalized.
pub fn populations(levels: &[EnergyLevel], pop: &PopulationModel) -> Result<Vec<f64>, SpectrumError> {
    pop.validate()?;
    let kt = kt_cm1(pop.temperature);
    let weights = [SpinLabel::A, SpinLabel::E, SpinLabel::F].map(spin_weight);
    let mut emin = [f64::INFINITY; 3];
    for l in levels {
        let s = l.spin_species.index();
        emin[s] = emin[s].min(l.energy);
    }
    let shift = |s: usize| match pop.mode {
        PopulationMode::Thermal => emin.iter().cloned().fold(f64::INFINITY, f64::min),
        PopulationMode::SpinFrozen => emin[s],
    };
    let raw: Vec<f64> = levels
        .iter()
        .map(|l| {
            let s = l.spin_species.index();
            weights[s] * l.degeneracy as f64 * Float::exp(-(l.energy - shift(s)) / kt)
        })
        .collect();
    let mut out = vec![0.0; levels.len()];
    match pop.mode {
        PopulationMode::Thermal => {
            let z: f64 = raw.iter().sum();
            for (o, w) in out.iter_mut().zip(&raw) {
                *o = w / z;
            }
        }
        PopulationMode::SpinFrozen => {
            let mut z = [0.0; 3];
            for (l, w) in levels.iter().zip(&raw) {
                z[l.spin_species.index()] += w;
            }
            let present: f64 = (0..3).filter(|&s| z[s] > 0.0).map(|s| pop.frozen_fractions[s]).sum();
            if present <= 0.0 {
                return Err(invalid("fractions", "no level belongs to a populated species"));
            }
            for ((o, l), w) in out.iter_mut().zip(levels).zip(&raw) {
                let s = l.spin_species.index();
                *o = pop.frozen_fractions[s] / present * w / z[s];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotor::{find_level, Potential, RotorSolver, DEFAULT_CLUSTER_TOL};
    use proptest::prelude::*;

    fn levels(beta: f64) -> Vec<EnergyLevel> {
        static SOLVER: std::sync::OnceLock<RotorSolver> = std::sync::OnceLock::new();
        SOLVER
            .get_or_init(|| RotorSolver::new(&Potential::default_rank3(), 6).unwrap())
            .levels(5.9, beta, DEFAULT_CLUSTER_TOL)
            .unwrap()
    }

    #[test]
    fn fractions_default_to_statistical() {
        let f = PopulationModel::statistical_fractions();
        assert_eq!(f, [5.0 / 16.0, 2.0 / 16.0, 9.0 / 16.0]);
    }

    #[test]
    fn limits() {
        let lv = levels(1.0);
        let cold = populations(&lv, &PopulationModel::thermal(0.01)).unwrap();
        assert!((cold[0] - 1.0).abs() < 1e-12);
        // very hot: ratios approach g_spin·g_rovib
        let hot = populations(&lv, &PopulationModel::thermal(1e9)).unwrap();
        let (a, l) = (&lv[0], find_level(&lv, "L1", 1).unwrap());
        let il = lv.iter().position(|x| x == l).unwrap();
        let want = spin_weight(l.spin_species) * 9.0 / (spin_weight(a.spin_species) * 1.0);
        assert!((hot[il] / hot[0] - want).abs() < 1e-6);
        assert!(populations(&lv, &PopulationModel::thermal(0.0)).is_err());
    }

    #[test]
    fn frozen_l1_keeps_its_species_share() {
        let lv = levels(1.0);
        let il = lv.iter().position(|x| x.name() == "(L1)1").unwrap();
        let frozen = populations(&lv, &PopulationModel::spin_frozen(2.0)).unwrap();
        assert!((frozen[il] - 9.0 / 16.0).abs() < 1e-6);
        let thermal = populations(&lv, &PopulationModel::thermal(7.0)).unwrap();
        let kt = kt_cm1(7.0);
        let ratio = thermal[il] / thermal[0];
        assert!((ratio - 9.0 / 5.0 * (-lv[il].energy / kt).exp()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn normalized_in_every_mode(t in 0.5f64..500.0, beta in 0.0f64..8.0, frozen in any::<bool>()) {
            let lv = levels(beta);
            let pop = if frozen { PopulationModel::spin_frozen(t) } else { PopulationModel::thermal(t) };
            let p = populations(&lv, &pop).unwrap();
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(p.iter().all(|x| *x >= 0.0));
        }

        #[test]
        fn thermal_excited_populations_rise_with_temperature_at_low_t(t in 1.0f64..12.0, dt in 0.01f64..1.0) {
            let lv = levels(1.0);
            let lo = populations(&lv, &PopulationModel::thermal(t)).unwrap();
            let hi = populations(&lv, &PopulationModel::thermal(t + dt)).unwrap();
            for i in 1..lv.len() {
                prop_assert!(hi[i] >= lo[i]);
            }
        }
    }
}
