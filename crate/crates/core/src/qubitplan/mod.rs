//! Addressability planning: frequency separations between lines, channel
//! counts inside a band, dilution-controlled qubit spacings and dipolar
//! coupling magnitudes.
//!
//! Spacings use a simple-cubic picture of the cation sublattice: at
//! occupancy `c` the characteristic spacing is `a·c^(−1/3)`, and the mean
//! nearest-neighbour distance of randomly placed qubits is
//! [`POISSON_NN_FACTOR`] times that.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use core::fmt;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::units::{cm1_to_ghz, DEBYE_C_M, EPSILON_0_F_PER_M, PLANCK_J_S};

/// Γ(4/3)·(3/4π)^(1/3): mean nearest-neighbour distance of a Poisson process
/// in units of density^(−1/3).
pub const POISSON_NN_FACTOR: f64 = 0.55396;

#[derive(Clone, Debug, PartialEq)]
pub enum PlanError {
    Invalid { field: &'static str, reason: &'static str },
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::Invalid { field, reason } => write!(f, "invalid {field}: {reason}"),
        }
    }
}

impl core::error::Error for PlanError {}

fn invalid(field: &'static str, reason: &'static str) -> PlanError {
    PlanError::Invalid { field, reason }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CrystalSpec {
    /// Cation-site spacing at full occupancy, nm.
    pub a: f64,
    /// Occupied fraction of cation sites, in (0, 1].
    pub c: f64,
}

impl CrystalSpec {
    pub fn new(a: f64, c: f64) -> Result<CrystalSpec, PlanError> {
        let s = CrystalSpec { a, c };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        if !(self.a > 0.0) || !self.a.is_finite() {
            return Err(invalid("a", "must be positive"));
        }
        if !(self.c > 0.0 && self.c <= 1.0) {
            return Err(invalid("c", "must lie in (0, 1]"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NnMode {
    Characteristic,
    PoissonMean,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DeltaOmega {
    /// Higher-frequency line.
    pub upper: String,
    pub lower: String,
    pub cm1: f64,
    pub ghz: f64,
}

/// All unordered pairs of `(label, frequency)` lines, largest separation first.
pub fn delta_omega_table(lines: &[(String, f64)]) -> Result<Vec<DeltaOmega>, PlanError> {
    if lines.len() < 2 {
        return Err(invalid("lines", "at least two lines are required"));
    }
    if lines.iter().any(|l| !l.1.is_finite()) {
        return Err(invalid("lines", "frequencies must be finite"));
    }
    let mut out = Vec::with_capacity(lines.len() * (lines.len() - 1) / 2);
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            let (hi, lo) = match a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)) {
                Ordering::Less => (b, a),
                _ => (a, b),
            };
            let cm1 = hi.1 - lo.1;
            out.push(DeltaOmega {
                upper: hi.0.clone(),
                lower: lo.0.clone(),
                cm1,
                ghz: cm1_to_ghz(cm1),
            });
        }
    }
    out.sort_by(|x, y| {
        y.cm1
            .total_cmp(&x.cm1)
            .then_with(|| x.upper.cmp(&y.upper))
            .then_with(|| x.lower.cmp(&y.lower))
    });
    Ok(out)
}

/// Distinct probe frequencies of width `source_linewidth_ghz` fitting inside a
/// band of width `band_fwhm_cm1`; at least one.
pub fn addressable_channels(band_fwhm_cm1: f64, source_linewidth_ghz: f64) -> Result<u64, PlanError> {
    if !(band_fwhm_cm1 > 0.0) {
        return Err(invalid("fwhm", "must be positive"));
    }
    if !(source_linewidth_ghz > 0.0) {
        return Err(invalid("linewidth", "must be positive"));
    }
    let n = Float::floor(cm1_to_ghz(band_fwhm_cm1) / source_linewidth_ghz);
    Ok(if n >= 1.0 { n as u64 } else { 1 })
}

/// Qubit spacing in nm.
pub fn nn_distance(spec: &CrystalSpec, mode: NnMode) -> Result<f64, PlanError> {
    spec.validate()?;
    let r = spec.a * Float::powf(spec.c, -1.0 / 3.0);
    Ok(match mode {
        NnMode::Characteristic => r,
        NnMode::PoissonMean => POISSON_NN_FACTOR * r,
    })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MonteCarloNn {
    /// Mean nearest-neighbour distance, nm.
    pub mean: f64,
    /// Occupied sites measured.
    pub samples: usize,
    pub side: usize,
}

/// Mean nearest-neighbour distance between occupied sites of a randomly
/// diluted periodic simple-cubic lattice large enough to hold about
/// `target_samples` occupied sites.
pub fn monte_carlo_nn_mean(spec: &CrystalSpec, target_samples: usize, seed: u64) -> Result<MonteCarloNn, PlanError> {
    spec.validate()?;
    if target_samples < 2 {
        return Err(invalid("samples", "need at least two"));
    }
    let side = Float::ceil(Float::cbrt(target_samples as f64 / spec.c)).max(3.0) as usize;
    let n = side * side * side;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let occupied: Vec<bool> = (0..n).map(|_| rng.random_bool(spec.c)).collect();
    let sites: Vec<usize> = (0..n).filter(|&i| occupied[i]).collect();
    if sites.len() < 2 {
        return Err(invalid("c", "too dilute for the lattice size"));
    }
    let s = side as i64;
    let wrap = |v: i64| -> usize { v.rem_euclid(s) as usize };
    let mut total = 0.0;
    for &i in &sites {
        let (x, y, z) = ((i / (side * side)) as i64, ((i / side) % side) as i64, (i % side) as i64);
        let mut best = i64::MAX;
        let mut h = 1i64;
        loop {
            // only the shell at Chebyshev distance h is new
            for dx in -h..=h {
                for dy in -h..=h {
                    let edge = dx.abs() == h || dy.abs() == h;
                    let mut dz = -h;
                    while dz <= h {
                        let d2 = dx * dx + dy * dy + dz * dz;
                        if d2 < best && occupied[wrap(x + dx) * side * side + wrap(y + dy) * side + wrap(z + dz)] {
                            best = d2;
                        }
                        dz += if edge || dz == h { 1 } else { 2 * h };
                    }
                }
            }
            if best <= (h + 1) * (h + 1) || 2 * h >= s {
                break;
            }
            h += 1;
        }
        total += Float::sqrt(best as f64);
    }
    Ok(MonteCarloNn {
        mean: spec.a * total / sites.len() as f64,
        samples: sites.len(),
        side,
    })
}

/// Dipole–dipole coupling magnitude μ²/(4πε₀ h r³) in Hz, μ in debye, r in nm.
pub fn coupling_estimate(mu_debye: f64, r_nm: f64) -> Result<f64, PlanError> {
    if !(mu_debye >= 0.0) {
        return Err(invalid("mu", "must be non-negative"));
    }
    if !(r_nm > 0.0) {
        return Err(invalid("r", "must be positive"));
    }
    let mu = mu_debye * DEBYE_C_M;
    let r = r_nm * 1e-9;
    Ok(mu * mu / (4.0 * PI * EPSILON_0_F_PER_M * PLANCK_J_S * r * r * r))
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BandChannels {
    pub band: String,
    pub fwhm_cm1: f64,
    pub fwhm_ghz: f64,
    pub channels: u64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Spacing {
    pub characteristic_nm: f64,
    pub mean_nm: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Coupling {
    pub r_nm: f64,
    pub hz: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PlanReport {
    pub delta_omega_pairs: Vec<DeltaOmega>,
    pub channels: Vec<BandChannels>,
    pub r12: Spacing,
    pub couplings: Vec<Coupling>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanInput {
    pub lines: Vec<(String, f64)>,
    /// `(band label, fwhm cm⁻¹)`.
    pub bands: Vec<(String, f64)>,
    pub crystal: CrystalSpec,
    pub source_linewidth_ghz: f64,
    pub dipole_debye: f64,
    /// Extra distances to evaluate couplings at, besides the two r₁₂ values.
    pub distances_nm: Vec<f64>,
}

pub fn plan(input: &PlanInput) -> Result<PlanReport, PlanError> {
    let delta_omega_pairs = delta_omega_table(&input.lines)?;
    let channels = input
        .bands
        .iter()
        .map(|(band, w)| {
            Ok(BandChannels {
                band: band.clone(),
                fwhm_cm1: *w,
                fwhm_ghz: cm1_to_ghz(*w),
                channels: addressable_channels(*w, input.source_linewidth_ghz)?,
            })
        })
        .collect::<Result<Vec<_>, PlanError>>()?;
    let r12 = Spacing {
        characteristic_nm: nn_distance(&input.crystal, NnMode::Characteristic)?,
        mean_nm: nn_distance(&input.crystal, NnMode::PoissonMean)?,
    };
    let mut rs = vec![r12.mean_nm, r12.characteristic_nm];
    rs.extend(input.distances_nm.iter().copied());
    let couplings = rs
        .into_iter()
        .map(|r| {
            Ok(Coupling {
                r_nm: r,
                hz: coupling_estimate(input.dipole_debye, r)?,
            })
        })
        .collect::<Result<Vec<_>, PlanError>>()?;
    Ok(PlanReport {
        delta_omega_pairs,
        channels,
        r12,
        couplings,
    })
}
