use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::FitError;
use crate::rotor::{Potential, RotorModel, DEFAULT_B, DEFAULT_CLUSTER_TOL, DEFAULT_JMAX};
use crate::spectrum::{
    LineShape, LineStrengths, PopulationModel, SpectrumConfig, VibrationBandModel, DW_L1_STAR, DW_LE3_STAR,
};

/// An adjustable model quantity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FitParam {
    B,
    Beta,
    Nu0,
    ExcitedScale,
    /// Common shift added to every named band offset.
    ExtraOffsets,
    /// One named band offset.
    Offset(String),
    Fwhm,
    /// Overall amplitude of a synthesized envelope.
    Scale,
}

impl FitParam {
    pub fn parse(s: &str) -> Result<FitParam, FitError> {
        Ok(match s {
            "B" | "b" => FitParam::B,
            "beta" => FitParam::Beta,
            "nu0" => FitParam::Nu0,
            "excited_scale" => FitParam::ExcitedScale,
            "extra_offsets" => FitParam::ExtraOffsets,
            "fwhm" => FitParam::Fwhm,
            "scale" => FitParam::Scale,
            other if other.starts_with("dw_") => FitParam::Offset(other.to_string()),
            other => return Err(FitError::Spec(alloc::format!("unknown fit parameter '{other}'"))),
        })
    }

    /// A box that is physically sensible around `initial`.
    pub fn default_bounds(&self, initial: f64) -> (f64, f64) {
        match self {
            FitParam::B => (1.0, 20.0),
            FitParam::Beta => (0.0, 20.0),
            FitParam::Nu0 => (initial - 30.0, initial + 30.0),
            FitParam::ExcitedScale => (0.5, 2.0),
            FitParam::ExtraOffsets | FitParam::Offset(_) => (initial - 20.0, initial + 20.0),
            FitParam::Fwhm => (0.05, 20.0),
            FitParam::Scale => (0.0, if initial > 0.0 { 100.0 * initial } else { 1.0 }),
        }
    }
}

impl fmt::Display for FitParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitParam::B => f.write_str("B"),
            FitParam::Beta => f.write_str("beta"),
            FitParam::Nu0 => f.write_str("nu0"),
            FitParam::ExcitedScale => f.write_str("excited_scale"),
            FitParam::ExtraOffsets => f.write_str("extra_offsets"),
            FitParam::Offset(n) => f.write_str(n),
            FitParam::Fwhm => f.write_str("fwhm"),
            FitParam::Scale => f.write_str("scale"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreeParam {
    pub param: FitParam,
    pub initial: f64,
    pub lower: f64,
    pub upper: f64,
}

impl FreeParam {
    pub fn new(param: FitParam, initial: f64) -> FreeParam {
        let (lower, upper) = param.default_bounds(initial);
        FreeParam {
            param,
            initial,
            lower,
            upper,
        }
    }

    pub fn bounded(param: FitParam, initial: f64, lower: f64, upper: f64) -> FreeParam {
        FreeParam {
            param,
            initial,
            lower,
            upper,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitSpec {
    pub free: Vec<FreeParam>,
    /// Simplex iterations per start.
    pub max_iterations: usize,
    /// Relative objective-change tolerance.
    pub tolerance: f64,
    /// Start 0 is the initial point, the rest are drawn uniformly in the bounds.
    pub starts: usize,
    pub seed: u64,
}

impl FitSpec {
    pub fn new(free: Vec<FreeParam>) -> FitSpec {
        FitSpec {
            free,
            max_iterations: 2000,
            tolerance: 1e-10,
            starts: 8,
            seed: 0,
        }
    }

    pub fn validate(&self, template: &ModelTemplate) -> Result<(), FitError> {
        if self.free.is_empty() {
            return Err(FitError::Spec("at least one free parameter is required".into()));
        }
        if self.starts == 0 || self.max_iterations == 0 {
            return Err(FitError::Spec("starts and max_iterations must be positive".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(FitError::Spec("tolerance must be non-negative".into()));
        }
        for (i, p) in self.free.iter().enumerate() {
            if self.free[..i].iter().any(|q| q.param == p.param) {
                return Err(FitError::Spec(alloc::format!("{} is listed twice", p.param)));
            }
            if !(p.lower < p.upper) || !p.lower.is_finite() || !p.upper.is_finite() {
                return Err(FitError::Spec(alloc::format!("{} needs finite bounds with lower < upper", p.param)));
            }
            if !(p.initial >= p.lower && p.initial <= p.upper) {
                return Err(FitError::Spec(alloc::format!("initial {} lies outside its bounds", p.param)));
            }
            let violates = match p.param {
                FitParam::B | FitParam::ExcitedScale | FitParam::Fwhm => p.lower <= 0.0,
                FitParam::Beta | FitParam::Scale => p.lower < 0.0,
                _ => false,
            };
            if violates {
                return Err(FitError::Spec(alloc::format!("lower bound of {} violates its invariant", p.param)));
            }
            if let FitParam::Offset(name) = &p.param {
                if !template.band.extra_offsets.contains_key(name) {
                    return Err(FitError::Spec(alloc::format!("band has no offset named '{name}'")));
                }
            }
        }
        Ok(())
    }
}

/// The fixed part of the model, plus starting values for everything a fit may vary.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelTemplate {
    pub b: f64,
    pub beta: f64,
    pub potential: Potential,
    pub jmax: i32,
    pub band: VibrationBandModel,
    pub population: PopulationModel,
    pub synthesis: SpectrumConfig,
    pub strengths: Option<LineStrengths>,
    /// Envelope amplitude.
    pub scale: f64,
    pub cluster_tol: f64,
}

impl Default for ModelTemplate {
    fn default() -> Self {
        ModelTemplate {
            b: DEFAULT_B,
            beta: 1.0,
            potential: Potential::default_rank3(),
            jmax: DEFAULT_JMAX,
            band: VibrationBandModel {
                nu0: 3206.0,
                excited_scale: 1.0,
                extra_offsets: [(DW_L1_STAR.to_string(), 0.0), (DW_LE3_STAR.to_string(), 0.0)].into(),
            },
            population: PopulationModel::thermal(7.0),
            synthesis: SpectrumConfig {
                start: 3150.0,
                stop: 3300.0,
                step: 0.05,
                shape: LineShape::Gaussian,
                fwhm: 1.5,
            },
            strengths: None,
            scale: 1.0,
            cluster_tol: DEFAULT_CLUSTER_TOL,
        }
    }
}

impl ModelTemplate {
    pub fn rotor_model(&self) -> Result<RotorModel, FitError> {
        RotorModel::with_potential(self.b, self.beta, self.potential.clone(), self.jmax).map_err(FitError::Rotor)
    }

    pub fn initial(&self, param: &FitParam) -> f64 {
        match param {
            FitParam::B => self.b,
            FitParam::Beta => self.beta,
            FitParam::Nu0 => self.band.nu0,
            FitParam::ExcitedScale => self.band.excited_scale,
            FitParam::ExtraOffsets => 0.0,
            FitParam::Offset(n) => self.band.extra_offsets.get(n).copied().unwrap_or(0.0),
            FitParam::Fwhm => self.synthesis.fwhm,
            FitParam::Scale => self.scale,
        }
    }

    pub(crate) fn band_and_population_valid(&self) -> Result<(), FitError> {
        self.population.validate().map_err(FitError::Spectrum)?;
        self.synthesis.validate().map_err(FitError::Spectrum)?;
        if !(self.band.nu0 > 0.0) || !(self.band.excited_scale > 0.0) {
            return Err(FitError::Spec("band needs nu0 > 0 and excited_scale > 0".into()));
        }
        Ok(())
    }

    /// Copy with the free parameters set to `x`.
    pub fn with_values(&self, free: &[FreeParam], x: &[f64]) -> ModelTemplate {
        let mut m = self.clone();
        let mut shift = 0.0;
        for (p, &v) in free.iter().zip(x) {
            match &p.param {
                FitParam::B => m.b = v,
                FitParam::Beta => m.beta = v,
                FitParam::Nu0 => m.band.nu0 = v,
                FitParam::ExcitedScale => m.band.excited_scale = v,
                FitParam::ExtraOffsets => shift = v,
                FitParam::Offset(n) => {
                    m.band.extra_offsets.insert(n.clone(), v);
                }
                FitParam::Fwhm => m.synthesis.fwhm = v,
                FitParam::Scale => m.scale = v,
            }
        }
        for o in m.band.extra_offsets.values_mut() {
            *o += shift;
        }
        m
    }
}
