//! Least-squares calibration of the rotor and band models against observed
//! peak positions or sampled band envelopes.
//!
//! Every objective passes through a full eigen-solve, so the minimizer is a
//! bounded Nelder–Mead simplex restarted from seeded points in the box. The
//! best start wins; ties go to the lower start index.

mod peaks;
pub mod simplex;
mod spec;

pub use peaks::{Peak, PeakList};
pub use spec::{FitParam, FitSpec, FreeParam, ModelTemplate};

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rotor::{RotorError, RotorSolver};
use crate::spectrum::{vibration_orientation_lines, Line, SpectrumError};
use simplex::{nelder_mead, SimplexOptions};

#[derive(Clone, Debug, PartialEq)]
pub enum FitError {
    InvalidPeaks(String),
    Spec(String),
    /// Fewer observations than free parameters.
    UnderDetermined { observations: usize, free: usize },
    /// A peak label names no transition of the model.
    UnknownAssignment(String),
    Rotor(RotorError),
    Spectrum(SpectrumError),
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::InvalidPeaks(m) => write!(f, "invalid peak list: {m}"),
            FitError::Spec(m) => write!(f, "invalid fit spec: {m}"),
            FitError::UnderDetermined { observations, free } => write!(
                f,
                "under-determined fit: {observations} observations for {free} free parameters"
            ),
            FitError::UnknownAssignment(l) => write!(f, "no model transition is labelled {l}"),
            FitError::Rotor(e) => write!(f, "{e}"),
            FitError::Spectrum(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for FitError {}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FittedValue {
    pub name: String,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Residual {
    /// Observed frequency (position fits) or grid point (envelope fits), cm⁻¹.
    pub at: f64,
    pub observed: f64,
    pub model: f64,
    /// observed − model.
    pub residual: f64,
    pub label: Option<String>,
    /// The label was chosen by nearest-frequency matching.
    pub nearest: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FitReport {
    pub values: Vec<FittedValue>,
    pub residuals: Vec<Residual>,
    /// Σ residual².
    pub objective: f64,
    /// Iterations of the winning start.
    pub iterations: usize,
    /// Objective evaluations over all starts.
    pub evaluations: usize,
    pub converged: bool,
    pub best_start: usize,
    pub nearest_assignment: bool,
    pub diagnostics: Vec<String>,
}

impl FitReport {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|v| v.name == name).map(|v| v.value)
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.residual.abs()).fold(0.0, f64::max)
    }
}

struct Start {
    x: Vec<f64>,
    fval: f64,
    iterations: usize,
    converged: bool,
}

fn multistart<F>(spec: &FitSpec, mut objective: F) -> (Start, usize, usize)
where
    F: FnMut(&[f64]) -> f64,
{
    let lower: Vec<f64> = spec.free.iter().map(|p| p.lower).collect();
    let upper: Vec<f64> = spec.free.iter().map(|p| p.upper).collect();
    let opts = SimplexOptions {
        max_iterations: spec.max_iterations,
        ftol_rel: spec.tolerance,
        ftol_abs: 1e-14,
        lower: Some(lower.clone()),
        upper: Some(upper.clone()),
    };
    let mut best: Option<(Start, usize)> = None;
    let mut evaluations = 0;
    for s in 0..spec.starts {
        let x0: Vec<f64> = if s == 0 {
            spec.free.iter().map(|p| p.initial).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(s as u64);
            lower.iter().zip(&upper).map(|(l, u)| rng.random_range(*l..*u)).collect()
        };
        let step: Vec<f64> = (0..x0.len())
            .map(|i| {
                let h = 0.1 * (upper[i] - lower[i]);
                if x0[i] + h > upper[i] {
                    -h
                } else {
                    h
                }
            })
            .collect();
        let r = nelder_mead(&mut objective, &x0, &step, &opts);
        evaluations += r.evaluations;
        let cand = Start {
            x: r.x,
            fval: r.fval,
            iterations: r.iterations,
            converged: r.converged,
        };
        if best.as_ref().is_none_or(|(b, _)| cand.fval < b.fval) {
            best = Some((cand, s));
        }
    }
    let (b, s) = best.expect("at least one start");
    (b, s, evaluations)
}

fn model_lines(template: &ModelTemplate, solver: &RotorSolver) -> Result<Vec<Line>, FitError> {
    let levels = solver
        .levels(template.b, template.beta, template.cluster_tol)
        .map_err(FitError::Rotor)?;
    vibration_orientation_lines(&levels, &template.band, &template.population, template.strengths.as_ref())
        .map_err(FitError::Spectrum)
}

fn fitted_values(spec: &FitSpec, x: &[f64]) -> Vec<FittedValue> {
    spec.free
        .iter()
        .zip(x)
        .map(|(p, &v)| FittedValue {
            name: p.param.to_string(),
            value: v,
            lower: p.lower,
            upper: p.upper,
        })
        .collect()
}

fn prepare(spec: &FitSpec, template: &ModelTemplate, observations: usize) -> Result<RotorSolver, FitError> {
    spec.validate(template)?;
    template.band_and_population_valid()?;
    if observations < spec.free.len() {
        return Err(FitError::UnderDetermined {
            observations,
            free: spec.free.len(),
        });
    }
    template.rotor_model()?;
    RotorSolver::new(&template.potential, template.jmax).map_err(FitError::Rotor)
}

/// Fits model transition frequencies to observed peak positions.
///
/// Labelled peaks are matched to the model line with that label. Unlabelled
/// peaks are matched once, at the starting parameters, to the nearest model
/// line; the report flags such matches.
pub fn fit_line_positions(observed: &PeakList, spec: &FitSpec, template: &ModelTemplate) -> Result<FitReport, FitError> {
    let solver = prepare(spec, template, observed.len())?;
    let start = template.with_values(&spec.free, &spec.free.iter().map(|p| p.initial).collect::<Vec<_>>());
    let initial_lines = model_lines(&start, &solver)?;
    let mut targets: Vec<(f64, String, bool)> = Vec::new();
    for p in observed.peaks() {
        match &p.label {
            Some(l) => {
                if !initial_lines.iter().any(|x| &x.label() == l) {
                    return Err(FitError::UnknownAssignment(l.clone()));
                }
                targets.push((p.frequency, l.clone(), false));
            }
            None => {
                let nearest = initial_lines
                    .iter()
                    .min_by(|a, b| {
                        (a.frequency - p.frequency)
                            .abs()
                            .total_cmp(&(b.frequency - p.frequency).abs())
                    })
                    .ok_or_else(|| FitError::UnknownAssignment(format!("peak at {}", p.frequency)))?;
                targets.push((p.frequency, nearest.label(), true));
            }
        }
    }
    let residuals_at = |x: &[f64]| -> Option<Vec<Residual>> {
        let lines = model_lines(&template.with_values(&spec.free, x), &solver).ok()?;
        targets
            .iter()
            .map(|(obs, label, nearest)| {
                let m = lines.iter().find(|l| &l.label() == label)?.frequency;
                Some(Residual {
                    at: *obs,
                    observed: *obs,
                    model: m,
                    residual: obs - m,
                    label: Some(label.clone()),
                    nearest: *nearest,
                })
            })
            .collect()
    };
    let (best, best_start, evaluations) = multistart(spec, |x| {
        residuals_at(x).map_or(f64::INFINITY, |r| r.iter().map(|r| r.residual * r.residual).sum())
    });
    let residuals = residuals_at(&best.x).unwrap_or_default();
    let nearest_assignment = targets.iter().any(|t| t.2);
    let mut diagnostics = Vec::new();
    if nearest_assignment {
        diagnostics.push("some peaks were assigned by nearest frequency".to_string());
    }
    let mut converged = best.converged;
    if residuals.len() != targets.len() {
        converged = false;
        diagnostics.push("model evaluation failed at the best point".to_string());
    } else if !best.converged {
        diagnostics.push(format!("simplex did not converge within {} iterations", spec.max_iterations));
    }
    Ok(FitReport {
        values: fitted_values(spec, &best.x),
        objective: residuals.iter().map(|r| r.residual * r.residual).sum(),
        residuals,
        iterations: best.iterations,
        evaluations,
        converged,
        best_start,
        nearest_assignment,
        diagnostics,
    })
}

/// Model envelope on arbitrary sample points: scale × Σ intensity × profile.
pub fn envelope_at(template: &ModelTemplate, lines: &[Line], at: &[f64]) -> Vec<f64> {
    let c = &template.synthesis;
    at.iter()
        .map(|&x| {
            template.scale
                * lines
                    .iter()
                    .map(|l| l.intensity * c.shape.value(x - l.frequency, c.fwhm))
                    .sum::<f64>()
        })
        .collect()
}

/// Fits a synthesized envelope to sampled (frequency, amplitude) data.
pub fn fit_envelope(samples: &[(f64, f64)], spec: &FitSpec, template: &ModelTemplate) -> Result<FitReport, FitError> {
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(FitError::InvalidPeaks("sample grid must be strictly increasing".into()));
    }
    if samples.iter().any(|s| !s.0.is_finite() || !s.1.is_finite()) {
        return Err(FitError::InvalidPeaks("samples must be finite".into()));
    }
    let solver = prepare(spec, template, samples.len())?;
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let model_at = |x: &[f64]| -> Option<(Vec<f64>, Vec<Line>)> {
        let m = template.with_values(&spec.free, x);
        if !(m.synthesis.fwhm > 0.0) {
            return None;
        }
        let lines = model_lines(&m, &solver).ok()?;
        Some((envelope_at(&m, &lines, &xs), lines))
    };
    let (best, best_start, evaluations) = multistart(spec, |x| {
        model_at(x).map_or(f64::INFINITY, |(y, _)| {
            y.iter().zip(samples).map(|(m, s)| (s.1 - m) * (s.1 - m)).sum()
        })
    });
    let mut diagnostics = Vec::new();
    let mut converged = best.converged;
    let residuals: Vec<Residual> = match model_at(&best.x) {
        Some((y, lines)) => {
            let (lo, hi) = (xs[0], xs[xs.len() - 1]);
            if !lines.iter().any(|l| l.frequency >= lo && l.frequency <= hi) {
                converged = false;
                diagnostics.push(format!("no model line falls inside the observed grid [{lo}, {hi}] cm-1"));
            }
            y.iter()
                .zip(samples)
                .map(|(m, s)| Residual {
                    at: s.0,
                    observed: s.1,
                    model: *m,
                    residual: s.1 - m,
                    label: None,
                    nearest: false,
                })
                .collect()
        }
        None => {
            converged = false;
            diagnostics.push("model evaluation failed at the best point".to_string());
            Vec::new()
        }
    };
    if !best.converged {
        diagnostics.push(format!("simplex did not converge within {} iterations", spec.max_iterations));
    }
    Ok(FitReport {
        values: fitted_values(spec, &best.x),
        objective: residuals.iter().map(|r| r.residual * r.residual).sum(),
        residuals,
        iterations: best.iterations,
        evaluations,
        converged,
        best_start,
        nearest_assignment: false,
        diagnostics,
    })
}
