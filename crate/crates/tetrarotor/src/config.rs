//! Sectioned TOML run configuration.
//!
//! Parsing never stops at the first problem: every missing key, type
//! mismatch, unknown key and invariant violation is collected and returned
//! together, each tagged with its section and key.

use std::collections::BTreeMap;
use std::fmt;

use tetrarotor_core::fitting::{FitParam, FitSpec, FreeParam, ModelTemplate};
use tetrarotor_core::qubitplan::CrystalSpec;
use tetrarotor_core::rotor::{Potential, RotorModel, DEFAULT_B, DEFAULT_CLUSTER_TOL, DEFAULT_JMAX};
use tetrarotor_core::spectrum::{
    LineShape, PopulationMode, PopulationModel, RamanOptions, SpectrumConfig, VibrationBandModel, DW_L1_STAR,
    DW_LE3_STAR,
};
use toml::{Table, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError {
    pub section: String,
    pub key: Option<String>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.key {
            Some(k) => write!(f, "[{}] {}: {}", self.section, k, self.message),
            None => write!(f, "[{}]: {}", self.section, self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandConfig {
    pub vibration: VibrationBandModel,
    /// Lattice-mode quantum for sum bands; none when absent.
    pub lattice_freq: Option<f64>,
    pub sum_scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SourceConfig {
    pub linewidth_ghz: f64,
    pub dipole_debye: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitConfig {
    pub free: Vec<String>,
    pub bounds: BTreeMap<String, (f64, f64)>,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub starts: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanConfig {
    pub distances_nm: Vec<f64>,
    pub mc_samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: RotorModel,
    pub band: BandConfig,
    pub population: PopulationModel,
    pub synthesis: SpectrumConfig,
    pub raman: RamanOptions,
    pub crystal: CrystalSpec,
    pub source: SourceConfig,
    pub fit: FitConfig,
    pub plan: PlanConfig,
}

const REQUIRED_SECTIONS: [&str; 4] = ["model", "band", "population", "synthesis"];
const OPTIONAL_SECTIONS: [&str; 5] = ["raman", "crystal", "source", "fit", "plan"];

struct Section<'a> {
    name: &'static str,
    table: Table,
    errors: &'a mut Vec<ConfigError>,
}

impl<'a> Section<'a> {
    fn err(&mut self, key: &str, message: impl Into<String>) {
        self.errors.push(ConfigError {
            section: self.name.to_string(),
            key: Some(key.to_string()),
            message: message.into(),
        });
    }

    fn take(&mut self, key: &str, default_present: bool) -> Option<Value> {
        let v = self.table.remove(key);
        if v.is_none() && !default_present {
            self.err(key, "missing required key");
        }
        v
    }

    fn f64_or(&mut self, key: &str, default: Option<f64>) -> f64 {
        match self.take(key, default.is_some()) {
            Some(Value::Float(x)) => x,
            Some(Value::Integer(i)) => i as f64,
            Some(other) => {
                self.err(key, format!("expected a number, found {}", other.type_str()));
                f64::NAN
            }
            None => default.unwrap_or(f64::NAN),
        }
    }

    fn usize_or(&mut self, key: &str, default: usize) -> usize {
        match self.take(key, true) {
            Some(Value::Integer(i)) if i >= 0 => i as usize,
            Some(other) => {
                self.err(key, format!("expected a non-negative integer, found {other}"));
                default
            }
            None => default,
        }
    }

    fn str_or(&mut self, key: &str, default: &str) -> String {
        match self.take(key, true) {
            Some(Value::String(s)) => s,
            Some(other) => {
                self.err(key, format!("expected a string, found {}", other.type_str()));
                default.to_string()
            }
            None => default.to_string(),
        }
    }

    fn f64_list(&mut self, key: &str, default: Vec<f64>) -> Vec<f64> {
        match self.take(key, true) {
            Some(Value::Array(a)) => {
                let mut out = Vec::new();
                for v in a {
                    match v {
                        Value::Float(x) => out.push(x),
                        Value::Integer(i) => out.push(i as f64),
                        other => {
                            self.err(key, format!("expected numbers, found {}", other.type_str()));
                            return default;
                        }
                    }
                }
                out
            }
            Some(other) => {
                self.err(key, format!("expected an array, found {}", other.type_str()));
                default
            }
            None => default,
        }
    }

    fn finish(mut self) {
        let keys: Vec<String> = self.table.keys().cloned().collect();
        for k in keys {
            self.err(&k, "unknown key");
        }
    }
}

fn section<'a>(root: &mut Table, name: &'static str, errors: &'a mut Vec<ConfigError>) -> Section<'a> {
    let table = match root.remove(name) {
        Some(Value::Table(t)) => t,
        Some(_) => {
            errors.push(ConfigError {
                section: name.to_string(),
                key: None,
                message: "expected a table".into(),
            });
            Table::new()
        }
        None => {
            if REQUIRED_SECTIONS.contains(&name) {
                errors.push(ConfigError {
                    section: name.to_string(),
                    key: None,
                    message: "missing required section".into(),
                });
            }
            Table::new()
        }
    };
    Section { name, table, errors }
}

/// Applies `section.key=value` overrides; values use TOML syntax, bare words
/// are taken as strings.
pub fn apply_overrides(root: &mut Table, overrides: &[String]) -> Result<(), Vec<ConfigError>> {
    let mut errors = Vec::new();
    for o in overrides {
        let bad = |m: &str| ConfigError {
            section: "override".into(),
            key: Some(o.clone()),
            message: m.into(),
        };
        let Some((path, raw)) = o.split_once('=') else {
            errors.push(bad("expected section.key=value"));
            continue;
        };
        let Some((sec, key)) = path.trim().split_once('.') else {
            errors.push(bad("expected section.key=value"));
            continue;
        };
        let raw = raw.trim();
        let value = match format!("v = {raw}").parse::<Table>() {
            Ok(mut t) => t.remove("v").expect("parsed key"),
            Err(_) => Value::String(raw.to_string()),
        };
        let entry = root
            .entry(sec.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        match entry {
            Value::Table(t) => {
                t.insert(key.to_string(), value);
            }
            _ => errors.push(bad("section is not a table")),
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, Vec<ConfigError>> {
    parse_config_with(text, &[])
}

pub fn parse_config_with(text: &str, overrides: &[String]) -> Result<RunConfig, Vec<ConfigError>> {
    let mut root: Table = text.parse().map_err(|e: toml::de::Error| {
        vec![ConfigError {
            section: "syntax".into(),
            key: None,
            message: e.message().to_string(),
        }]
    })?;
    apply_overrides(&mut root, overrides)?;
    let mut errors = Vec::new();

    let mut s = section(&mut root, "model", &mut errors);
    let b = s.f64_or("B", Some(DEFAULT_B));
    let beta = s.f64_or("beta", None);
    let jmax = s.usize_or("Jmax", DEFAULT_JMAX as usize);
    let terms: Vec<(i32, f64)> = match s.take("potential", true) {
        None => vec![(3, -1.0)],
        Some(Value::Table(t)) => {
            let mut out = Vec::new();
            for (k, v) in t {
                let rank = k.strip_prefix("rank").and_then(|r| r.parse::<i32>().ok());
                let c = match v {
                    Value::Float(x) => Some(x),
                    Value::Integer(i) => Some(i as f64),
                    _ => None,
                };
                match (rank, c) {
                    (Some(r), Some(c)) => out.push((r, c)),
                    _ => s.err("potential", format!("entry '{k}' must be rankN = number")),
                }
            }
            out
        }
        Some(other) => {
            s.err("potential", format!("expected a table of rankN = coefficient, found {}", other.type_str()));
            vec![(3, -1.0)]
        }
    };
    s.finish();
    let potential = match Potential::normalized(&terms) {
        Ok(p) => Some(p),
        Err(e) => {
            errors.push(ConfigError {
                section: "model".into(),
                key: Some("potential".into()),
                message: e.to_string(),
            });
            None
        }
    };
    let model = RotorModel {
        b,
        beta,
        potential: potential.unwrap_or_else(Potential::default_rank3),
        jmax: jmax.min(i32::MAX as usize) as i32,
    };
    // NaN marks a value whose missing key or type error is already reported
    for (key, value, ok, msg) in [
        ("B", b, b > 0.0 && b.is_finite(), "must be positive"),
        ("beta", beta, beta >= 0.0 && beta.is_finite(), "must be non-negative"),
        ("Jmax", 0.0, (2..=40).contains(&jmax), "must be between 2 and 40"),
    ] {
        if !ok && !value.is_nan() {
            errors.push(ConfigError {
                section: "model".into(),
                key: Some(key.into()),
                message: msg.into(),
            });
        }
    }

    let mut s = section(&mut root, "band", &mut errors);
    let nu0 = s.f64_or("nu0", None);
    let excited_scale = s.f64_or("excited_scale", Some(1.0));
    let mut extra_offsets: BTreeMap<String, f64> =
        [(DW_L1_STAR.to_string(), 0.0), (DW_LE3_STAR.to_string(), 0.0)].into();
    match s.take("extra_offsets", true) {
        None => {}
        Some(Value::Table(t)) => {
            for (k, v) in t {
                match v {
                    Value::Float(x) => {
                        extra_offsets.insert(k, x);
                    }
                    Value::Integer(i) => {
                        extra_offsets.insert(k, i as f64);
                    }
                    _ => s.err("extra_offsets", format!("offset '{k}' must be a number")),
                }
            }
        }
        Some(other) => s.err("extra_offsets", format!("expected a table, found {}", other.type_str())),
    }
    let lattice_freq = s.table.contains_key("lattice_freq").then(|| s.f64_or("lattice_freq", Some(0.0)));
    let sum_scale = s.f64_or("sum_scale", Some(0.1));
    if !(nu0 > 0.0) && !nu0.is_nan() {
        s.err("nu0", "must be positive");
    }
    if !(excited_scale > 0.0) {
        s.err("excited_scale", "must be positive");
    }
    if lattice_freq.is_some_and(|l| !(l >= 0.0)) {
        s.err("lattice_freq", "must be non-negative");
    }
    if !(sum_scale >= 0.0) {
        s.err("sum_scale", "must be non-negative");
    }
    s.finish();

    let mut s = section(&mut root, "population", &mut errors);
    let mode = s.str_or("mode", "thermal");
    let t = s.f64_or("T", None);
    let fractions = s.f64_list("fractions", PopulationModel::statistical_fractions().to_vec());
    let mode = match mode.as_str() {
        "thermal" => PopulationMode::Thermal,
        "spin_frozen" => PopulationMode::SpinFrozen,
        _ => {
            s.err("mode", "expected \"thermal\" or \"spin_frozen\"");
            PopulationMode::Thermal
        }
    };
    if !(t > 0.0) && !t.is_nan() {
        s.err("T", "must be positive");
    }
    let mut frozen = PopulationModel::statistical_fractions();
    if fractions.len() == 3 {
        frozen.copy_from_slice(&fractions);
        if frozen.iter().any(|f| *f < 0.0) || (frozen.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            s.err("fractions", "must be non-negative and sum to 1");
        }
    } else {
        s.err("fractions", "expected three values for A, E, F");
    }
    s.finish();
    let population = PopulationModel {
        mode,
        temperature: t,
        frozen_fractions: frozen,
    };

    let mut s = section(&mut root, "synthesis", &mut errors);
    let start = s.f64_or("start", None);
    let stop = s.f64_or("stop", None);
    let step = s.f64_or("step", Some(0.05));
    let shape = match s.str_or("shape", "gaussian").as_str() {
        "gaussian" => LineShape::Gaussian,
        "lorentzian" => LineShape::Lorentzian,
        _ => {
            s.err("shape", "expected \"gaussian\" or \"lorentzian\"");
            LineShape::Gaussian
        }
    };
    let fwhm = s.f64_or("fwhm", Some(1.5));
    let synthesis = SpectrumConfig {
        start,
        stop,
        step,
        shape,
        fwhm,
    };
    if !start.is_nan() && !stop.is_nan() {
        if let Err(tetrarotor_core::spectrum::SpectrumError::Invalid { field, reason }) = synthesis.validate() {
            s.err(field, reason);
        }
    } else if !(fwhm > 0.0) {
        s.err("fwhm", "must be positive");
    }
    s.finish();

    let mut s = section(&mut root, "raman", &mut errors);
    let max_shift = s.f64_or("max_shift", Some(RamanOptions::default().max_shift));
    if !(max_shift > 0.0) {
        s.err("max_shift", "must be positive");
    }
    s.finish();

    let mut s = section(&mut root, "crystal", &mut errors);
    let a = s.f64_or("a", Some(1.0));
    let c = s.f64_or("c", Some(0.01));
    if !(a > 0.0) {
        s.err("a", "must be positive");
    }
    if !(c > 0.0 && c <= 1.0) {
        s.err("c", "must lie in (0, 1]");
    }
    s.finish();

    let mut s = section(&mut root, "source", &mut errors);
    let linewidth_ghz = s.f64_or("linewidth", Some(1.0));
    let dipole_debye = s.f64_or("dipole", Some(1.0));
    if !(linewidth_ghz > 0.0) {
        s.err("linewidth", "must be positive");
    }
    if !(dipole_debye >= 0.0) {
        s.err("dipole", "must be non-negative");
    }
    s.finish();

    let mut s = section(&mut root, "fit", &mut errors);
    let free: Vec<String> = match s.take("free", true) {
        None => ["B", "beta", "nu0", "extra_offsets"].map(String::from).to_vec(),
        Some(Value::Array(a)) => a
            .into_iter()
            .filter_map(|v| match v {
                Value::String(x) => Some(x),
                _ => None,
            })
            .collect(),
        Some(_) => {
            s.err("free", "expected a list of parameter names");
            Vec::new()
        }
    };
    for f in &free {
        if let Err(e) = FitParam::parse(f) {
            s.err("free", e.to_string());
        }
    }
    let mut bounds = BTreeMap::new();
    match s.take("bounds", true) {
        None => {}
        Some(Value::Table(t)) => {
            for (k, v) in t {
                let pair = match &v {
                    Value::Array(a) if a.len() == 2 => {
                        let n: Vec<f64> = a
                            .iter()
                            .filter_map(|x| x.as_float().or_else(|| x.as_integer().map(|i| i as f64)))
                            .collect();
                        (n.len() == 2 && n[0] < n[1]).then(|| (n[0], n[1]))
                    }
                    _ => None,
                };
                match pair {
                    Some(p) => {
                        bounds.insert(k, p);
                    }
                    None => s.err("bounds", format!("'{k}' must be [lower, upper] with lower < upper")),
                }
            }
        }
        Some(other) => s.err("bounds", format!("expected a table, found {}", other.type_str())),
    }
    let max_iterations = s.usize_or("max_iterations", 2000);
    let tolerance = s.f64_or("tolerance", Some(1e-10));
    let starts = s.usize_or("starts", 8);
    let seed = s.usize_or("seed", 0) as u64;
    if max_iterations == 0 {
        s.err("max_iterations", "must be positive");
    }
    if starts == 0 {
        s.err("starts", "must be positive");
    }
    if !(tolerance >= 0.0) {
        s.err("tolerance", "must be non-negative");
    }
    s.finish();

    let mut s = section(&mut root, "plan", &mut errors);
    let distances_nm = s.f64_list("distances", Vec::new());
    let mc_samples = s.usize_or("mc_samples", 100_000);
    let plan_seed = s.usize_or("seed", 0) as u64;
    if distances_nm.iter().any(|d| !(*d > 0.0)) {
        s.err("distances", "must be positive");
    }
    if mc_samples < 2 {
        s.err("mc_samples", "must be at least 2");
    }
    s.finish();

    for k in root.keys() {
        errors.push(ConfigError {
            section: k.clone(),
            key: None,
            message: "unknown section".into(),
        });
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(RunConfig {
        model,
        band: BandConfig {
            vibration: VibrationBandModel {
                nu0,
                excited_scale,
                extra_offsets,
            },
            lattice_freq,
            sum_scale,
        },
        population,
        synthesis,
        raman: RamanOptions { max_shift },
        crystal: CrystalSpec { a, c },
        source: SourceConfig {
            linewidth_ghz,
            dipole_debye,
        },
        fit: FitConfig {
            free,
            bounds,
            max_iterations,
            tolerance,
            starts,
            seed,
        },
        plan: PlanConfig {
            distances_nm,
            mc_samples,
            seed: plan_seed,
        },
    })
}

impl RunConfig {
    pub fn template(&self) -> ModelTemplate {
        ModelTemplate {
            b: self.model.b,
            beta: self.model.beta,
            potential: self.model.potential.clone(),
            jmax: self.model.jmax,
            band: self.band.vibration.clone(),
            population: self.population.clone(),
            synthesis: self.synthesis.clone(),
            strengths: None,
            scale: 1.0,
            cluster_tol: DEFAULT_CLUSTER_TOL,
        }
    }

    pub fn fit_spec(&self) -> Result<FitSpec, tetrarotor_core::fitting::FitError> {
        let t = self.template();
        let mut free = Vec::new();
        for name in &self.fit.free {
            let p = FitParam::parse(name)?;
            let initial = t.initial(&p);
            free.push(match self.fit.bounds.get(name) {
                Some(&(lo, hi)) => FreeParam::bounded(p, initial, lo, hi),
                None => FreeParam::new(p, initial),
            });
        }
        Ok(FitSpec {
            free,
            max_iterations: self.fit.max_iterations,
            tolerance: self.fit.tolerance,
            starts: self.fit.starts,
            seed: self.fit.seed,
        })
    }
}

/// Section names that must be present.
pub fn required_sections() -> &'static [&'static str] {
    &REQUIRED_SECTIONS
}

pub fn optional_sections() -> &'static [&'static str] {
    &OPTIONAL_SECTIONS
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[model]
beta = 1.0
[band]
nu0 = 3206.0
[population]
T = 7.0
[synthesis]
start = 3150.0
stop = 3300.0
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.model.b, 5.9);
        assert_eq!(c.model.jmax, 10);
        assert_eq!(c.band.vibration.excited_scale, 1.0);
        assert_eq!(c.population.frozen_fractions, [5.0 / 16.0, 2.0 / 16.0, 9.0 / 16.0]);
        assert_eq!(c.synthesis.fwhm, 1.5);
        assert!(c.model.potential.is_normalized());
        assert_eq!(c.fit.starts, 8);
    }

    #[test]
    fn negative_beta_names_section_and_key() {
        let e = parse_config(&MINIMAL.replace("beta = 1.0", "beta = -1.0")).unwrap_err();
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].section.as_str(), e[0].key.as_deref()), ("model", Some("beta")));
    }

    #[test]
    fn empty_text_lists_every_required_section() {
        let e = parse_config("").unwrap_err();
        for s in REQUIRED_SECTIONS {
            assert!(e.iter().any(|x| x.section == s && x.key.is_none()), "{s}");
        }
    }

    #[test]
    fn collects_all_errors() {
        let text = MINIMAL.replace("beta = 1.0", "beta = \"x\"\nfoo = 1").replace("T = 7.0", "T = -3");
        let e = parse_config(&format!("{text}\n[nonsense]\n")).unwrap_err();
        let keys: Vec<_> = e.iter().map(|x| (x.section.as_str(), x.key.as_deref())).collect();
        assert!(keys.contains(&("model", Some("beta"))));
        assert!(keys.contains(&("model", Some("foo"))));
        assert!(keys.contains(&("population", Some("T"))));
        assert!(keys.contains(&("nonsense", None)));
        assert_eq!(e.iter().filter(|x| x.key.as_deref() == Some("beta")).count(), 1);
    }

    #[test]
    fn overrides_take_precedence() {
        let c = parse_config_with(MINIMAL, &["model.beta=5".into(), "population.mode=spin_frozen".into()]).unwrap();
        assert_eq!(c.model.beta, 5.0);
        assert_eq!(c.population.mode, PopulationMode::SpinFrozen);
        assert!(parse_config_with(MINIMAL, &["nokey".into()]).is_err());
    }

    #[test]
    fn potential_and_offsets() {
        let text = MINIMAL.replace("beta = 1.0", "beta = 1.0\npotential = { rank3 = -1.0, rank4 = 0.3 }")
            .replace("nu0 = 3206.0", "nu0 = 3206.0\nextra_offsets = { dw_l1_star = 1.5 }");
        let c = parse_config(&text).unwrap();
        assert_eq!(c.model.potential.terms.len(), 2);
        assert_eq!(c.band.vibration.extra_offsets["dw_l1_star"], 1.5);
        assert_eq!(c.band.vibration.extra_offsets["dw_le3_star"], 0.0);
        let bad = MINIMAL.replace("beta = 1.0", "beta = 1.0\npotential = { rank5 = 1.0 }");
        assert!(parse_config(&bad).is_err());
    }
}
