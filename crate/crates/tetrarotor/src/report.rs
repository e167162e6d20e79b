//! JSON report records and human-readable tables.
//!
//! JSON keeps full precision; tables print six significant digits. The
//! record shapes are described by the schemas in `schemas/`.

use std::fmt::Write;

use serde::Serialize;
use tetrarotor_core::fitting::FitReport;
use tetrarotor_core::qubitplan::{MonteCarloNn, PlanReport};
use tetrarotor_core::rotor::{barrier_height, tunneling_frequencies, EnergyLevel, RotorModel};
use tetrarotor_core::spectrum::{Line, SpectrumConfig, Synthesis};
use tetrarotor_core::symmetry::{
    character_table, correlate, raman_active_labels, spin_decomposition, GroupId, ROVIB_DICTIONARY,
};
use tetrarotor_core::units::cm1_to_ghz;

use crate::io::sig6;

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(value).expect("report types serialize");
    v.push(b'\n');
    v
}

#[derive(Serialize)]
pub struct PotentialTermRecord {
    pub rank: i32,
    pub coefficient: f64,
}

#[derive(Serialize)]
pub struct ModelRecord {
    #[serde(rename = "B")]
    pub b: f64,
    pub beta: f64,
    #[serde(rename = "Jmax")]
    pub jmax: i32,
    pub potential: Vec<PotentialTermRecord>,
    pub barrier_cm1: f64,
}

impl ModelRecord {
    pub fn new(m: &RotorModel) -> ModelRecord {
        ModelRecord {
            b: m.b,
            beta: m.beta,
            jmax: m.jmax,
            potential: m
                .potential
                .terms
                .iter()
                .map(|t| PotentialTermRecord {
                    rank: t.rank,
                    coefficient: t.coefficient,
                })
                .collect(),
            barrier_cm1: barrier_height(m),
        }
    }
}

#[derive(Serialize)]
pub struct LevelRecord {
    pub name: String,
    pub energy_cm1: f64,
    pub degeneracy: usize,
    pub label: String,
    pub spin: String,
    pub ordinal: usize,
    pub shared: bool,
}

#[derive(Serialize)]
pub struct LevelsReport {
    pub model: ModelRecord,
    pub omega_la_cm1: Option<f64>,
    pub omega_le2_cm1: Option<f64>,
    pub levels: Vec<LevelRecord>,
}

pub fn levels_report(model: &RotorModel, levels: &[EnergyLevel]) -> LevelsReport {
    let t = tunneling_frequencies(levels).ok();
    LevelsReport {
        model: ModelRecord::new(model),
        omega_la_cm1: t.map(|t| t.0),
        omega_le2_cm1: t.map(|t| t.1),
        levels: levels
            .iter()
            .map(|l| LevelRecord {
                name: l.name(),
                energy_cm1: l.energy,
                degeneracy: l.degeneracy,
                label: l.rovib_label.label.clone(),
                spin: l.spin_species.to_string(),
                ordinal: l.ordinal,
                shared: l.shared,
            })
            .collect(),
    }
}

pub fn levels_table(report: &LevelsReport, max_energy: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "B = {} cm-1, beta = {}, Jmax = {}, barrier = {} cm-1",
        sig6(report.model.b),
        sig6(report.model.beta),
        report.model.jmax,
        sig6(report.model.barrier_cm1)
    );
    if let (Some(a), Some(e)) = (report.omega_la_cm1, report.omega_le2_cm1) {
        let _ = writeln!(
            s,
            "omega_LA = {} cm-1 ({} GHz), omega_LE2 = {} cm-1",
            sig6(a),
            sig6(cm1_to_ghz(a)),
            sig6(e)
        );
    }
    let _ = writeln!(s, "{:>12}  {:>4}  {:<8} spin", "energy/cm-1", "deg", "level");
    for l in report.levels.iter().filter(|l| l.energy_cm1 <= max_energy) {
        let _ = writeln!(
            s,
            "{:>12}  {:>4}  {:<8} {}{}",
            sig6(l.energy_cm1),
            l.degeneracy,
            l.name,
            l.spin,
            if l.shared { " (shared)" } else { "" }
        );
    }
    s
}

#[derive(Serialize)]
pub struct SpectrumReport<'a> {
    pub fwhm_cm1: f64,
    pub fwhm_ghz: f64,
    pub shape: &'static str,
    pub start_cm1: f64,
    pub stop_cm1: f64,
    pub step_cm1: f64,
    pub population_mode: &'static str,
    pub temperature_k: f64,
    pub lines: &'a [Line],
    pub clipped: Vec<String>,
    pub samples: usize,
}

pub fn spectrum_report<'a>(
    config: &SpectrumConfig,
    population: &tetrarotor_core::spectrum::PopulationModel,
    lines: &'a [Line],
    synthesis: &Synthesis,
) -> SpectrumReport<'a> {
    use tetrarotor_core::spectrum::{LineShape, PopulationMode};
    SpectrumReport {
        fwhm_cm1: config.fwhm,
        fwhm_ghz: config.fwhm_ghz(),
        shape: match config.shape {
            LineShape::Gaussian => "gaussian",
            LineShape::Lorentzian => "lorentzian",
        },
        start_cm1: config.start,
        stop_cm1: config.stop,
        step_cm1: config.step,
        population_mode: match population.mode {
            PopulationMode::Thermal => "thermal",
            PopulationMode::SpinFrozen => "spin_frozen",
        },
        temperature_k: population.temperature,
        lines,
        clipped: synthesis.clipped.iter().map(Line::label).collect(),
        samples: synthesis.samples.len(),
    }
}

pub fn lines_table(report: &SpectrumReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# fwhm {} cm-1 = {:.2} GHz, {} profile, {} at {} K",
        sig6(report.fwhm_cm1),
        report.fwhm_ghz,
        report.shape,
        report.population_mode,
        sig6(report.temperature_k)
    );
    let strongest = report.lines.iter().map(|l| l.intensity).fold(0.0, f64::max);
    let _ = writeln!(s, "{:>12}  {:>10}  {:<6} transition", "freq/cm-1", "rel.int", "kind");
    for l in report.lines {
        let rel = if strongest > 0.0 { l.intensity / strongest } else { 0.0 };
        let _ = writeln!(s, "{:>12}  {:>10}  {:<6} {}", sig6(l.frequency), sig6(rel), l.activity.as_str(), l.label());
    }
    s
}

#[derive(Serialize)]
pub struct FitOutput<'a> {
    pub kind: &'static str,
    pub seed: u64,
    #[serde(flatten)]
    pub report: &'a FitReport,
}

pub fn fit_table(r: &FitReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "converged: {}  objective: {}  iterations: {}  evaluations: {}  best start: {}",
        r.converged,
        sig6(r.objective),
        r.iterations,
        r.evaluations,
        r.best_start
    );
    let _ = writeln!(s, "{:<14} {:>12}  bounds", "parameter", "value");
    for v in &r.values {
        let _ = writeln!(s, "{:<14} {:>12}  [{}, {}]", v.name, sig6(v.value), sig6(v.lower), sig6(v.upper));
    }
    if r.residuals.iter().any(|x| x.label.is_some()) {
        let _ = writeln!(s, "{:>12}  {:>12}  {:>10}  assignment", "observed", "model", "residual");
        for x in &r.residuals {
            let _ = writeln!(
                s,
                "{:>12}  {:>12}  {:>10}  {}{}",
                sig6(x.observed),
                sig6(x.model),
                sig6(x.residual),
                x.label.as_deref().unwrap_or("-"),
                if x.nearest { " (nearest)" } else { "" }
            );
        }
    } else {
        let _ = writeln!(s, "max |residual| over {} samples: {}", r.residuals.len(), sig6(r.max_abs_residual()));
    }
    for d in &r.diagnostics {
        let _ = writeln!(s, "note: {d}");
    }
    s
}

#[derive(Serialize)]
pub struct PlanOutput<'a> {
    #[serde(flatten)]
    pub report: &'a PlanReport,
    pub monte_carlo: &'a MonteCarloNn,
    pub seed: u64,
}

pub fn plan_table(r: &PlanReport, mc: &MonteCarloNn) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>10}  {:>10}  pair", "dw/cm-1", "dw/GHz");
    for d in &r.delta_omega_pairs {
        let _ = writeln!(s, "{:>10}  {:>10}  {} - {}", sig6(d.cm1), sig6(d.ghz), d.upper, d.lower);
    }
    for c in &r.channels {
        let _ = writeln!(
            s,
            "band {}: fwhm {} cm-1 = {} GHz, {} channels",
            c.band,
            sig6(c.fwhm_cm1),
            sig6(c.fwhm_ghz),
            c.channels
        );
    }
    let _ = writeln!(
        s,
        "r12: characteristic {} nm, random-dilution mean {} nm (Monte Carlo {} nm over {} qubits)",
        sig6(r.r12.characteristic_nm),
        sig6(r.r12.mean_nm),
        sig6(mc.mean),
        mc.samples
    );
    for c in &r.couplings {
        let _ = writeln!(s, "coupling at {} nm: {} Hz", sig6(c.r_nm), sig6(c.hz));
    }
    s
}

#[derive(Serialize)]
pub struct CharacterRow {
    pub label: String,
    pub dimension: usize,
    /// `[re, im]` per class.
    pub characters: Vec<[f64; 2]>,
}

#[derive(Serialize)]
pub struct ClassRecord {
    pub label: String,
    pub size: usize,
}

#[derive(Serialize)]
pub struct GroupRecord {
    pub name: String,
    pub order: usize,
    pub classes: Vec<ClassRecord>,
    pub irreps: Vec<CharacterRow>,
    pub raman_active: Vec<String>,
}

#[derive(Serialize)]
pub struct Multiplicity {
    pub label: String,
    pub multiplicity: usize,
}

#[derive(Serialize)]
pub struct CorrelationRecord {
    pub from: String,
    pub to: Vec<Multiplicity>,
}

#[derive(Serialize)]
pub struct SpinRecord {
    pub species: String,
    pub total: usize,
    pub weight: usize,
}

#[derive(Serialize)]
pub struct RovibRecord {
    pub label: String,
    pub dimension: usize,
    pub components: Vec<String>,
    pub spin: String,
}

#[derive(Serialize)]
pub struct SymmetryReport {
    pub groups: Vec<GroupRecord>,
    pub correlation_td_d2d: Vec<CorrelationRecord>,
    pub spin: Vec<SpinRecord>,
    pub rovib: Vec<RovibRecord>,
}

pub fn symmetry_report() -> SymmetryReport {
    let groups = GroupId::ALL
        .iter()
        .map(|&g| {
            let t = character_table(g.name()).expect("built-in table");
            GroupRecord {
                name: t.name.clone(),
                order: t.order(),
                classes: t
                    .classes
                    .iter()
                    .map(|c| ClassRecord {
                        label: c.label.clone(),
                        size: c.size,
                    })
                    .collect(),
                irreps: t
                    .irreps
                    .iter()
                    .map(|r| CharacterRow {
                        label: r.label.clone(),
                        dimension: r.dimension,
                        characters: r.characters.iter().map(|c| [c.re, c.im]).collect(),
                    })
                    .collect(),
                raman_active: raman_active_labels(g).into_iter().map(|l| l.label).collect(),
            }
        })
        .collect();
    let td = character_table("T_d").expect("built-in table");
    let correlation_td_d2d = td
        .irreps
        .iter()
        .map(|r| {
            let label = td.label(&r.label).expect("own row");
            CorrelationRecord {
                from: r.label.clone(),
                to: correlate(&label)
                    .expect("T_d correlates to D_2d")
                    .into_iter()
                    .map(|(l, n)| Multiplicity {
                        label: l.label,
                        multiplicity: n,
                    })
                    .collect(),
            }
        })
        .collect();
    let spin = spin_decomposition()
        .into_iter()
        .map(|s| SpinRecord {
            species: s.label.to_string(),
            total: s.total_count,
            weight: s.spin_weight,
        })
        .collect();
    let rovib = ROVIB_DICTIONARY
        .iter()
        .map(|e| RovibRecord {
            label: e.label.to_string(),
            dimension: e.dimension(),
            components: e
                .components
                .iter()
                .map(|&(s, m)| tetrarotor_core::symmetry::product_label(s, m))
                .collect(),
            spin: e.spin.to_string(),
        })
        .collect();
    SymmetryReport {
        groups,
        correlation_td_d2d,
        spin,
        rovib,
    }
}

pub fn symmetry_table(r: &SymmetryReport) -> String {
    let mut s = String::new();
    for g in &r.groups {
        let _ = writeln!(s, "{} (order {})", g.name, g.order);
        let head: String = g.classes.iter().map(|c| format!("{:>14}", c.label)).collect();
        let _ = writeln!(s, "  {:<8}{}", "", head);
        for row in &g.irreps {
            let cells: String = row.characters.iter().map(|c| format!("{:>14}", character(c))).collect();
            let _ = writeln!(s, "  {:<8}{}", row.label, cells);
        }
        let _ = writeln!(s, "  Raman active: {}", g.raman_active.join(", "));
    }
    let _ = writeln!(s, "T_d -> D_2d");
    for c in &r.correlation_td_d2d {
        let parts: Vec<String> = c
            .to
            .iter()
            .map(|m| if m.multiplicity > 1 { format!("{}{}", m.multiplicity, m.label) } else { m.label.clone() })
            .collect();
        let _ = writeln!(s, "  {:<4} -> {}", c.from, parts.join(" + "));
    }
    let _ = writeln!(s, "nuclear spin species");
    for sp in &r.spin {
        let _ = writeln!(s, "  {}: {} states, weight {}", sp.species, sp.total, sp.weight);
    }
    let _ = writeln!(s, "vibration-orientation labels");
    for e in &r.rovib {
        let _ = writeln!(s, "  {:<4} dim {:>2}  spin {}  {}", e.label, e.dimension, e.spin, e.components.join(" + "));
    }
    s
}

fn short(x: f64) -> String {
    let r = (x * 1000.0).round() / 1000.0;
    if r == 0.0 {
        "0".to_string()
    } else {
        r.to_string()
    }
}

fn character(c: &[f64; 2]) -> String {
    if c[1].abs() < 5e-4 {
        short(c[0])
    } else if c[0].abs() < 5e-4 {
        format!("{}i", short(c[1]))
    } else {
        format!("{}{}{}i", short(c[0]), if c[1] > 0.0 { "+" } else { "" }, short(c[1]))
    }
}
