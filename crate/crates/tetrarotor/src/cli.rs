//! Subcommand dispatch.
//!
//! Exit status: 0 success, 1 usage, configuration or input errors, 2 numerical
//! non-convergence.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use tetrarotor_core::fitting::{fit_envelope, fit_line_positions, FitError};
use tetrarotor_core::qubitplan::{monte_carlo_nn_mean, plan, PlanInput};
use tetrarotor_core::rotor::{EnergyLevel, RotorError, RotorSolver, DEFAULT_CLUSTER_TOL};
use tetrarotor_core::spectrum::{
    rotational_raman_lines, sum_band_lines, synthesize, vibration_orientation_lines, Activity, Line,
};

use crate::config::{parse_config_with, ConfigError, RunConfig};
use crate::io::{self, write_atomic};
use crate::report;
use crate::svg::spectrum_svg;

#[derive(Parser, Debug)]
#[command(name = "tetrarotor", version, about = "Hindered tetrahedral rotor levels, spectra, fits and qubit planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Run configuration (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Directory for output files.
    #[arg(short, long, default_value = ".")]
    out: PathBuf,
    /// Override a config value, e.g. --set model.beta=5.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
    /// Seed for multistart fits and Monte Carlo sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Do not print tables to stdout.
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Character tables, descent correlation, spin species and level labels.
    Symmetry {
        #[arg(short, long, default_value = ".")]
        out: PathBuf,
        #[arg(short, long)]
        quiet: bool,
    },
    /// Labelled orientational energy levels.
    Levels {
        #[command(flatten)]
        common: Common,
        /// Highest energy printed in the table, cm-1.
        #[arg(long, default_value_t = 100.0)]
        max_energy: f64,
    },
    /// Line lists and the synthesized band envelope.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Also write an SVG plot.
        #[arg(long)]
        svg: bool,
        /// Also write rotational Raman lines.
        #[arg(long)]
        raman: bool,
    },
    /// Fit model parameters to peak positions or a sampled envelope.
    Fit {
        #[command(flatten)]
        common: Common,
        /// Peak list CSV (frequency_cm1,intensity,label).
        #[arg(long, required_unless_present = "envelope", conflicts_with = "envelope")]
        peaks: Option<PathBuf>,
        /// Sampled spectrum CSV (frequency_cm1,intensity).
        #[arg(long)]
        envelope: Option<PathBuf>,
    },
    /// Δω table, channel counts, qubit spacings and couplings.
    Plan {
        #[command(flatten)]
        common: Common,
        /// Stick list CSV (frequency_cm1,intensity,lower,upper,...).
        #[arg(long)]
        lines: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Config(Vec<ConfigError>),
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(errors) => {
                writeln!(f, "invalid configuration ({} problem{}):", errors.len(), if errors.len() == 1 { "" } else { "s" })?;
                for e in errors {
                    writeln!(f, "  {e}")?;
                }
                Ok(())
            }
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<io::IoError> for CliError {
    fn from(e: io::IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn rotor_error(e: RotorError) -> CliError {
    match e {
        RotorError::NonConvergence { .. } => CliError::Numerical(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

fn fit_error(e: FitError) -> CliError {
    match e {
        FitError::Rotor(r) => rotor_error(r),
        other => CliError::Input(other.to_string()),
    }
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let text = io::read_text(&common.config)?;
    let mut overrides = common.overrides.clone();
    if let Some(seed) = common.seed {
        overrides.push(format!("fit.seed={seed}"));
        overrides.push(format!("plan.seed={seed}"));
    }
    parse_config_with(&text, &overrides).map_err(CliError::Config)
}

fn levels_of(config: &RunConfig) -> Result<Vec<EnergyLevel>, CliError> {
    RotorSolver::for_model(&config.model)
        .and_then(|s| s.levels(config.model.b, config.model.beta, DEFAULT_CLUSTER_TOL))
        .map_err(rotor_error)
}

fn say(quiet: bool, text: &str) {
    if !quiet {
        print!("{text}");
    }
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(&dir.join(name), bytes)?;
    Ok(())
}

fn run_command(command: Command) -> Result<(), CliError> {
    match command {
        Command::Symmetry { out, quiet } => {
            let r = report::symmetry_report();
            write(&out, "symmetry.json", &report::to_json(&r))?;
            say(quiet, &report::symmetry_table(&r));
        }
        Command::Levels { common, max_energy } => {
            let config = load(&common)?;
            let levels = levels_of(&config)?;
            let r = report::levels_report(&config.model, &levels);
            write(&common.out, "levels.csv", &io::levels_csv(&levels))?;
            write(&common.out, "levels.json", &report::to_json(&r))?;
            say(common.quiet, &report::levels_table(&r, max_energy));
        }
        Command::Spectrum { common, svg, raman } => {
            let config = load(&common)?;
            let levels = levels_of(&config)?;
            let spectrum_err = |e: tetrarotor_core::spectrum::SpectrumError| CliError::Input(e.to_string());
            let mut lines: Vec<Line> =
                vibration_orientation_lines(&levels, &config.band.vibration, &config.population, None)
                    .map_err(spectrum_err)?;
            if let Some(lattice) = config.band.lattice_freq {
                let sums = sum_band_lines(&lines, lattice, config.band.sum_scale).map_err(spectrum_err)?;
                lines.extend(sums);
            }
            let syn = synthesize(&lines, &config.synthesis).map_err(spectrum_err)?;
            for l in &syn.clipped {
                eprintln!(
                    "warning: line {} at {} cm-1 lies outside the grid [{}, {}] and is clipped",
                    l.label(),
                    l.frequency,
                    config.synthesis.start,
                    config.synthesis.stop
                );
            }
            let mut all = lines.clone();
            if raman {
                let r = rotational_raman_lines(&levels, &config.population, &config.raman, None).map_err(spectrum_err)?;
                write(&common.out, "raman.csv", &io::sticks_csv(&r))?;
                all.extend(r);
            }
            let r = report::spectrum_report(&config.synthesis, &config.population, &all, &syn);
            write(&common.out, "sticks.csv", &io::sticks_csv(&lines))?;
            write(&common.out, "spectrum.csv", &io::samples_csv(&syn.samples))?;
            write(&common.out, "spectrum.json", &report::to_json(&r))?;
            if svg {
                let title = format!(
                    "B = {} cm-1, beta = {}, T = {} K, fwhm = {} cm-1",
                    config.model.b, config.model.beta, config.population.temperature, config.synthesis.fwhm
                );
                write(&common.out, "spectrum.svg", spectrum_svg(&lines, &syn, &title).as_bytes())?;
            }
            let ir: Vec<Line> = all.iter().filter(|l| l.activity == Activity::Ir).cloned().collect();
            let shown = report::spectrum_report(&config.synthesis, &config.population, &ir, &syn);
            say(common.quiet, &report::lines_table(&shown));
        }
        Command::Fit { common, peaks, envelope } => {
            let config = load(&common)?;
            let spec = config.fit_spec().map_err(fit_error)?;
            let template = config.template();
            let (kind, r) = match (peaks, envelope) {
                (Some(p), _) => {
                    let peaks = io::read_peaks(&p)?;
                    ("positions", fit_line_positions(&peaks, &spec, &template).map_err(fit_error)?)
                }
                (None, Some(e)) => {
                    let samples = io::read_samples(&e)?;
                    ("envelope", fit_envelope(&samples, &spec, &template).map_err(fit_error)?)
                }
                (None, None) => return Err(CliError::Input("either --peaks or --envelope is required".into())),
            };
            let out = report::FitOutput {
                kind,
                seed: spec.seed,
                report: &r,
            };
            write(&common.out, "fit.json", &report::to_json(&out))?;
            say(common.quiet, &report::fit_table(&r));
            if !r.converged {
                return Err(CliError::Numerical(format!("fit did not converge: {}", r.diagnostics.join("; "))));
            }
        }
        Command::Plan { common, lines } => {
            let config = load(&common)?;
            let lines = io::read_line_list(&lines)?;
            let input = PlanInput {
                bands: lines.iter().map(|(l, _)| (l.clone(), config.synthesis.fwhm)).collect(),
                lines,
                crystal: config.crystal,
                source_linewidth_ghz: config.source.linewidth_ghz,
                dipole_debye: config.source.dipole_debye,
                distances_nm: config.plan.distances_nm.clone(),
            };
            let plan_err = |e: tetrarotor_core::qubitplan::PlanError| CliError::Input(e.to_string());
            let r = plan(&input).map_err(plan_err)?;
            let mc = monte_carlo_nn_mean(&config.crystal, config.plan.mc_samples, config.plan.seed).map_err(plan_err)?;
            let out = report::PlanOutput {
                report: &r,
                monte_carlo: &mc,
                seed: config.plan.seed,
            };
            write(&common.out, "plan.json", &report::to_json(&out))?;
            say(common.quiet, &report::plan_table(&r, &mc));
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
