use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tetrarotor"))
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn default_config() -> PathBuf {
    repo().join("configs/default.toml")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn valid(schema: &str, file: &Path) {
    let schema_doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(repo().join("schemas").join(schema)).unwrap()).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema_doc).unwrap_or_else(|e| panic!("{e}"));
    let msgs: Vec<String> = match compiled.validate(&doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{} fails {schema}: {msgs:?}", file.display());
}

#[test]
fn levels_csv_header_and_schema() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["levels", "-c", s(&default_config()), "-o", s(dir.path()), "-q"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("levels.csv")).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("energy_cm1,degeneracy,label,spin,ordinal"));
    assert_eq!(rows.next(), Some("0,1,A1,A,1"));
    assert!(rows.next().unwrap().ends_with(",9,L1,F,1"));
    valid("levels.schema.json", &dir.path().join("levels.json"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = run(&["spectrum", "-c", s(&default_config()), "-o", s(d.path()), "-q", "--svg", "--raman"]);
        assert_eq!(o.status.code(), Some(0));
        let o = run(&["plan", "-c", s(&default_config()), "-o", s(d.path()), "-q", "--seed", "11",
            "--lines", s(&d.path().join("sticks.csv")), "--set", "plan.mc_samples=20000"]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["sticks.csv", "spectrum.csv", "spectrum.json", "spectrum.svg", "raman.csv", "plan.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }
    valid("spectrum.schema.json", &a.path().join("spectrum.json"));
    valid("plan.schema.json", &a.path().join("plan.json"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.path().join("spectrum.json")).unwrap()).unwrap();
    assert!((json["fwhm_ghz"].as_f64().unwrap() - 44.97).abs() < 0.01);
}

#[test]
fn clipped_line_is_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["spectrum", "-c", s(&default_config()), "-o", s(dir.path()), "-q",
        "--set", "synthesis.stop=3225", "--set", "band.lattice_freq=0"]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("warning: line (L1)1->(E3)1*"), "{err}");
}

#[test]
fn usage_and_validation_errors_exit_1() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let o = run(&["levels", "-c", s(&default_config()), "-o", s(dir.path()), "--set", "model.beta=-1",
        "--set", "population.T=0"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("[model] beta") && err.contains("[population] T"), "{err}");
    assert!(!dir.path().join("levels.csv").exists());
}

#[test]
fn fit_reports_and_non_convergence_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let peaks = repo().join("configs/peaks.csv");
    let o = run(&["fit", "-c", s(&default_config()), "-o", s(dir.path()), "-q", "--peaks", s(&peaks),
        "--set", "model.Jmax=6", "--set", "fit.starts=2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    valid("fit.schema.json", &dir.path().join("fit.json"));

    let o = run(&["fit", "-c", s(&default_config()), "-o", s(dir.path()), "-q", "--peaks", s(&peaks),
        "--set", "model.Jmax=6", "--set", "fit.starts=1", "--set", "fit.max_iterations=3"]);
    assert_eq!(o.status.code(), Some(2));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    assert_eq!(json["converged"], false);

    let two = dir.path().join("two.csv");
    std::fs::write(&two, "frequency_cm1,intensity,label\n3206,,\n3217,,\n").unwrap();
    let o = run(&["fit", "-c", s(&default_config()), "-o", s(dir.path()), "-q", "--peaks", s(&two)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("under-determined"));
}

#[test]
fn symmetry_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["symmetry", "-o", s(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("F2   -> B2 + E"));
    valid("symmetry.schema.json", &dir.path().join("symmetry.json"));
}
