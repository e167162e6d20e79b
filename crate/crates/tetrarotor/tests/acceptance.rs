//! Acceptance checks. Each criterion prints one PASS/FAIL line; the
//! process exits nonzero if any fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use tetrarotor_core::fitting::{fit_line_positions, FitParam, FitReport, FitSpec, FreeParam, ModelTemplate, Peak, PeakList};
use tetrarotor_core::qubitplan::{monte_carlo_nn_mean, CrystalSpec};
use tetrarotor_core::rotor::{diagonalize, find_level, EnergyLevel, Potential, RotorModel, RotorSolver, DEFAULT_CLUSTER_TOL};
use tetrarotor_core::spectrum::{vibration_orientation_lines, PopulationModel, SpectrumConfig};
use tetrarotor_core::symmetry::{character_table, correlate, raman_active_count, spin_decomposition, GroupId, IrrepLabel, SpinLabel};
use tetrarotor_core::units::cm1_to_ghz;

type Outcome = (bool, String);
type M3 = [[i32; 3]; 3];

struct Fitted {
    template: ModelTemplate,
    report: FitReport,
    seconds: f64,
}

fn peaks() -> PeakList {
    PeakList::new(vec![
        Peak::new(3206.0, Some("(L1)1->(L1)1*")),
        Peak::new(3217.0, Some("(A1)1->(L1)1*")),
        Peak::new(3230.0, Some("(L1)1->(L1)2*")),
        Peak::new(3235.0, Some("(L1)1->(E3)1*")),
    ])
    .unwrap()
}

fn fit_spec() -> FitSpec {
    FitSpec::new(vec![
        FreeParam::new(FitParam::B, 5.9),
        FreeParam::new(FitParam::Beta, 1.0),
        FreeParam::new(FitParam::Nu0, 3206.0),
        FreeParam::new(FitParam::ExtraOffsets, 0.0),
    ])
}

fn run_fit() -> Fitted {
    let base = ModelTemplate::default();
    let spec = fit_spec();
    let t0 = Instant::now();
    let report = fit_line_positions(&peaks(), &spec, &base).expect("fit runs");
    let seconds = t0.elapsed().as_secs_f64();
    let x: Vec<f64> = report.values.iter().map(|v| v.value).collect();
    Fitted {
        template: base.with_values(&spec.free, &x),
        report,
        seconds,
    }
}

fn levels_of(t: &ModelTemplate) -> Vec<EnergyLevel> {
    RotorSolver::new(&t.potential, t.jmax)
        .unwrap()
        .levels(t.b, t.beta, t.cluster_tol)
        .unwrap()
}

fn gap(levels: &[EnergyLevel]) -> f64 {
    find_level(levels, "L1", 1).unwrap().energy - find_level(levels, "A1", 1).unwrap().energy
}

fn c1_band_positions(f: &Fitted) -> Outcome {
    let wla = gap(&levels_of(&f.template));
    let res = f.report.max_abs_residual();
    let ok = f.report.converged && res <= 2.0 && (wla - 11.0).abs() <= 1.0 && f.seconds <= 60.0 && f.template.jmax == 10;
    let detail = format!(
        "max residual {res:.3e} cm-1, w_LA {wla:.4} cm-1 (B {:.4}, beta {:.4}), {:.1} s at Jmax {}",
        f.template.b, f.template.beta, f.seconds, f.template.jmax
    );
    (ok, detail)
}

fn c2_free_rotor() -> Outcome {
    let b = 5.9;
    let t0 = Instant::now();
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut check = |energies: &[(f64, usize)], jmax: i32| {
        for j in 0..=jmax - 2 {
            let exact = b * f64::from(j * (j + 1));
            let scale = exact.max(b);
            let near: Vec<&(f64, usize)> = energies.iter().filter(|(e, _)| (e - exact).abs() <= 1e-6 * scale).collect();
            let count: usize = near.iter().map(|(_, d)| d).sum();
            for (e, _) in &near {
                worst = worst.max((e - exact).abs() / scale);
            }
            if count != ((2 * j + 1) * (2 * j + 1)) as usize {
                ok = false;
            }
        }
    };
    let blocked: Vec<(f64, usize)> = RotorSolver::new(&Potential::default_rank3(), 10)
        .unwrap()
        .levels(b, 0.0, DEFAULT_CLUSTER_TOL)
        .unwrap()
        .iter()
        .map(|l| (l.energy, l.degeneracy))
        .collect();
    check(&blocked, 10);
    let dense: Vec<(f64, usize)> = diagonalize(&RotorModel::new(b, 0.0, 8).unwrap())
        .unwrap()
        .energies
        .iter()
        .map(|e| (*e, 1))
        .collect();
    check(&dense, 8);
    ok &= worst <= 1e-9;
    let detail = format!(
        "blocked Jmax 10 and dense Jmax 8: (2J+1)^2 multiplets, worst rel. error {worst:.1e}, {:.1} s",
        t0.elapsed().as_secs_f64()
    );
    (ok, detail)
}

fn c3_orientation_gap(f: &Fitted) -> Outcome {
    let g = gap(&levels_of(&f.template));
    ((g - 12.0).abs() <= 2.0, format!("(L1)1 - (A1)1 = {g:.4} cm-1 vs 12"))
}

fn c4_dominance(f: &Fitted) -> Outcome {
    let lv = levels_of(&f.template);
    let main = "(A1)1->(L1)1*";
    let thermal = vibration_orientation_lines(&lv, &f.template.band, &PopulationModel::thermal(7.0), None).unwrap();
    let frozen = vibration_orientation_lines(&lv, &f.template.band, &PopulationModel::spin_frozen(7.0), None).unwrap();
    let ratio = |lines: &[tetrarotor_core::spectrum::Line], pick: &dyn Fn(&tetrarotor_core::spectrum::Line) -> bool| {
        let m = lines.iter().find(|l| l.label() == main).unwrap().intensity;
        lines
            .iter()
            .filter(|l| l.label() != main && pick(l))
            .map(|l| l.intensity / m)
            .fold(0.0, f64::max)
    };
    let t_max = ratio(&thermal, &|_| true);
    let f_max = ratio(&frozen, &|l| l.lower.level == "(L1)1");
    let detail = format!("7 K thermal: strongest other line {:.2}%; spin-frozen: strongest (L1)1 line {:.1}%", 100.0 * t_max, 100.0 * f_max);
    (t_max < 0.05 && f_max > 0.05, detail)
}

/// 3x3 signed permutation matrices.
fn signed_permutations() -> Vec<M3> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::new();
    for p in perms {
        for s in 0..8 {
            let mut m = [[0; 3]; 3];
            for (row, &col) in p.iter().enumerate() {
                m[row][col] = if s >> row & 1 == 1 { -1 } else { 1 };
            }
            out.push(m);
        }
    }
    out
}

const VERTICES: [[i32; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];

fn apply(m: &M3, v: &[i32; 3]) -> [i32; 3] {
    let mut out = [0; 3];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..3).map(|k| m[i][k] * v[k]).sum();
    }
    out
}

/// Vertex permutation of a symmetry of the tetrahedron, or None.
fn vertex_permutation(m: &M3) -> Option<[usize; 4]> {
    let mut p = [0; 4];
    for (i, v) in VERTICES.iter().enumerate() {
        p[i] = VERTICES.iter().position(|w| *w == apply(m, v))?;
    }
    Some(p)
}

fn det(m: &M3) -> i32 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn trace(m: &M3) -> i32 {
    m[0][0] + m[1][1] + m[2][2]
}

fn square(m: &M3) -> M3 {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| m[i][k] * m[k][j]).sum();
        }
    }
    out
}

fn td_elements() -> Vec<M3> {
    signed_permutations().into_iter().filter(|m| vertex_permutation(m).is_some()).collect()
}

/// Characters of A1, A2, E, F1, F2 on one element, built from the matrix.
fn td_characters(m: &M3) -> [f64; 5] {
    let (d, t) = (f64::from(det(m)), f64::from(trace(m)));
    let sym2 = (t * t + f64::from(trace(&square(m)))) / 2.0;
    [1.0, d, sym2 - 1.0 - t, d * t, t]
}

/// Characters of A1, A2, B1, B2, E for elements fixing the z axis.
fn d2d_characters(m: &M3) -> [f64; 5] {
    let (d, zz) = (f64::from(det(m)), f64::from(m[2][2]));
    [1.0, d * zz, d, zz, f64::from(m[0][0] + m[1][1])]
}

fn polarizability(m: &M3) -> f64 {
    let t = f64::from(trace(m));
    (t * t + f64::from(trace(&square(m)))) / 2.0
}

fn project(elements: &[M3], chars: impl Fn(&M3) -> f64, row: impl Fn(&M3) -> f64) -> usize {
    let s: f64 = elements.iter().map(|m| chars(m) * row(m)).sum();
    (s / elements.len() as f64).round() as usize
}

fn c5_spin() -> Outcome {
    let rotations: Vec<M3> = td_elements().into_iter().filter(|m| det(m) == 1).collect();
    // character of each rotation on the 16 product states
    let chi = |m: &M3| {
        let p = vertex_permutation(m).unwrap();
        (0..16u32)
            .filter(|&s| (0..4).all(|i| (s >> i & 1) == (s >> p[i] & 1)))
            .count() as f64
    };
    // real rows of T by trace: E 3, C3 0, C2 -1
    let a = project(&rotations, chi, |_| 1.0);
    let e_real = project(&rotations, chi, |m| match trace(m) {
        3 => 2.0,
        0 => -1.0,
        _ => 2.0,
    });
    let f = project(&rotations, chi, |m| match trace(m) {
        3 => 3.0,
        0 => 0.0,
        _ => -1.0,
    });
    // each conjugate pair contributes 2 to the real-form projection and 2 states
    let oracle = [(SpinLabel::A, a), (SpinLabel::E, e_real), (SpinLabel::F, 3 * f)];
    let lib = spin_decomposition();
    let mut ok = oracle.iter().map(|x| x.1).sum::<usize>() == 16 && rotations.len() == 12;
    for (label, n) in oracle {
        ok &= lib.iter().find(|s| s.label == label).map(|s| s.total_count) == Some(n);
    }
    let got: Vec<String> = lib.iter().map(|s| format!("{} {}", s.label.as_str(), s.total_count)).collect();
    (ok && oracle.map(|x| x.1) == [5, 2, 9], format!("{} (oracle {a}/{e_real}/{})", got.join(", "), 3 * f))
}

fn c6_correlation() -> Outcome {
    let td = td_elements();
    let d2d: Vec<M3> = td.iter().copied().filter(|m| m[2][2] != 0).collect();
    let td_names = ["A1", "A2", "E", "F1", "F2"];
    let d2d_names = ["A1", "A2", "B1", "B2", "E"];
    let d2d_dims = [1, 1, 1, 1, 2];
    let table = character_table("T_d").unwrap();
    let mut ok = td.len() == 24 && d2d.len() == 8;
    let mut parts = Vec::new();
    for (i, name) in td_names.iter().enumerate() {
        let label = table.label(name).unwrap();
        let lib: BTreeMap<String, usize> = correlate(&label).unwrap().into_iter().map(|(l, n)| (l.label, n)).collect();
        let mut dim = 0;
        for (k, target) in d2d_names.iter().enumerate() {
            let n = project(&d2d, |m| td_characters(m)[i], |m| d2d_characters(m)[k]);
            ok &= lib.get(*target).copied().unwrap_or(0) == n;
            dim += n * d2d_dims[k];
        }
        ok &= dim == label.dimension;
        let txt: Vec<String> = lib.iter().map(|(l, n)| if *n == 1 { l.clone() } else { format!("{n}{l}") }).collect();
        parts.push(format!("{name}->{}", txt.join("+")));
    }
    // Raman counting against the symmetric square of the vector representation
    let counting = |group: GroupId, elements: &[M3], names: &[&str], chars: &dyn Fn(&M3) -> [f64; 5]| {
        let t = character_table(group.name()).unwrap();
        let active: Vec<bool> = (0..5).map(|k| project(elements, polarizability, |m| chars(m)[k]) > 0).collect();
        let labels: Vec<IrrepLabel> = names.iter().map(|n| t.label(n).unwrap()).collect();
        let mut agree = true;
        for code in 0..3usize.pow(5) {
            let mut content = Vec::new();
            let mut want = 0;
            let mut c = code;
            for k in 0..5 {
                let n = c % 3;
                c /= 3;
                if n > 0 {
                    content.push((labels[k].clone(), n));
                    if active[k] {
                        want += n;
                    }
                }
            }
            agree &= raman_active_count(&content, group).unwrap() == want;
        }
        agree
    };
    ok &= counting(GroupId::Td, &td, &td_names, &td_characters);
    ok &= counting(GroupId::D2d, &d2d, &d2d_names, &d2d_characters);
    (ok, format!("{}; Raman counts agree over 243 contents each in T_d and D_2d", parts.join(", ")))
}

fn c7_units() -> Outcome {
    let a = cm1_to_ghz(11.0);
    let cfg = SpectrumConfig { fwhm: 1.5, ..ModelTemplate::default().synthesis };
    let b = cfg.fwhm_ghz();
    let ok = (a - 329.77).abs() <= 0.01 && (b - 44.97).abs() <= 0.01 && (a - 11.0 * 29.9792458).abs() < 1e-9;
    (ok, format!("11 cm-1 = {a:.4} GHz, 1.5 cm-1 = {b:.4} GHz"))
}

fn c8_dilution() -> Outcome {
    let spec = CrystalSpec::new(1.0, 0.01).unwrap();
    let t0 = Instant::now();
    let mc = monte_carlo_nn_mean(&spec, 100_000, 0).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let closed = 0.55396 * spec.a * spec.c.powf(-1.0 / 3.0);
    let rel = (mc.mean - closed).abs() / closed;
    let ok = rel <= 0.05 && mc.samples >= 90_000 && secs <= 10.0;
    (ok, format!("MC {:.5} a vs {closed:.5} a ({:.2}%), {} sites, {secs:.2} s", mc.mean, 100.0 * rel, mc.samples))
}

fn c9_convergence(f: &Fitted) -> Outcome {
    let p = Potential::default_rank3();
    let small = RotorSolver::new(&p, 10).unwrap();
    let large = RotorSolver::new(&p, 12).unwrap();
    let mut worst = 0.0f64;
    let mut compared = 0;
    let mut ok = true;
    for beta in [1.0, 5.0] {
        let a = small.levels(5.9, beta, DEFAULT_CLUSTER_TOL).unwrap();
        let b = large.levels(5.9, beta, DEFAULT_CLUSTER_TOL).unwrap();
        for l in a.iter().filter(|l| l.energy < 100.0) {
            match find_level(&b, &l.rovib_label.label, l.ordinal) {
                Ok(m) => {
                    worst = worst.max((m.energy - l.energy).abs());
                    compared += 1;
                }
                Err(_) => ok = false,
            }
        }
    }
    ok &= worst < 0.01;

    let again = fit_line_positions(&peaks(), &fit_spec(), &ModelTemplate::default()).unwrap();
    let fit_same = format!("{:?}", again) == format!("{:?}", f.report);
    let spec = CrystalSpec::new(1.0, 0.01).unwrap();
    let mc_same = monte_carlo_nn_mean(&spec, 20_000, 7).unwrap() == monte_carlo_nn_mean(&spec, 20_000, 7).unwrap();
    let files_same = cli_outputs_identical();
    ok &= fit_same && mc_same && files_same;
    let detail = format!(
        "Jmax 10->12: worst shift {worst:.1e} cm-1 over {compared} levels; repeat fit {}, MC {}, CLI files {}",
        same(fit_same),
        same(mc_same),
        same(files_same)
    );
    (ok, detail)
}

fn same(b: bool) -> &'static str {
    if b {
        "identical"
    } else {
        "DIFFERENT"
    }
}

fn cli_outputs_identical() -> bool {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml");
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let out = d.path().to_str().unwrap();
        let sticks = d.path().join("sticks.csv");
        for args in [
            vec!["spectrum", "-c", config.to_str().unwrap(), "-o", out, "-q", "--svg", "--raman"],
            vec!["levels", "-c", config.to_str().unwrap(), "-o", out, "-q"],
            vec!["plan", "-c", config.to_str().unwrap(), "-o", out, "-q", "--lines", sticks.to_str().unwrap()],
        ] {
            let status = Command::new(env!("CARGO_BIN_EXE_tetrarotor")).args(&args).output().unwrap().status;
            if !status.success() {
                return false;
            }
        }
    }
    ["sticks.csv", "spectrum.csv", "spectrum.json", "spectrum.svg", "raman.csv", "levels.csv", "levels.json", "plan.json"]
        .iter()
        .all(|f| std::fs::read(dirs[0].path().join(f)).ok() == std::fs::read(dirs[1].path().join(f)).ok())
}

fn c10_trend() -> Outcome {
    let solver = RotorSolver::new(&Potential::default_rank3(), 10).unwrap();
    let w = |beta: f64| gap(&solver.levels(5.9, beta, DEFAULT_CLUSTER_TOL).unwrap());
    let (w1, w5) = (w(1.0), w(5.0));
    (w5 < w1, format!("B 5.9: w_LA(beta 1) {w1:.4} cm-1 > w_LA(beta 5) {w5:.4} cm-1"))
}

fn main() {
    let f = run_fit();
    let results = [
        ("band-position reproduction", c1_band_positions(&f)),
        ("free-rotor oracle", c2_free_rotor()),
        ("orientation-gap cross-check", c3_orientation_gap(&f)),
        ("intensity dominance", c4_dominance(&f)),
        ("spin decomposition", c5_spin()),
        ("descent correlation", c6_correlation()),
        ("unit conversions", c7_units()),
        ("dilution geometry", c8_dilution()),
        ("convergence and determinism", c9_convergence(&f)),
        ("librator trend", c10_trend()),
    ];
    let mut failed = 0;
    for (i, (name, (ok, detail))) in results.iter().enumerate() {
        println!("{} {:>2} {name}: {detail}", if *ok { "PASS" } else { "FAIL" }, i + 1);
        failed += usize::from(!ok);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
