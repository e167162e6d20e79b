//! Bounded Nelder–Mead simplex minimizer.
//!
//! Box bounds are enforced by clamping every trial point, so the search never
//! evaluates the objective outside the box.

use alloc::vec;
use alloc::vec::Vec;
use num_traits::Float;

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexOptions {
    pub max_iterations: usize,
    /// Stop when (f_worst − f_best) ≤ ftol_rel·|f_best| + ftol_abs.
    pub ftol_rel: f64,
    pub ftol_abs: f64,
    pub lower: Option<Vec<f64>>,
    pub upper: Option<Vec<f64>>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            max_iterations: 2000,
            ftol_rel: 1e-10,
            ftol_abs: 1e-14,
            lower: None,
            upper: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fval: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best objective after each iteration.
    pub best_history: Vec<f64>,
}

fn clamp(x: &mut [f64], opts: &SimplexOptions) {
    if let Some(lo) = &opts.lower {
        for (v, l) in x.iter_mut().zip(lo) {
            *v = v.max(*l);
        }
    }
    if let Some(hi) = &opts.upper {
        for (v, h) in x.iter_mut().zip(hi) {
            *v = v.min(*h);
        }
    }
}

/// Minimizes `f` from `x0` with initial simplex edge lengths `step`.
/// Non-finite objective values are treated as +∞.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut base = x0.to_vec();
    clamp(&mut base, opts);
    pts.push(base.clone());
    for i in 0..n {
        let mut p = base.clone();
        p[i] += step[i];
        clamp(&mut p, opts);
        if (p[i] - base[i]).abs() < 0.5 * step[i].abs() {
            // hit the upper bound: step the other way
            p[i] = base[i] - step[i];
            clamp(&mut p, opts);
        }
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| eval(p, &mut evaluations)).collect();
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    while iterations < opts.max_iterations {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        let (best, worst) = (vals[0], vals[n]);
        if (worst - best).abs() <= opts.ftol_rel * best.abs() + opts.ftol_abs {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            let mut x: Vec<f64> = centroid
                .iter()
                .zip(&pts[n])
                .map(|(c, w)| c + t * (c - w))
                .collect();
            clamp(&mut x, opts);
            x
        };
        let xr = along(alpha);
        let fr = eval(&xr, &mut evaluations);
        if fr < vals[0] {
            let xe = along(gamma);
            let fe = eval(&xe, &mut evaluations);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            let (xc, fc) = if fr < vals[n] {
                let x = along(rho * alpha);
                let v = eval(&x, &mut evaluations);
                (x, v)
            } else {
                let x = along(-rho);
                let v = eval(&x, &mut evaluations);
                (x, v)
            };
            if fc < vals[n].min(fr) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                let b = pts[0].clone();
                for i in 1..=n {
                    let mut x: Vec<f64> = b.iter().zip(&pts[i]).map(|(b, p)| b + sigma * (p - b)).collect();
                    clamp(&mut x, opts);
                    vals[i] = eval(&x, &mut evaluations);
                    pts[i] = x;
                }
            }
        }
        history.push(vals.iter().cloned().fold(f64::INFINITY, Float::min));
    }
    let best = (0..=n)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)))
        .unwrap_or(0);
    SimplexResult {
        x: pts[best].clone(),
        fval: vals[best],
        iterations,
        evaluations,
        converged,
        best_history: history,
    }
}
