//! Orientational potentials invariant under site and molecular rotations of T.
//!
//! A rank-ℓ term is `f_ℓ(R) = Σ_{μν} v_μ v_ν* D^{ℓ*}_{μν}(R) = (v† D^ℓ(R) v)*`
//! where v spans the T-invariant subspace of the rank-ℓ representation, so
//! f_ℓ(gRh) = f_ℓ(R) for g, h ∈ T. f_ℓ(identity) = 1 and |f_ℓ| ≤ 1.
//!
//! Ranks with a single invariant and a real Hamiltonian are supported: 3 and 4
//! (and 7). Rank 3 is the lowest one; f_3 is +1 when molecule and site frames
//! coincide (mod T) and −1 after a 90° turn about a cube axis.
//!
//! A [`Potential`] is `V = Σ c_ℓ f_ℓ`. The rotor model requires the
//! coefficients scaled so that max V − min V = 1 over all orientations.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_traits::Float;

use super::wigner::{wigner_d, wigner_d_euler};
use super::RotorError;
use crate::fitting::simplex::{nelder_mead, SimplexOptions};
use crate::geometry::{euler_zyz, octahedral_rotations, tetrahedral_rotations};
use crate::C64;

/// Tolerance on |max V − min V − 1| for a normalized potential.
pub const NORMALIZATION_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTerm {
    pub rank: i32,
    pub coefficient: f64,
    /// T-invariant unit vector of the rank-`rank` representation, components μ = −ℓ..ℓ.
    pub invariant: Vec<C64>,
}

impl PotentialTerm {
    /// v_μ as a function of μ (0 outside |μ| ≤ ℓ).
    pub fn v(&self, mu: i32) -> C64 {
        if mu.abs() > self.rank {
            C64::new(0.0, 0.0)
        } else {
            self.invariant[(mu + self.rank) as usize]
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    pub terms: Vec<PotentialTerm>,
    pub min: f64,
    pub max: f64,
}

/// Unit vector spanning the T-invariant subspace of rank ℓ.
pub fn invariant_vector(rank: i32) -> Result<Vec<C64>, RotorError> {
    if rank < 1 {
        return Err(RotorError::UnsupportedRank(rank));
    }
    let n = (2 * rank + 1) as usize;
    let mut proj = DMatrix::<C64>::zeros(n, n);
    for (g, _) in tetrahedral_rotations() {
        proj += wigner_d(rank, &g);
    }
    proj /= C64::new(12.0, 0.0);
    let trace = proj.trace();
    if (trace.re - 1.0).abs() > 1e-9 {
        return Err(RotorError::UnsupportedRank(rank));
    }
    let col = (0..n)
        .max_by(|&a, &b| proj.column(a).norm().total_cmp(&proj.column(b).norm()))
        .unwrap_or(0);
    let mut v: Vec<C64> = proj.column(col).iter().cloned().collect();
    let norm = Float::sqrt(v.iter().map(|c| c.norm_sqr()).sum::<f64>());
    // fix the global phase: largest component real and positive
    let big = v
        .iter()
        .cloned()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = big.conj() / big.norm();
    for c in v.iter_mut() {
        *c = *c * phase / norm;
        if c.norm() < 1e-14 {
            *c = C64::new(0.0, 0.0);
        }
    }
    // products v_μ v_ν* must be real for a real symmetric Hamiltonian
    for a in &v {
        for b in &v {
            if (*a * b.conj()).im.abs() > 1e-12 {
                return Err(RotorError::UnsupportedRank(rank));
            }
        }
    }
    Ok(v)
}

fn term_value(term: &PotentialTerm, d: &DMatrix<C64>) -> f64 {
    let n = term.invariant.len();
    let mut s = C64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            s += term.invariant[a].conj() * d[(a, b)] * term.invariant[b];
        }
    }
    s.re
}

impl Potential {
    /// Potential with the coefficients exactly as given.
    pub fn raw(terms: &[(i32, f64)]) -> Result<Potential, RotorError> {
        if terms.is_empty() {
            return Err(RotorError::EmptyPotential);
        }
        let terms = terms
            .iter()
            .map(|&(rank, coefficient)| {
                Ok(PotentialTerm {
                    rank,
                    coefficient,
                    invariant: invariant_vector(rank)?,
                })
            })
            .collect::<Result<Vec<_>, RotorError>>()?;
        let mut p = Potential {
            terms,
            min: 0.0,
            max: 0.0,
        };
        let (lo, hi) = p.find_range();
        p.min = lo;
        p.max = hi;
        Ok(p)
    }

    /// Potential rescaled to unit range.
    pub fn normalized(terms: &[(i32, f64)]) -> Result<Potential, RotorError> {
        let mut p = Potential::raw(terms)?;
        let range = p.range();
        if range < 1e-12 {
            return Err(RotorError::FlatPotential);
        }
        for t in p.terms.iter_mut() {
            t.coefficient /= range;
        }
        p.min /= range;
        p.max /= range;
        Ok(p)
    }

    /// The default potential: the rank-3 invariant with minima at the aligned orientation.
    pub fn default_rank3() -> Potential {
        Potential::normalized(&[(3, -1.0)]).expect("rank 3 is supported")
    }

    pub fn range(&self) -> f64 {
        self.max - self.min
    }

    pub fn is_normalized(&self) -> bool {
        (self.range() - 1.0).abs() <= NORMALIZATION_TOL
    }

    pub fn max_rank(&self) -> i32 {
        self.terms.iter().map(|t| t.rank).max().unwrap_or(0)
    }

    pub fn value_euler(&self, alpha: f64, beta: f64, gamma: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient * term_value(t, &wigner_d_euler(t.rank, alpha, beta, gamma)))
            .sum()
    }

    pub fn value(&self, r: &crate::geometry::Mat3) -> f64 {
        let (a, b, g) = euler_zyz(r);
        self.value_euler(a, b, g)
    }

    /// (min V, max V) by a dense Euler-angle scan seeded with the cube
    /// rotations, refined with a simplex search from the best points.
    fn find_range(&self) -> (f64, f64) {
        const N: usize = 24;
        let two_pi = 2.0 * core::f64::consts::PI;
        let mut samples: Vec<([f64; 3], f64)> = Vec::with_capacity(N * N * (N + 1) + 24);
        for r in octahedral_rotations() {
            let (a, b, g) = euler_zyz(&r);
            samples.push(([a, b, g], self.value(&r)));
        }
        for i in 0..N {
            for j in 0..=N {
                for k in 0..N {
                    let e = [
                        two_pi * i as f64 / N as f64,
                        core::f64::consts::PI * j as f64 / N as f64,
                        two_pi * k as f64 / N as f64,
                    ];
                    samples.push((e, self.value_euler(e[0], e[1], e[2])));
                }
            }
        }
        let opts = SimplexOptions {
            max_iterations: 400,
            ftol_rel: 1e-14,
            ftol_abs: 1e-15,
            ..Default::default()
        };
        let refine = |sign: f64| -> f64 {
            let mut idx: Vec<usize> = (0..samples.len()).collect();
            idx.sort_by(|&a, &b| (sign * samples[a].1).total_cmp(&(sign * samples[b].1)));
            let mut best = sign * samples[idx[0]].1;
            for &i in idx.iter().take(4) {
                let r = nelder_mead(
                    |x| sign * self.value_euler(x[0], x[1], x[2]),
                    &samples[i].0,
                    &[0.05, 0.05, 0.05],
                    &opts,
                );
                best = best.min(r.fval);
            }
            sign * best
        };
        let lo = refine(1.0);
        let hi = refine(-1.0);
        (lo, hi)
    }
}
