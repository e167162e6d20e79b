//! Matrix elements of the rotor Hamiltonian.
//!
//! `⟨J'm'k'| D^{ℓ*}_{μν} |Jmk⟩ = √((2J+1)(2J'+1)) (−1)^{m'−k'}
//!     (J' ℓ J; −m' μ m) (J' ℓ J; −k' ν k)`
//!
//! so each (J', J) block of a rank-ℓ term factorizes into a site matrix over
//! (m', m) times a molecular matrix over (k', k).

use nalgebra::DMatrix;
use num_traits::Float;

use super::basis::{basis_size, j_offset};
use super::potential::{Potential, PotentialTerm};
use super::wigner::wigner3j;
use super::{RotorError, RotorModel};
use crate::C64;

fn parity(n: i32) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Site and molecular factors of the (j1, j2) block of one potential term,
/// without the coefficient and √((2j1+1)(2j2+1)). Rows index m1 (k1), columns m2 (k2).
pub(crate) fn coupling_factors(term: &PotentialTerm, j1: i32, j2: i32) -> (DMatrix<C64>, DMatrix<C64>) {
    let l = term.rank;
    let (d1, d2) = ((2 * j1 + 1) as usize, (2 * j2 + 1) as usize);
    let site = DMatrix::from_fn(d1, d2, |r, c| {
        let (m1, m2) = (r as i32 - j1, c as i32 - j2);
        let w = wigner3j(j1, l, j2, -m1, m1 - m2, m2);
        term.v(m1 - m2) * (parity(m1) * w)
    });
    let mol = DMatrix::from_fn(d1, d2, |r, c| {
        let (k1, k2) = (r as i32 - j1, c as i32 - j2);
        let w = wigner3j(j1, l, j2, -k1, k1 - k2, k2);
        term.v(k1 - k2).conj() * (parity(k1) * w)
    });
    (site, mol)
}

/// True if a rank-`l` term can couple j1 and j2.
pub(crate) fn couples(l: i32, j1: i32, j2: i32) -> bool {
    (j1 - j2).abs() <= l && l <= j1 + j2
}

/// The potential V over the basis with J ≤ jmax (real symmetric).
pub fn potential_matrix(potential: &Potential, jmax: i32) -> DMatrix<f64> {
    let n = basis_size(jmax);
    let mut v = DMatrix::<f64>::zeros(n, n);
    for term in &potential.terms {
        for j1 in 0..=jmax {
            for j2 in 0..=jmax {
                if !couples(term.rank, j1, j2) {
                    continue;
                }
                let (site, mol) = coupling_factors(term, j1, j2);
                let scale = term.coefficient * Float::sqrt(f64::from((2 * j1 + 1) * (2 * j2 + 1)));
                let (o1, o2) = (j_offset(j1), j_offset(j2));
                let (d1, d2) = ((2 * j1 + 1) as usize, (2 * j2 + 1) as usize);
                for m1 in 0..d1 {
                    for m2 in 0..d2 {
                        let a = site[(m1, m2)];
                        if a.norm() == 0.0 {
                            continue;
                        }
                        for k1 in 0..d1 {
                            for k2 in 0..d2 {
                                let x = a * mol[(k1, k2)];
                                v[(o1 + m1 * d1 + k1, o2 + m2 * d2 + k2)] += scale * x.re;
                            }
                        }
                    }
                }
            }
        }
    }
    v
}

/// H = B J(J+1) + β B V, over the basis with J ≤ model.jmax.
pub fn hamiltonian_matrix(model: &RotorModel) -> Result<DMatrix<f64>, RotorError> {
    model.validate()?;
    let mut h = potential_matrix(&model.potential, model.jmax);
    h *= model.beta * model.b;
    for j in 0..=model.jmax {
        let o = j_offset(j);
        let d = ((2 * j + 1) * (2 * j + 1)) as usize;
        for i in o..o + d {
            h[(i, i)] += model.b * f64::from(j * (j + 1));
        }
    }
    Ok(h)
}
