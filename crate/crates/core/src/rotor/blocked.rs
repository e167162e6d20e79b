//! Symmetry-blocked solver.
//!
//! For every J and every irrep Γ of T, the range of the projector
//! `P^Γ_11 = (d_Γ/12) Σ_g Γ_11(g)* D^J(g)` holds the first partner function
//! of each copy of Γ on the site index (with D^J(h)* on the molecular index).
//! Products of these bases span one row of each T×T̄ irrep, so the
//! Hamiltonian is diagonal in blocks labelled (Γ_site, Γ_mol), and each
//! eigenvalue of block (Γs, Γm) has multiplicity dim Γs · dim Γm.
//! Conjugate blocks have identical spectra; one block per real-form label
//! is solved.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_traits::Float;

use super::hamiltonian::{couples, coupling_factors};
use super::levels::{assemble_levels, EnergyLevel};
use super::potential::Potential;
use super::wigner::wigner_d;
use super::{RotorError, RotorModel};
use crate::geometry::{tetrahedral_rotations, TClass};
use crate::symmetry::{RovibLabel, TIrrep, ROVIB_DICTIONARY};
use crate::C64;

/// (1,1) matrix element of irrep Γ of T at rotation `r` of class `c`.
fn irrep_11(t: TIrrep, r: &crate::geometry::Mat3, c: TClass) -> C64 {
    match t {
        TIrrep::F => C64::new(r[0][0], 0.0),
        _ => t.characters()[c.index()],
    }
}

/// Orthonormal basis (as columns) of the range of `p`.
fn range_basis(p: &DMatrix<C64>) -> DMatrix<C64> {
    let n = p.nrows();
    let mut cols: Vec<nalgebra::DVector<C64>> = Vec::new();
    for c in 0..n {
        let mut v = p.column(c).into_owned();
        for _ in 0..2 {
            for q in &cols {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            cols.push(v / C64::new(norm, 0.0));
        }
    }
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

fn projected_basis(j: i32, t: TIrrep, molecular: bool) -> DMatrix<C64> {
    let n = (2 * j + 1) as usize;
    let mut p = DMatrix::<C64>::zeros(n, n);
    for (r, c) in tetrahedral_rotations() {
        let d = wigner_d(j, &r);
        let d = if molecular { d.map(|z| z.conj()) } else { d };
        p += d * irrep_11(t, &r, c).conj();
    }
    p *= C64::new(t.dimension() as f64 / 12.0, 0.0);
    range_basis(&p)
}

/// One symmetry block: its label, the J of every basis function, and the
/// β-independent potential matrix.
#[derive(Clone, Debug)]
pub struct SymmetryBlock {
    pub label: &'static RovibLabel,
    pub site: TIrrep,
    pub mol: TIrrep,
    pub j_of: Vec<i32>,
    pub potential: DMatrix<C64>,
    /// Real copy of `potential` when its imaginary part vanishes.
    pub real_potential: Option<DMatrix<f64>>,
}

impl SymmetryBlock {
    pub fn dimension(&self) -> usize {
        self.j_of.len()
    }

    /// Eigenvalues of P² + β V in units of B, ascending.
    pub fn eigenvalues(&self, beta: f64) -> Result<Vec<f64>, RotorError> {
        let n = self.dimension();
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut e: Vec<f64> = match &self.real_potential {
            Some(v) => {
                let mut h = v * beta;
                for (i, &j) in self.j_of.iter().enumerate() {
                    h[(i, i)] += f64::from(j * (j + 1));
                }
                check_finite(h.iter().copied(), n, h.norm())?;
                h.symmetric_eigenvalues().iter().copied().collect()
            }
            None => {
                let mut h = &self.potential * C64::new(beta, 0.0);
                for (i, &j) in self.j_of.iter().enumerate() {
                    h[(i, i)] += C64::new(f64::from(j * (j + 1)), 0.0);
                }
                check_finite(h.iter().flat_map(|z| [z.re, z.im]), n, h.norm())?;
                h.symmetric_eigenvalues().iter().copied().collect()
            }
        };
        e.sort_by(f64::total_cmp);
        Ok(e)
    }
}

fn check_finite(mut values: impl Iterator<Item = f64>, dimension: usize, norm: f64) -> Result<(), RotorError> {
    if values.all(f64::is_finite) {
        Ok(())
    } else {
        Err(RotorError::NonConvergence {
            block: 0,
            dimension,
            norm,
        })
    }
}

/// Precomputed symmetry blocks for one potential and basis truncation.
#[derive(Clone, Debug)]
pub struct RotorSolver {
    pub jmax: i32,
    pub blocks: Vec<SymmetryBlock>,
}

impl RotorSolver {
    pub fn new(potential: &Potential, jmax: i32) -> Result<RotorSolver, RotorError> {
        if !potential.is_normalized() {
            return Err(RotorError::UnnormalizedPotential {
                range: potential.range(),
            });
        }
        let (site_bases, mol_bases) = all_bases(jmax);
        let factors = all_factors(potential, jmax);
        let mut blocks = Vec::new();
        for entry in ROVIB_DICTIONARY.iter() {
            let (site, mol) = entry.components[0];
            blocks.push(build_block(entry, site, mol, jmax, &site_bases, &mol_bases, &factors));
        }
        Ok(RotorSolver { jmax, blocks })
    }

    pub fn for_model(model: &RotorModel) -> Result<RotorSolver, RotorError> {
        RotorSolver::new(&model.potential, model.jmax)
    }

    /// Block for an arbitrary (site, mol) pair, including the conjugate
    /// partners the solver itself skips.
    pub fn block_for(potential: &Potential, jmax: i32, site: TIrrep, mol: TIrrep) -> SymmetryBlock {
        let (site_bases, mol_bases) = all_bases(jmax);
        let factors = all_factors(potential, jmax);
        let entry = crate::symmetry::rovib_label(site, mol);
        build_block(entry, site, mol, jmax, &site_bases, &mol_bases, &factors)
    }

    /// All (ε in units of B, label) pairs, one per level.
    pub fn reduced_eigenvalues(&self, beta: f64) -> Result<Vec<(f64, &'static RovibLabel)>, RotorError> {
        let mut out = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            let e = b.eigenvalues(beta).map_err(|err| match err {
                RotorError::NonConvergence { dimension, norm, .. } => RotorError::NonConvergence {
                    block: i,
                    dimension,
                    norm,
                },
                other => other,
            })?;
            out.extend(e.into_iter().map(|x| (x, b.label)));
        }
        Ok(out)
    }

    /// Labelled levels for rotational constant `b` and field strength `beta`.
    pub fn levels(&self, b: f64, beta: f64, rel_tol: f64) -> Result<Vec<EnergyLevel>, RotorError> {
        let raw = self.reduced_eigenvalues(beta)?;
        let lo = raw.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        let hi = raw.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
        let tol = rel_tol * (hi - lo).max(1.0) * b;
        let scaled = raw.into_iter().map(|(e, l)| (e * b, l)).collect();
        Ok(assemble_levels(scaled, tol))
    }

    pub fn total_states(&self) -> usize {
        self.blocks.iter().map(|b| b.dimension() * b.label.dimension()).sum()
    }
}

type Factor = (i32, i32, f64, DMatrix<C64>, DMatrix<C64>);
type Bases = Vec<Vec<DMatrix<C64>>>;

fn all_bases(jmax: i32) -> (Bases, Bases) {
    let site = (0..=jmax)
        .map(|j| TIrrep::ALL.iter().map(|&t| projected_basis(j, t, false)).collect())
        .collect();
    let mol = (0..=jmax)
        .map(|j| TIrrep::ALL.iter().map(|&t| projected_basis(j, t, true)).collect())
        .collect();
    (site, mol)
}

fn all_factors(potential: &Potential, jmax: i32) -> Vec<Vec<Factor>> {
    potential
        .terms
        .iter()
        .map(|term| {
            let mut per_pair = Vec::new();
            for j1 in 0..=jmax {
                for j2 in 0..=jmax {
                    if couples(term.rank, j1, j2) {
                        let (a, c) = coupling_factors(term, j1, j2);
                        let scale = term.coefficient * Float::sqrt(f64::from((2 * j1 + 1) * (2 * j2 + 1)));
                        per_pair.push((j1, j2, scale, a, c));
                    }
                }
            }
            per_pair
        })
        .collect()
}

fn build_block(
    entry: &'static RovibLabel,
    site: TIrrep,
    mol: TIrrep,
    jmax: i32,
    site_bases: &Bases,
    mol_bases: &Bases,
    factors: &[Vec<Factor>],
) -> SymmetryBlock {
    let mut offsets = Vec::with_capacity(jmax as usize + 2);
    let mut j_of = Vec::new();
    for j in 0..=jmax {
        offsets.push(j_of.len());
        let n = site_bases[j as usize][site.index()].ncols() * mol_bases[j as usize][mol.index()].ncols();
        j_of.extend(core::iter::repeat_n(j, n));
    }
    let n = j_of.len();
    let mut v = DMatrix::<C64>::zeros(n, n);
    for per_pair in factors {
        for (j1, j2, scale, a, c) in per_pair {
            let (s1, s2) = (&site_bases[*j1 as usize][site.index()], &site_bases[*j2 as usize][site.index()]);
            let (m1, m2) = (&mol_bases[*j1 as usize][mol.index()], &mol_bases[*j2 as usize][mol.index()]);
            if s1.ncols() == 0 || s2.ncols() == 0 || m1.ncols() == 0 || m2.ncols() == 0 {
                continue;
            }
            let ap = s1.adjoint() * a * s2;
            let cp = m1.adjoint() * c * m2;
            let (o1, o2) = (offsets[*j1 as usize], offsets[*j2 as usize]);
            let nm2 = m2.ncols();
            let nm1 = m1.ncols();
            for i1 in 0..ap.nrows() {
                for i2 in 0..ap.ncols() {
                    let x = ap[(i1, i2)] * *scale;
                    for k1 in 0..cp.nrows() {
                        for k2 in 0..cp.ncols() {
                            v[(o1 + i1 * nm1 + k1, o2 + i2 * nm2 + k2)] += x * cp[(k1, k2)];
                        }
                    }
                }
            }
        }
    }
    // enforce exact hermiticity against rounding
    let v = (&v + v.adjoint()) * C64::new(0.5, 0.0);
    let real = v.iter().all(|z| z.im.abs() < 1e-13).then(|| v.map(|z| z.re));
    SymmetryBlock {
        label: entry,
        site,
        mol,
        j_of,
        potential: v,
        real_potential: real,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotor::basis::basis_size;
    use crate::rotor::eigen::{classify_levels, diagonalize};
    use crate::rotor::levels::tunneling_frequencies;

    #[test]
    fn block_sizes_cover_the_basis() {
        let p = Potential::default_rank3();
        for jmax in [2, 5, 10] {
            let s = RotorSolver::new(&p, jmax).unwrap();
            assert_eq!(s.total_states(), basis_size(jmax));
        }
    }

    #[test]
    fn conjugate_blocks_share_spectra() {
        let p = Potential::normalized(&[(3, -1.0), (4, 0.3)]).unwrap();
        for (a, b) in [
            ((TIrrep::E1, TIrrep::E2), (TIrrep::E2, TIrrep::E1)),
            ((TIrrep::E1, TIrrep::E1), (TIrrep::E2, TIrrep::E2)),
            ((TIrrep::E1, TIrrep::F), (TIrrep::E2, TIrrep::F)),
            ((TIrrep::F, TIrrep::E1), (TIrrep::F, TIrrep::E2)),
        ] {
            let x = RotorSolver::block_for(&p, 6, a.0, a.1).eigenvalues(2.5).unwrap();
            let y = RotorSolver::block_for(&p, 6, b.0, b.1).eigenvalues(2.5).unwrap();
            assert_eq!(x.len(), y.len());
            for (u, v) in x.iter().zip(&y) {
                assert!((u - v).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn agrees_with_dense_diagonalization() {
        for (beta, terms) in [(1.0, [(3, -1.0)].as_slice()), (5.0, &[(3, -1.0)]), (2.0, &[(3, -1.0), (4, 0.4)])] {
            let p = Potential::normalized(terms).unwrap();
            let m = RotorModel::with_potential(5.9, beta, p.clone(), 6).unwrap();
            let dense = classify_levels(&diagonalize(&m).unwrap(), &m, 1e-10);
            assert!(dense.flagged.is_empty());
            let fast = RotorSolver::new(&p, 6).unwrap().levels(5.9, beta, 1e-10).unwrap();
            assert_eq!(dense.levels.len(), fast.len());
            for (a, b) in dense.levels.iter().zip(&fast) {
                assert_eq!(a.name(), b.name());
                assert!((a.energy - b.energy).abs() < 1e-8, "{} {} {}", a.name(), a.energy, b.energy);
            }
            let (la, le) = tunneling_frequencies(&fast).unwrap();
            assert!(la > 0.0 && le > 0.0);
        }
    }
}
