//! Dense diagonalization and character-projection labelling.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::basis::{basis_size, j_offset};
use super::hamiltonian::hamiltonian_matrix;
use super::levels::{assemble_levels, EnergyLevel};
use super::wigner::wigner_d_all;
use super::{RotorError, RotorModel};
use crate::geometry::{tetrahedral_rotations, Mat3, TClass};
use crate::symmetry::{decompose, GroupId, RovibLabel, ROVIB_DICTIONARY};
use crate::C64;

/// Degenerate-cluster tolerance as a fraction of the spectral range.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Eigensystem {
    /// Eigenvalues relative to the lowest, ascending, cm⁻¹.
    pub energies: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in basis order.
    pub vectors: DMatrix<f64>,
    /// Lowest eigenvalue before the shift.
    pub ground_energy: f64,
    pub jmax: i32,
}

impl Eigensystem {
    pub fn spectral_range(&self) -> f64 {
        self.energies.last().copied().unwrap_or(0.0)
    }
}

/// A cluster whose characters do not reduce to whole real-form irreps.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlaggedCluster {
    pub energy: f64,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelTable {
    pub levels: Vec<EnergyLevel>,
    pub flagged: Vec<FlaggedCluster>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components of the nonzero pattern of a symmetric matrix.
fn sparsity_blocks(h: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = h.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    for c in 0..n {
        for r in 0..c {
            if h[(r, c)] != 0.0 {
                let (a, b) = (find(&mut parent, r), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_of[r] == usize::MAX {
            root_of[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[root_of[r]].push(i);
    }
    blocks
}

/// Full eigensystem of the model Hamiltonian.
pub fn diagonalize(model: &RotorModel) -> Result<Eigensystem, RotorError> {
    let h = hamiltonian_matrix(model)?;
    let n = h.nrows();
    let mut pairs: Vec<(f64, DVector<f64>)> = Vec::with_capacity(n);
    for (bi, block) in sparsity_blocks(&h).iter().enumerate() {
        let d = block.len();
        let sub = DMatrix::from_fn(d, d, |r, c| h[(block[r], block[c])]);
        let norm = sub.norm();
        let eig = SymmetricEigen::try_new(sub, f64::EPSILON, 10_000 * d.max(1)).ok_or(
            RotorError::NonConvergence {
                block: bi,
                dimension: d,
                norm,
            },
        )?;
        for (k, &e) in eig.eigenvalues.iter().enumerate() {
            let mut v = DVector::<f64>::zeros(n);
            for (r, &idx) in block.iter().enumerate() {
                v[idx] = eig.eigenvectors[(r, k)];
            }
            pairs.push((e, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let ground = pairs.first().map_or(0.0, |p| p.0);
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (c, (_, v)) in pairs.iter().enumerate() {
        vectors.set_column(c, v);
    }
    Ok(Eigensystem {
        energies: pairs.iter().map(|p| p.0 - ground).collect(),
        vectors,
        ground_energy: ground,
        jmax: model.jmax,
    })
}

/// One (site, molecule) rotation pair per class of T×T̄, in table class order.
pub fn class_representatives() -> Vec<(Mat3, Mat3)> {
    let els = tetrahedral_rotations();
    let rep = |c: TClass| els.iter().find(|e| e.1 == c).map(|e| e.0).unwrap_or(crate::geometry::IDENTITY);
    let mut out = Vec::with_capacity(16);
    for a in TClass::ALL {
        for b in TClass::ALL {
            out.push((rep(a), rep(b)));
        }
    }
    out
}

/// Applies (g, h) ∈ T×T̄ to a state: per J block X[m][k] ↦ D(g) X D(h)†,
/// i.e. D(g) on the site index and D(h)* on the molecular index.
pub(crate) fn apply_group_element(
    x: &DVector<C64>,
    jmax: i32,
    dg: &[DMatrix<C64>],
    dh: &[DMatrix<C64>],
) -> DVector<C64> {
    let mut out = DVector::<C64>::zeros(x.len());
    for j in 0..=jmax {
        let d = (2 * j + 1) as usize;
        let o = j_offset(j);
        let xm = DMatrix::from_fn(d, d, |m, k| x[o + m * d + k]);
        let y = &dg[j as usize] * xm * dh[j as usize].adjoint();
        for m in 0..d {
            for k in 0..d {
                out[o + m * d + k] = y[(m, k)];
            }
        }
    }
    out
}

/// Characters of the span of `columns` on the 16 product classes.
pub fn cluster_characters(vectors: &DMatrix<f64>, columns: &[usize], jmax: i32) -> Vec<C64> {
    let reps: Vec<(Vec<DMatrix<C64>>, Vec<DMatrix<C64>>)> = class_representatives()
        .iter()
        .map(|(g, h)| (wigner_d_all(jmax, g), wigner_d_all(jmax, h)))
        .collect();
    characters_with(vectors, columns, jmax, &reps)
}

fn characters_with(
    vectors: &DMatrix<f64>,
    columns: &[usize],
    jmax: i32,
    reps: &[(Vec<DMatrix<C64>>, Vec<DMatrix<C64>>)],
) -> Vec<C64> {
    let mut chi = vec![C64::new(0.0, 0.0); reps.len()];
    for &c in columns {
        let x: DVector<C64> = vectors.column(c).map(|v| C64::new(v, 0.0));
        for (k, (dg, dh)) in reps.iter().enumerate() {
            let y = apply_group_element(&x, jmax, dg, dh);
            chi[k] += x.dotc(&y);
        }
    }
    chi
}

/// Groups numerically degenerate eigenvalues and labels each cluster with
/// the T×T̄ content found by character projection. A cluster holding several
/// irreps becomes several levels (marked `shared`); one whose content is not
/// a whole set of real-form irreps is flagged instead.
pub fn classify_levels(system: &Eigensystem, model: &RotorModel, rel_tol: f64) -> LevelTable {
    let tol = rel_tol * system.spectral_range().max(model.b);
    let jmax = system.jmax;
    assert_eq!(system.vectors.nrows(), basis_size(jmax));
    let reps: Vec<_> = class_representatives()
        .iter()
        .map(|(g, h)| (wigner_d_all(jmax, g), wigner_d_all(jmax, h)))
        .collect();
    let table = crate::symmetry::character_table(GroupId::TxT.name()).expect("built-in table");
    let mut raw: Vec<(f64, &'static RovibLabel)> = Vec::new();
    let mut flagged = Vec::new();
    let e = &system.energies;
    let mut start = 0;
    while start < e.len() {
        let mut end = start + 1;
        while end < e.len() && e[end] - e[end - 1] <= tol {
            end += 1;
        }
        let cols: Vec<usize> = (start..end).collect();
        let energy = e[start..end].iter().sum::<f64>() / (end - start) as f64 + system.ground_energy;
        let chi = characters_with(&system.vectors, &cols, jmax, &reps);
        match decompose(&chi, &table).ok().and_then(|d| real_content(&d)) {
            Some(labels) => raw.extend(labels.into_iter().map(|l| (energy, l))),
            None => flagged.push(FlaggedCluster {
                energy: energy - system.ground_energy,
                dimension: end - start,
            }),
        }
        start = end;
    }
    LevelTable {
        levels: assemble_levels(raw, tol),
        flagged,
    }
}

/// Real-form labels of a complex decomposition, or None if some conjugate
/// partner is missing.
fn real_content(d: &[(crate::symmetry::IrrepLabel, usize)]) -> Option<Vec<&'static RovibLabel>> {
    let mult = |label: &str| d.iter().find(|(l, _)| l.label == label).map_or(0, |(_, n)| *n);
    let mut out = Vec::new();
    let mut used = 0;
    for entry in &ROVIB_DICTIONARY {
        let counts: Vec<usize> = entry
            .components
            .iter()
            .map(|&(s, m)| mult(&crate::symmetry::product_label(s, m)))
            .collect();
        if counts.iter().any(|&c| c != counts[0]) {
            return None;
        }
        used += counts.iter().sum::<usize>();
        for _ in 0..counts[0] {
            out.push(entry);
        }
    }
    if used != d.iter().map(|(_, n)| n).sum::<usize>() {
        return None;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotor::levels::{find_level, tunneling_frequencies};

    #[test]
    fn free_rotor_levels() {
        let m = RotorModel::new(5.9, 0.0, 4).unwrap();
        let sys = diagonalize(&m).unwrap();
        let t = classify_levels(&sys, &m, DEFAULT_CLUSTER_TOL);
        assert!(t.flagged.is_empty());
        let first = &t.levels[0];
        assert_eq!(first.rovib_label.label, "A1");
        assert_eq!(first.spin_species, crate::symmetry::SpinLabel::A);
        let l1 = find_level(&t.levels, "L1", 1).unwrap();
        assert!((l1.energy - 11.8).abs() < 1e-9);
        // first E-type level is in J = 2
        let e = t.levels.iter().find(|l| l.rovib_label.label.starts_with('E')).unwrap();
        assert!((e.energy - 5.9 * 6.0).abs() < 1e-9);
        let total: usize = t.levels.iter().map(|l| l.degeneracy).sum();
        assert_eq!(total, basis_size(4));
        let (la, _) = tunneling_frequencies(&t.levels).unwrap();
        assert!((la - 11.8).abs() < 1e-9);
    }

    #[test]
    fn hindered_levels_are_orthonormal_with_small_residual() {
        let m = RotorModel::new(5.9, 5.0, 5).unwrap();
        let sys = diagonalize(&m).unwrap();
        let v = &sys.vectors;
        let gram = v.transpose() * v;
        let n = gram.nrows();
        assert!((gram - DMatrix::<f64>::identity(n, n)).abs().max() < 1e-10);
        let h = hamiltonian_matrix(&m).unwrap();
        let range = sys.spectral_range();
        for c in (0..n).step_by(7) {
            let col = v.column(c);
            let r = &h * col - col * (sys.energies[c] + sys.ground_energy);
            assert!(r.norm() <= 1e-8 * range);
        }
        let t = classify_levels(&sys, &m, DEFAULT_CLUSTER_TOL);
        assert!(t.flagged.is_empty());
        let total: usize = t.levels.iter().map(|l| l.degeneracy).sum();
        assert_eq!(total, basis_size(5));
    }
}
