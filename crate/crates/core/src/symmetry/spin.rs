//! Nuclear-spin species of four equivalent spin-1/2 nuclei under T.

use alloc::vec::Vec;

use super::table::{table_for, GroupId, TIrrep};
use super::decompose;
use crate::geometry::{tetrahedral_rotations, Mat3, TClass};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SpinLabel {
    A,
    E,
    F,
}

impl SpinLabel {
    pub const ALL: [SpinLabel; 3] = [SpinLabel::A, SpinLabel::E, SpinLabel::F];

    pub fn as_str(self) -> &'static str {
        match self {
            SpinLabel::A => "A",
            SpinLabel::E => "E",
            SpinLabel::F => "F",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Complex irreps of T belonging to this species.
    pub fn t_irreps(self) -> &'static [TIrrep] {
        match self {
            SpinLabel::A => &[TIrrep::A],
            SpinLabel::E => &[TIrrep::E1, TIrrep::E2],
            SpinLabel::F => &[TIrrep::F],
        }
    }

    pub fn parse(s: &str) -> Option<SpinLabel> {
        match s {
            "A" => Some(SpinLabel::A),
            "E" => Some(SpinLabel::E),
            "F" => Some(SpinLabel::F),
            _ => None,
        }
    }
}

impl core::fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpinSpecies {
    pub label: SpinLabel,
    /// Allowed spin functions per rovibrational state of this species.
    pub spin_weight: usize,
    /// Dimension of this species' subspace of the full spin space.
    pub total_count: usize,
}

/// Positions of the four nuclei, along the body diagonals of the cube.
pub(crate) const NUCLEI: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// Permutation of the nuclei induced by rotation `r`: nucleus i goes to `perm[i]`.
pub(crate) fn nuclear_permutation(r: &Mat3) -> [usize; 4] {
    let mut perm = [0; 4];
    for (i, p) in NUCLEI.iter().enumerate() {
        let q: Vec<f64> = (0..3).map(|a| (0..3).map(|b| r[a][b] * p[b]).sum()).collect();
        perm[i] = NUCLEI
            .iter()
            .position(|n| (0..3).all(|a| (n[a] - q[a]).abs() < 1e-9))
            .expect("T permutes the nuclei");
    }
    perm
}

fn cycle_count(perm: &[usize; 4]) -> u32 {
    let mut seen = [false; 4];
    let mut cycles = 0;
    for start in 0..4 {
        if !seen[start] {
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
    }
    cycles
}

/// Character of the 16-dimensional spin representation on each class of T.
/// A permutation with c cycles fixes 2^c product states.
pub fn spin_permutation_characters() -> [f64; 4] {
    let mut chi = [0.0; 4];
    for (r, cls) in tetrahedral_rotations() {
        chi[cls.index()] = f64::from(1u32 << cycle_count(&nuclear_permutation(&r)));
    }
    debug_assert_eq!(chi[TClass::E.index()], 16.0);
    chi
}

/// Decomposition of the spin space of four protons into A, E and F species.
pub fn spin_decomposition() -> Vec<SpinSpecies> {
    let t = table_for(GroupId::T);
    let chars: Vec<C64> = spin_permutation_characters()
        .iter()
        .map(|&x| C64::new(x, 0.0))
        .collect();
    let content = decompose(&chars, &t).expect("permutation representation is valid");
    let mult = |ti: TIrrep| {
        content
            .iter()
            .find(|(l, _)| l.label == ti.label())
            .map_or(0, |(_, n)| *n)
    };
    SpinLabel::ALL
        .iter()
        .map(|&label| {
            let irreps = label.t_irreps();
            let total_count = irreps.iter().map(|&ti| mult(ti) * ti.dimension()).sum();
            // a rovib state of molecular irrep Γ pairs with the spin copies of Γ*
            let partner = irreps[0];
            let spin_weight = mult(partner.conj()) / partner.dimension().max(1);
            SpinSpecies {
                label,
                spin_weight: spin_weight.max(1),
                total_count,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force rank of the character projector on the 16 product states.
    fn projected_dimensions() -> [usize; 4] {
        let els = tetrahedral_rotations();
        let mut out = [0usize; 4];
        for ti in TIrrep::ALL {
            let chi = ti.characters();
            let mut trace = C64::new(0.0, 0.0);
            for (r, cls) in &els {
                let perm = nuclear_permutation(r);
                // trace of the permutation operator on |s0 s1 s2 s3⟩
                let mut fixed = 0;
                for state in 0u32..16 {
                    let mut image = 0u32;
                    for i in 0..4 {
                        if state & (1 << i) != 0 {
                            image |= 1 << perm[i];
                        }
                    }
                    if image == state {
                        fixed += 1;
                    }
                }
                trace += chi[cls.index()].conj() * fixed as f64;
            }
            let rank = trace * (ti.dimension() as f64) / 12.0;
            assert!(rank.im.abs() < 1e-12);
            out[ti.index()] = rank.re.round() as usize;
        }
        out
    }

    #[test]
    fn projection_oracle_gives_5_2_9() {
        let d = projected_dimensions();
        assert_eq!(d, [5, 1, 1, 9]);
        let species = spin_decomposition();
        let totals: Vec<usize> = species.iter().map(|s| s.total_count).collect();
        assert_eq!(totals, [d[0], d[1] + d[2], d[3]]);
        assert_eq!(totals.iter().sum::<usize>(), 16);
    }

    #[test]
    fn per_state_weights() {
        let w: Vec<usize> = spin_decomposition().iter().map(|s| s.spin_weight).collect();
        assert_eq!(w, [5, 1, 1]);
    }

    #[test]
    fn characters_are_two_to_the_cycles() {
        assert_eq!(spin_permutation_characters(), [16.0, 4.0, 4.0, 4.0]);
    }
}
