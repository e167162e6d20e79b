//! The symmetric-top basis |J m k⟩.
//!
//! Order: J ascending; within J, m from −J to J; within m, k from −J to J.
//! The state |J m k⟩ has wavefunction √((2J+1)/8π²) D^{J*}_{mk}(R).

use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BasisState {
    pub j: i32,
    /// Projection on the molecule-fixed z axis.
    pub k: i32,
    /// Projection on the site (lattice) z axis.
    pub m: i32,
}

/// Number of states with J ≤ jmax: Σ (2J+1)².
pub fn basis_size(jmax: i32) -> usize {
    if jmax < 0 {
        return 0;
    }
    let n = jmax as usize;
    (n + 1) * (2 * n + 1) * (2 * n + 3) / 3
}

/// Index of the first state with the given J.
pub fn j_offset(j: i32) -> usize {
    basis_size(j - 1)
}

pub fn state_index(s: &BasisState) -> usize {
    let d = (2 * s.j + 1) as usize;
    j_offset(s.j) + (s.m + s.j) as usize * d + (s.k + s.j) as usize
}

pub fn build_basis(jmax: i32) -> Vec<BasisState> {
    let mut out = Vec::with_capacity(basis_size(jmax));
    for j in 0..=jmax {
        for m in -j..=j {
            for k in -j..=j {
                out.push(BasisState { j, k, m });
            }
        }
    }
    out
}
