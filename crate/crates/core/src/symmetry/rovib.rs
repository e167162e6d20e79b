//! Composite level labels of the product group T×T̄.
//!
//! A level of the hindered rotor transforms as (Γ_site, Γ_mol). Physical
//! (real) levels pair up conjugate complex irreps, giving the ten labels below.
//! The nuclear-spin species of a level is fixed by its molecular factor.
//!
//! | label | components               | dim | spin |
//! |-------|--------------------------|-----|------|
//! | A1    | (A,A)                    | 1   | A    |
//! | AxE   | (A,1E) + (A,2E)          | 2   | E    |
//! | ExA   | (1E,A) + (2E,A)          | 2   | A    |
//! | E2    | (1E,2E) + (2E,1E)        | 2   | E    |
//! | E3    | (1E,1E) + (2E,2E)        | 2   | E    |
//! | AxF   | (A,F)                    | 3   | F    |
//! | FxA   | (F,A)                    | 3   | A    |
//! | I1    | (1E,F) + (2E,F)          | 6   | F    |
//! | I2    | (F,1E) + (F,2E)          | 6   | E    |
//! | L1    | (F,F)                    | 9   | F    |
//!
//! `E2` and `E3` differ only by whether the site and molecular E factors are
//! conjugate to each other. With a potential whose minima sit at the aligned
//! orientations (positive β, default rank-3 sign) the cross pairing `E2` is the
//! lower one, which is the level that carries E spin below the high band.
//! The (F,F) product splits physically into two 9-dimensional species only
//! under improper operations, which the rotor problem does not use; every F×F
//! level is labelled `L1`.

use super::spin::SpinLabel;
use super::table::TIrrep;

pub type ProductComponent = (TIrrep, TIrrep);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RovibLabel {
    pub label: &'static str,
    pub components: &'static [ProductComponent],
    pub spin: SpinLabel,
}

impl RovibLabel {
    pub fn dimension(&self) -> usize {
        self.components
            .iter()
            .map(|(s, m)| s.dimension() * m.dimension())
            .sum()
    }
}

use TIrrep::{A, E1, E2, F};

pub const ROVIB_DICTIONARY: [RovibLabel; 10] = [
    RovibLabel { label: "A1", components: &[(A, A)], spin: SpinLabel::A },
    RovibLabel { label: "AxE", components: &[(A, E1), (A, E2)], spin: SpinLabel::E },
    RovibLabel { label: "ExA", components: &[(E1, A), (E2, A)], spin: SpinLabel::A },
    RovibLabel { label: "E2", components: &[(E1, E2), (E2, E1)], spin: SpinLabel::E },
    RovibLabel { label: "E3", components: &[(E1, E1), (E2, E2)], spin: SpinLabel::E },
    RovibLabel { label: "AxF", components: &[(A, F)], spin: SpinLabel::F },
    RovibLabel { label: "FxA", components: &[(F, A)], spin: SpinLabel::A },
    RovibLabel { label: "I1", components: &[(E1, F), (E2, F)], spin: SpinLabel::F },
    RovibLabel { label: "I2", components: &[(F, E1), (F, E2)], spin: SpinLabel::E },
    RovibLabel { label: "L1", components: &[(F, F)], spin: SpinLabel::F },
];

/// Composite label containing the complex product irrep (site, mol).
pub fn rovib_label(site: TIrrep, mol: TIrrep) -> &'static RovibLabel {
    ROVIB_DICTIONARY
        .iter()
        .find(|e| e.components.contains(&(site, mol)))
        .expect("dictionary covers all 16 product irreps")
}

/// Spin species allowed with a molecular factor `mol`: the one whose product
/// with `mol` contains the totally symmetric irrep.
pub fn spin_species_of_mol(mol: TIrrep) -> SpinLabel {
    match mol {
        TIrrep::A => SpinLabel::A,
        TIrrep::E1 | TIrrep::E2 => SpinLabel::E,
        TIrrep::F => SpinLabel::F,
    }
}
