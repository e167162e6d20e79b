use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::rovib::ROVIB_DICTIONARY;
use super::SymmetryError;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GroupId {
    T,
    Td,
    D2d,
    C3v,
    /// Proper-rotation product group T × T̄ (site rotations × molecule-fixed rotations).
    TxT,
}

impl GroupId {
    pub const ALL: [GroupId; 5] = [GroupId::T, GroupId::Td, GroupId::D2d, GroupId::C3v, GroupId::TxT];

    pub fn name(self) -> &'static str {
        match self {
            GroupId::T => "T",
            GroupId::Td => "T_d",
            GroupId::D2d => "D_2d",
            GroupId::C3v => "C_3v",
            GroupId::TxT => "TxT",
        }
    }

    /// Accepts the canonical names plus common spellings (`Td`, `D2d`, `T×T̄`, ...).
    pub fn parse(s: &str) -> Result<GroupId, SymmetryError> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '_' | ' ' | '\u{304}'))
            .flat_map(|c| c.to_lowercase())
            .collect();
        match key.as_str() {
            "t" => Ok(GroupId::T),
            "td" => Ok(GroupId::Td),
            "d2d" => Ok(GroupId::D2d),
            "c3v" => Ok(GroupId::C3v),
            "txt" | "t×t" | "txtbar" | "t*t" => Ok(GroupId::TxT),
            _ => Err(SymmetryError::UnknownGroup(s.to_string())),
        }
    }
}

impl core::fmt::Display for GroupId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// A conjugacy class. `angle` is the rotation angle θ of a proper rotation
/// C(θ), or of the improper rotation S(θ) = σh·C(θ) when `proper` is false
/// (so a mirror has θ = 0 and S4 has θ = π/2). For the product group it is
/// the angle of the site factor.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupClass {
    pub label: String,
    pub size: usize,
    pub angle: f64,
    pub proper: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Irrep {
    pub label: String,
    pub dimension: usize,
    pub characters: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupTable {
    pub id: GroupId,
    pub name: String,
    pub classes: Vec<GroupClass>,
    /// Complex irreducible representations.
    pub irreps: Vec<Irrep>,
    /// Physically irreducible (real) rows: conjugate pairs merged. Equal to
    /// `irreps` for groups without complex characters.
    pub real_forms: Vec<Irrep>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IrrepLabel {
    pub group: GroupId,
    pub label: String,
    pub dimension: usize,
}

impl core::fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.label)
    }
}

/// Complex irreps of T, in table order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum TIrrep {
    A,
    /// χ(C3) = ω = e^{2πi/3}
    E1,
    /// χ(C3) = ω²
    E2,
    F,
}

impl TIrrep {
    pub const ALL: [TIrrep; 4] = [TIrrep::A, TIrrep::E1, TIrrep::E2, TIrrep::F];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn dimension(self) -> usize {
        if self == TIrrep::F {
            3
        } else {
            1
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TIrrep::A => "A",
            TIrrep::E1 => "1E",
            TIrrep::E2 => "2E",
            TIrrep::F => "F",
        }
    }

    pub fn conj(self) -> TIrrep {
        match self {
            TIrrep::E1 => TIrrep::E2,
            TIrrep::E2 => TIrrep::E1,
            other => other,
        }
    }

    /// Character on the classes E, C3, C3², C2 (see [`crate::geometry::TClass`]).
    pub fn characters(self) -> [C64; 4] {
        let one = C64::new(1.0, 0.0);
        let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
        match self {
            TIrrep::A => [one; 4],
            TIrrep::E1 => [one, w, w * w, one],
            TIrrep::E2 => [one, w * w, w, one],
            TIrrep::F => [C64::new(3.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), -one],
        }
    }
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.classes.iter().map(|c| c.size).sum()
    }

    /// Looks `label` up among complex irreps first, then real-form rows.
    pub fn row(&self, label: &str) -> Option<&Irrep> {
        self.irreps
            .iter()
            .chain(self.real_forms.iter())
            .find(|r| r.label == label)
    }

    pub fn label(&self, label: &str) -> Result<IrrepLabel, SymmetryError> {
        self.row(label)
            .map(|r| IrrepLabel {
                group: self.id,
                label: r.label.clone(),
                dimension: r.dimension,
            })
            .ok_or_else(|| SymmetryError::UnknownIrrep {
                group: self.name.clone(),
                label: label.to_string(),
            })
    }

    pub fn characters_of(&self, label: &IrrepLabel) -> Result<&[C64], SymmetryError> {
        if label.group != self.id {
            return Err(SymmetryError::GroupMismatch {
                expected: self.name.clone(),
                got: label.group.name().to_string(),
            });
        }
        self.row(&label.label)
            .map(|r| r.characters.as_slice())
            .ok_or_else(|| SymmetryError::UnknownIrrep {
                group: self.name.clone(),
                label: label.label.clone(),
            })
    }

    /// Largest deviation from row and column orthogonality of the complex irreps.
    pub fn orthogonality_error(&self) -> f64 {
        let g = self.order() as f64;
        let mut err = 0.0f64;
        for (i, a) in self.irreps.iter().enumerate() {
            for (j, b) in self.irreps.iter().enumerate() {
                let s: C64 = self
                    .classes
                    .iter()
                    .zip(a.characters.iter().zip(&b.characters))
                    .map(|(c, (x, y))| *x * y.conj() * c.size as f64)
                    .sum();
                let target = if i == j { g } else { 0.0 };
                err = err.max((s - C64::new(target, 0.0)).norm());
            }
        }
        for (p, cp) in self.classes.iter().enumerate() {
            for q in 0..self.classes.len() {
                let s: C64 = self
                    .irreps
                    .iter()
                    .map(|r| r.characters[p] * r.characters[q].conj())
                    .sum();
                let target = if p == q { g / cp.size as f64 } else { 0.0 };
                err = err.max((s - C64::new(target, 0.0)).norm());
            }
        }
        err
    }
}

fn class(label: &str, size: usize, angle: f64, proper: bool) -> GroupClass {
    GroupClass {
        label: label.to_string(),
        size,
        angle,
        proper,
    }
}

fn real_row(label: &str, chars: &[f64]) -> Irrep {
    Irrep {
        label: label.to_string(),
        dimension: chars[0] as usize,
        characters: chars.iter().map(|&x| C64::new(x, 0.0)).collect(),
    }
}

fn table_t() -> GroupTable {
    let third = 2.0 * PI / 3.0;
    let classes = vec![
        class("E", 1, 0.0, true),
        class("4C3", 4, third, true),
        class("4C3^2", 4, third, true),
        class("3C2", 3, PI, true),
    ];
    let irreps: Vec<Irrep> = TIrrep::ALL
        .iter()
        .map(|t| Irrep {
            label: t.label().to_string(),
            dimension: t.dimension(),
            characters: t.characters().to_vec(),
        })
        .collect();
    let e_real = Irrep {
        label: "E".to_string(),
        dimension: 2,
        characters: irreps[1]
            .characters
            .iter()
            .zip(&irreps[2].characters)
            .map(|(a, b)| a + b)
            .collect(),
    };
    let real_forms = vec![irreps[0].clone(), e_real, irreps[3].clone()];
    GroupTable {
        id: GroupId::T,
        name: "T".to_string(),
        classes,
        irreps,
        real_forms,
    }
}

fn table_td() -> GroupTable {
    let classes = vec![
        class("E", 1, 0.0, true),
        class("8C3", 8, 2.0 * PI / 3.0, true),
        class("3C2", 3, PI, true),
        class("6S4", 6, PI / 2.0, false),
        class("6sd", 6, 0.0, false),
    ];
    let irreps = vec![
        real_row("A1", &[1.0, 1.0, 1.0, 1.0, 1.0]),
        real_row("A2", &[1.0, 1.0, 1.0, -1.0, -1.0]),
        real_row("E", &[2.0, -1.0, 2.0, 0.0, 0.0]),
        real_row("F1", &[3.0, 0.0, -1.0, 1.0, -1.0]),
        real_row("F2", &[3.0, 0.0, -1.0, -1.0, 1.0]),
    ];
    GroupTable {
        id: GroupId::Td,
        name: "T_d".to_string(),
        classes,
        real_forms: irreps.clone(),
        irreps,
    }
}

fn table_d2d() -> GroupTable {
    let classes = vec![
        class("E", 1, 0.0, true),
        class("2S4", 2, PI / 2.0, false),
        class("C2", 1, PI, true),
        class("2C2'", 2, PI, true),
        class("2sd", 2, 0.0, false),
    ];
    let irreps = vec![
        real_row("A1", &[1.0, 1.0, 1.0, 1.0, 1.0]),
        real_row("A2", &[1.0, 1.0, 1.0, -1.0, -1.0]),
        real_row("B1", &[1.0, -1.0, 1.0, 1.0, -1.0]),
        real_row("B2", &[1.0, -1.0, 1.0, -1.0, 1.0]),
        real_row("E", &[2.0, 0.0, -2.0, 0.0, 0.0]),
    ];
    GroupTable {
        id: GroupId::D2d,
        name: "D_2d".to_string(),
        classes,
        real_forms: irreps.clone(),
        irreps,
    }
}

fn table_c3v() -> GroupTable {
    let classes = vec![
        class("E", 1, 0.0, true),
        class("2C3", 2, 2.0 * PI / 3.0, true),
        class("3sv", 3, 0.0, false),
    ];
    let irreps = vec![
        real_row("A1", &[1.0, 1.0, 1.0]),
        real_row("A2", &[1.0, 1.0, -1.0]),
        real_row("E", &[2.0, -1.0, 0.0]),
    ];
    GroupTable {
        id: GroupId::C3v,
        name: "C_3v".to_string(),
        classes,
        real_forms: irreps.clone(),
        irreps,
    }
}

/// Label of the complex product irrep (site ⊗ molecule), e.g. `(1E,F)`.
pub fn product_label(site: TIrrep, mol: TIrrep) -> String {
    format!("({},{})", site.label(), mol.label())
}

fn table_txt() -> GroupTable {
    let t = table_t();
    let mut classes = Vec::with_capacity(16);
    for a in &t.classes {
        for b in &t.classes {
            classes.push(GroupClass {
                label: format!("({},{})", a.label, b.label),
                size: a.size * b.size,
                angle: a.angle,
                proper: true,
            });
        }
    }
    let mut irreps = Vec::with_capacity(16);
    for s in TIrrep::ALL {
        for m in TIrrep::ALL {
            let (cs, cm) = (s.characters(), m.characters());
            let mut characters = Vec::with_capacity(16);
            for a in 0..4 {
                for b in 0..4 {
                    characters.push(cs[a] * cm[b]);
                }
            }
            irreps.push(Irrep {
                label: product_label(s, m),
                dimension: s.dimension() * m.dimension(),
                characters,
            });
        }
    }
    let real_forms = ROVIB_DICTIONARY
        .iter()
        .map(|entry| {
            let mut characters = vec![C64::new(0.0, 0.0); 16];
            for &(s, m) in entry.components {
                let row = &irreps[4 * s.index() + m.index()];
                for (acc, x) in characters.iter_mut().zip(&row.characters) {
                    *acc += x;
                }
            }
            Irrep {
                label: entry.label.to_string(),
                dimension: entry.dimension(),
                characters,
            }
        })
        .collect();
    GroupTable {
        id: GroupId::TxT,
        name: "TxT".to_string(),
        classes,
        irreps,
        real_forms,
    }
}

/// Character table of `group`: one of `T`, `T_d`, `D_2d`, `C_3v`, `TxT`.
pub fn character_table(group: &str) -> Result<GroupTable, SymmetryError> {
    Ok(table_for(GroupId::parse(group)?))
}

pub(crate) fn table_for(id: GroupId) -> GroupTable {
    match id {
        GroupId::T => table_t(),
        GroupId::Td => table_td(),
        GroupId::D2d => table_d2d(),
        GroupId::C3v => table_c3v(),
        GroupId::TxT => table_txt(),
    }
}

#[cfg(test)]
/// True if the real and imaginary parts of every character are within `tol` of a real number.
pub(crate) fn is_real_row(chars: &[C64], tol: f64) -> bool {
    chars.iter().all(|c| c.im.abs() < tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_hold_for_every_builtin_table() {
        for id in GroupId::ALL {
            let t = table_for(id);
            let dim2: usize = t.irreps.iter().map(|r| r.dimension * r.dimension).sum();
            assert_eq!(dim2, t.order(), "{}", t.name);
            assert_eq!(t.irreps.len(), t.classes.len());
            assert!(t.orthogonality_error() < 1e-12, "{}", t.name);
            for r in t.irreps.iter().chain(&t.real_forms) {
                assert!((r.characters[0] - C64::new(r.dimension as f64, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn orders() {
        let orders: Vec<usize> = GroupId::ALL.iter().map(|&g| table_for(g).order()).collect();
        assert_eq!(orders, vec![12, 24, 8, 6, 144]);
    }

    #[test]
    fn t_dimensions_complex_and_real() {
        let t = table_for(GroupId::T);
        let d: Vec<usize> = t.irreps.iter().map(|r| r.dimension).collect();
        assert_eq!(d, vec![1, 1, 1, 3]);
        let d: Vec<usize> = t.real_forms.iter().map(|r| r.dimension).collect();
        assert_eq!(d, vec![1, 2, 3]);
        assert!(t.real_forms.iter().all(|r| is_real_row(&r.characters, 1e-12)));
    }

    #[test]
    fn product_identity_characters() {
        let t = table_for(GroupId::TxT);
        for s in TIrrep::ALL {
            for m in TIrrep::ALL {
                let r = t.row(&product_label(s, m)).unwrap();
                assert_eq!(r.characters[0].re as usize, s.dimension() * m.dimension());
            }
        }
    }

    #[test]
    fn group_name_parsing() {
        assert_eq!(GroupId::parse("Td").unwrap(), GroupId::Td);
        assert_eq!(GroupId::parse("D_2d").unwrap(), GroupId::D2d);
        assert_eq!(GroupId::parse("T×T̄").unwrap(), GroupId::TxT);
        assert!(matches!(character_table("O_h"), Err(SymmetryError::UnknownGroup(_))));
    }
}
