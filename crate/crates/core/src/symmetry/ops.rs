use alloc::string::ToString;
use alloc::vec::Vec;
use num_traits::Float;

use super::table::{table_for, GroupId, GroupTable, IrrepLabel};
use super::{SymmetryError, MULTIPLICITY_TOL};
use crate::C64;

/// Irrep multiplicities, nonzero entries only, in table order.
pub type Decomposition = Vec<(IrrepLabel, usize)>;

fn multiplicity(table: &GroupTable, chars: &[C64], row: &[C64]) -> C64 {
    let s: C64 = table
        .classes
        .iter()
        .zip(chars.iter().zip(row))
        .map(|(c, (x, y))| *x * y.conj() * c.size as f64)
        .sum();
    s / table.order() as f64
}

/// Reduces a representation given by its characters (one per class) into
/// irreducible components of `table` (complex irreps).
pub fn decompose(chars: &[C64], table: &GroupTable) -> Result<Decomposition, SymmetryError> {
    if chars.len() != table.classes.len() {
        return Err(SymmetryError::CharacterCount {
            expected: table.classes.len(),
            got: chars.len(),
        });
    }
    let mut out = Vec::new();
    for irrep in &table.irreps {
        let n = multiplicity(table, chars, &irrep.characters);
        let rounded = Float::round(n.re);
        if n.im.abs() > MULTIPLICITY_TOL || (n.re - rounded).abs() > MULTIPLICITY_TOL || rounded < 0.0 {
            return Err(SymmetryError::NonIntegerMultiplicity {
                irrep: irrep.label.clone(),
                value: n.re,
            });
        }
        if rounded > 0.0 {
            out.push((
                IrrepLabel {
                    group: table.id,
                    label: irrep.label.clone(),
                    dimension: irrep.dimension,
                },
                rounded as usize,
            ));
        }
    }
    Ok(out)
}

/// D_2d classes (E, 2S4, C2, 2C2', 2σd) mapped into T_d classes
/// (E, 8C3, 3C2, 6S4, 6σd) for the subgroup that keeps the z-axis S4.
/// Any other S4 axis gives a conjugate subgroup and the same map.
const D2D_IN_TD: [usize; 5] = [0, 3, 2, 2, 4];

pub fn restrict_td_to_d2d(td_chars: &[C64]) -> Vec<C64> {
    D2D_IN_TD.iter().map(|&c| td_chars[c]).collect()
}

/// Descent-in-symmetry correlation T_d → D_2d.
pub fn correlate(irrep: &IrrepLabel) -> Result<Decomposition, SymmetryError> {
    let td = table_for(GroupId::Td);
    let chars = td.characters_of(irrep)?;
    decompose(&restrict_td_to_d2d(chars), &table_for(GroupId::D2d))
}

/// Character of the Cartesian vector representation on a class.
fn vector_character(angle: f64, proper: bool) -> f64 {
    let c = 2.0 * Float::cos(angle);
    if proper {
        1.0 + c
    } else {
        -1.0 + c
    }
}

/// Characters of the symmetric square of the vector representation
/// (the polarizability tensor), which determines Raman activity.
fn polarizability_characters(table: &GroupTable) -> Vec<C64> {
    table
        .classes
        .iter()
        .map(|c| {
            let chi = vector_character(c.angle, c.proper);
            // g² is always a proper rotation by twice the angle
            let chi_sq = vector_character(2.0 * c.angle, true);
            C64::new((chi * chi + chi_sq) / 2.0, 0.0)
        })
        .collect()
}

/// Complex irreps contained in the polarizability tensor. For the product
/// group the tensor acts on the site factor and is totally symmetric in the
/// molecular factor.
pub fn raman_active_labels(group: GroupId) -> Vec<IrrepLabel> {
    let table = table_for(group);
    let chars = polarizability_characters(&table);
    decompose(&chars, &table)
        .expect("symmetric square is a representation")
        .into_iter()
        .map(|(l, _)| l)
        .collect()
}

fn is_raman_active(table: &GroupTable, active: &[IrrepLabel], label: &IrrepLabel) -> Result<bool, SymmetryError> {
    let chars = table.characters_of(label)?;
    let parts = decompose(chars, table)?;
    Ok(parts.iter().all(|(l, _)| active.iter().any(|a| a.label == l.label)))
}

/// Number of Raman-allowed bands in `content`, counting every occurrence.
/// Real-form labels (T's `E`) count as one band each.
pub fn raman_active_count(content: &[(IrrepLabel, usize)], group: GroupId) -> Result<usize, SymmetryError> {
    let table = table_for(group);
    let active = raman_active_labels(group);
    let mut count = 0;
    for (label, n) in content {
        if label.group != group {
            return Err(SymmetryError::GroupMismatch {
                expected: group.name().to_string(),
                got: label.group.name().to_string(),
            });
        }
        if is_raman_active(&table, &active, label)? {
            count += n;
        }
    }
    Ok(count)
}

/// True iff Γ_final* ⊗ Γ_operator ⊗ Γ_initial contains the totally symmetric irrep.
pub fn selection_allowed(
    initial: &IrrepLabel,
    final_: &IrrepLabel,
    operator: &IrrepLabel,
) -> Result<bool, SymmetryError> {
    for other in [final_, operator] {
        if other.group != initial.group {
            return Err(SymmetryError::GroupMismatch {
                expected: initial.group.name().to_string(),
                got: other.group.name().to_string(),
            });
        }
    }
    let table = table_for(initial.group);
    let (ci, cf, co) = (
        table.characters_of(initial)?,
        table.characters_of(final_)?,
        table.characters_of(operator)?,
    );
    let s: C64 = table
        .classes
        .iter()
        .enumerate()
        .map(|(k, c)| cf[k].conj() * co[k] * ci[k] * c.size as f64)
        .sum();
    Ok(s.re / table.order() as f64 > 1.0 - MULTIPLICITY_TOL)
}
