//! Proper rotations in three dimensions and the finite groups T and O.
//!
//! Rotations are active, right-handed, stored as row-major 3×3 arrays.
//! Euler angles follow the z-y-z convention `R = Rz(α) Ry(β) Rz(γ)`.

use alloc::vec::Vec;
use num_traits::Float;

pub type Mat3 = [[f64; 3]; 3];

pub const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(a: &Mat3) -> Mat3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn max_abs_diff(a: &Mat3, b: &Mat3) -> f64 {
    let mut d = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            d = d.max((a[i][j] - b[i][j]).abs());
        }
    }
    d
}

/// Rotation by `angle` about `axis` (need not be normalized).
pub fn axis_angle(axis: [f64; 3], angle: f64) -> Mat3 {
    let n = Float::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
    let (s, c) = Float::sin_cos(angle);
    let t = 1.0 - c;
    [
        [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
        [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
        [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
    ]
}

pub fn from_euler_zyz(alpha: f64, beta: f64, gamma: f64) -> Mat3 {
    let rz = |a: f64| axis_angle([0.0, 0.0, 1.0], a);
    let ry = axis_angle([0.0, 1.0, 0.0], beta);
    mat_mul(&mat_mul(&rz(alpha), &ry), &rz(gamma))
}

/// Inverse of [`from_euler_zyz`]. At the gimbal poles γ is set to 0.
pub fn euler_zyz(r: &Mat3) -> (f64, f64, f64) {
    let sin_beta = Float::sqrt(r[0][2] * r[0][2] + r[1][2] * r[1][2]);
    let beta = Float::atan2(sin_beta, r[2][2]);
    if sin_beta > 1e-9 {
        let alpha = Float::atan2(r[1][2], r[0][2]);
        let gamma = Float::atan2(r[2][1], -r[2][0]);
        (alpha, beta, gamma)
    } else if r[2][2] > 0.0 {
        (Float::atan2(r[1][0], r[0][0]), 0.0, 0.0)
    } else {
        (Float::atan2(-r[0][1], r[1][1]), core::f64::consts::PI, 0.0)
    }
}

/// Rotation angle in [0, π].
pub fn rotation_angle(r: &Mat3) -> f64 {
    let tr = r[0][0] + r[1][1] + r[2][2];
    Float::acos(((tr - 1.0) / 2.0).clamp(-1.0, 1.0))
}

/// Conjugacy classes of the proper tetrahedral group T.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TClass {
    E,
    /// +120° about the four body diagonals (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
    C3,
    /// −120° about the same diagonals.
    C3Sq,
    C2,
}

impl TClass {
    pub const ALL: [TClass; 4] = [TClass::E, TClass::C3, TClass::C3Sq, TClass::C2];

    pub fn index(self) -> usize {
        self as usize
    }
}

const DIAGONALS: [[f64; 3]; 4] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
];

/// The 12 rotations of T, each tagged with its class.
///
/// Order: E, the four +120° C3, the four −120° C3, then C2 about x, y, z.
pub fn tetrahedral_rotations() -> Vec<(Mat3, TClass)> {
    let third = 2.0 * core::f64::consts::PI / 3.0;
    let mut out = Vec::with_capacity(12);
    out.push((IDENTITY, TClass::E));
    for d in DIAGONALS {
        out.push((axis_angle(d, third), TClass::C3));
    }
    for d in DIAGONALS {
        out.push((axis_angle(d, -third), TClass::C3Sq));
    }
    for ax in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
        out.push((axis_angle(ax, core::f64::consts::PI), TClass::C2));
    }
    out
}

/// The 24 rotations of the cube group O: T followed by T composed with C4z.
pub fn octahedral_rotations() -> Vec<Mat3> {
    let c4 = axis_angle([0.0, 0.0, 1.0], core::f64::consts::FRAC_PI_2);
    let t: Vec<Mat3> = tetrahedral_rotations().into_iter().map(|(r, _)| r).collect();
    let mut out = t.clone();
    out.extend(t.iter().map(|g| mat_mul(g, &c4)));
    out
}

/// Index of `r` in `group`, matched to 1e-9.
pub fn find_element(group: &[Mat3], r: &Mat3) -> Option<usize> {
    group.iter().position(|g| max_abs_diff(g, r) < 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_is_closed_and_classes_are_conjugacy_classes() {
        let els = tetrahedral_rotations();
        let mats: Vec<Mat3> = els.iter().map(|e| e.0).collect();
        for a in &mats {
            for b in &mats {
                assert!(find_element(&mats, &mat_mul(a, b)).is_some());
            }
        }
        for (g, cls) in &els {
            for h in &mats {
                let conj = mat_mul(&mat_mul(h, g), &transpose(h));
                let i = find_element(&mats, &conj).unwrap();
                assert_eq!(els[i].1, *cls);
            }
        }
    }

    #[test]
    fn o_has_24_distinct_elements() {
        let o = octahedral_rotations();
        for (i, g) in o.iter().enumerate() {
            assert_eq!(find_element(&o, g), Some(i));
        }
    }

    #[test]
    fn euler_round_trip() {
        for &(a, b, c) in &[(0.3, 1.1, -2.0), (2.9, 0.0, 0.0), (-1.0, core::f64::consts::PI, 0.0), (0.1, 2.5, 3.0)] {
            let r = from_euler_zyz(a, b, c);
            let (x, y, z) = euler_zyz(&r);
            assert!(max_abs_diff(&from_euler_zyz(x, y, z), &r) < 1e-12);
        }
    }
}
