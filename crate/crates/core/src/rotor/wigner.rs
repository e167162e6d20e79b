//! Wigner 3j symbols and rotation matrices for integer angular momenta.
//!
//! `D^j_{m'm}(α,β,γ) = e^{-im'α} d^j_{m'm}(β) e^{-imγ}` for the active zyz
//! rotation `Rz(α)Ry(β)Rz(γ)`, so that `D(R1) D(R2) = D(R1 R2)`.

use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_traits::Float;

use crate::geometry::{euler_zyz, Mat3};
use crate::C64;

const FACT_MAX: usize = 170;

struct Factorials([f64; FACT_MAX + 1]);

impl Factorials {
    const fn new() -> Self {
        let mut t = [1.0; FACT_MAX + 1];
        let mut i = 1;
        while i <= FACT_MAX {
            t[i] = t[i - 1] * i as f64;
            i += 1;
        }
        Factorials(t)
    }
}

static FACT: Factorials = Factorials::new();

fn ln_factorial(n: i64) -> f64 {
    if (n as usize) <= FACT_MAX {
        Float::ln(FACT.0[n as usize])
    } else {
        // Stirling series; ample for n > 170
        let x = n as f64;
        x * Float::ln(x) - x + 0.5 * Float::ln(2.0 * core::f64::consts::PI * x) + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x * x * x)
    }
}

fn fact(n: i64) -> f64 {
    FACT.0[n as usize]
}

fn sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3) by the Racah formula.
///
/// Returns 0 outside the domain (triangle rule, |m| ≤ j, m1+m2+m3 = 0).
/// Arguments up to a total of 170 use exact-as-f64 factorials; larger ones
/// switch to log factorials, which cannot overflow but lose a few digits to
/// cancellation in the alternating sum.
pub fn wigner3j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    let [j1, j2, j3, m1, m2, m3] = [j1, j2, j3, m1, m2, m3].map(i64::from);
    if j1 < 0 || j2 < 0 || j3 < 0 || m1 + m2 + m3 != 0 || m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    if j3 > j1 + j2 || j3 < (j1 - j2).abs() {
        return 0.0;
    }
    if m1 == 0 && m2 == 0 && (j1 + j2 + j3) % 2 == 1 {
        return 0.0;
    }
    let kmin = 0.max(j2 - j3 - m1).max(j1 - j3 + m2);
    let kmax = (j1 + j2 - j3).min(j1 - m1).min(j2 + m2);
    let phase = sign(j1 - j2 - m3);
    if j1 + j2 + j3 + 1 <= FACT_MAX as i64 {
        let tri = fact(j1 + j2 - j3) * fact(j1 - j2 + j3) * fact(-j1 + j2 + j3) / fact(j1 + j2 + j3 + 1);
        let pre = Float::sqrt(
            tri * fact(j1 + m1) * fact(j1 - m1) * fact(j2 + m2) * fact(j2 - m2) * fact(j3 + m3) * fact(j3 - m3),
        );
        let mut sum = 0.0;
        for k in kmin..=kmax {
            sum += sign(k)
                / (fact(k)
                    * fact(j1 + j2 - j3 - k)
                    * fact(j1 - m1 - k)
                    * fact(j2 + m2 - k)
                    * fact(j3 - j2 + m1 + k)
                    * fact(j3 - j1 - m2 + k));
        }
        phase * pre * sum
    } else {
        let ln_pre = 0.5
            * (ln_factorial(j1 + j2 - j3) + ln_factorial(j1 - j2 + j3) + ln_factorial(-j1 + j2 + j3)
                - ln_factorial(j1 + j2 + j3 + 1)
                + ln_factorial(j1 + m1)
                + ln_factorial(j1 - m1)
                + ln_factorial(j2 + m2)
                + ln_factorial(j2 - m2)
                + ln_factorial(j3 + m3)
                + ln_factorial(j3 - m3));
        let mut sum = 0.0;
        for k in kmin..=kmax {
            let ln_den = ln_factorial(k)
                + ln_factorial(j1 + j2 - j3 - k)
                + ln_factorial(j1 - m1 - k)
                + ln_factorial(j2 + m2 - k)
                + ln_factorial(j3 - j2 + m1 + k)
                + ln_factorial(j3 - j1 - m2 + k);
            sum += sign(k) * Float::exp(ln_pre - ln_den);
        }
        phase * sum
    }
}

/// Wigner small-d element d^j_{m'm}(β).
pub fn small_d(j: i32, mp: i32, m: i32, beta: f64) -> f64 {
    if mp.abs() > j || m.abs() > j {
        return 0.0;
    }
    let [j, mp, m] = [j, mp, m].map(i64::from);
    let (c, s) = (Float::cos(beta / 2.0), Float::sin(beta / 2.0));
    let pre = Float::sqrt(fact(j + mp) * fact(j - mp) * fact(j + m) * fact(j - m));
    let smin = 0.max(m - mp);
    let smax = (j + m).min(j - mp);
    let mut sum = 0.0;
    for k in smin..=smax {
        let den = fact(j + m - k) * fact(k) * fact(mp - m + k) * fact(j - mp - k);
        sum += sign(mp - m + k) * Float::powi(c, (2 * j + m - mp - 2 * k) as i32)
            * Float::powi(s, (mp - m + 2 * k) as i32)
            / den;
    }
    pre * sum
}

/// Rotation matrix D^j(α,β,γ), rows m' and columns m from −j to j.
pub fn wigner_d_euler(j: i32, alpha: f64, beta: f64, gamma: f64) -> DMatrix<C64> {
    let n = (2 * j + 1) as usize;
    DMatrix::from_fn(n, n, |r, c| {
        let mp = r as i32 - j;
        let m = c as i32 - j;
        let phase = -(mp as f64 * alpha + m as f64 * gamma);
        C64::from_polar(small_d(j, mp, m, beta), phase)
    })
}

/// Rotation matrix D^j(R) of a proper rotation.
pub fn wigner_d(j: i32, r: &Mat3) -> DMatrix<C64> {
    let (a, b, g) = euler_zyz(r);
    wigner_d_euler(j, a, b, g)
}

/// D^j(R) for every j in 0..=jmax.
pub fn wigner_d_all(jmax: i32, r: &Mat3) -> Vec<DMatrix<C64>> {
    let (a, b, g) = euler_zyz(r);
    (0..=jmax).map(|j| wigner_d_euler(j, a, b, g)).collect()
}
