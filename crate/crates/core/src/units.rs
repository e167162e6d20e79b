//! Physical constants and unit conversions.
//!
//! Every cm⁻¹ ↔ GHz conversion in the workspace goes through
//! [`GHZ_PER_CM1`]; nothing else hard-codes the speed of light.

/// 1 cm⁻¹ expressed in GHz (c in cm/s × 10⁻⁹, exact).
pub const GHZ_PER_CM1: f64 = 29.979_245_8;

/// Boltzmann constant in cm⁻¹ per kelvin (k / hc).
pub const BOLTZMANN_CM1_PER_K: f64 = 0.695_034_800_4;

/// Planck constant in J·s (exact since the 2019 SI redefinition).
pub const PLANCK_J_S: f64 = 6.626_070_15e-34;

/// Vacuum electric permittivity in F/m (CODATA 2018).
pub const EPSILON_0_F_PER_M: f64 = 8.854_187_812_8e-12;

/// One debye in C·m (10⁻²¹ / c).
pub const DEBYE_C_M: f64 = 3.335_640_951_98e-30;

#[inline]
pub fn cm1_to_ghz(wavenumber: f64) -> f64 {
    wavenumber * GHZ_PER_CM1
}

#[inline]
pub fn ghz_to_cm1(ghz: f64) -> f64 {
    ghz / GHZ_PER_CM1
}

/// Thermal energy kT in cm⁻¹.
#[inline]
pub fn kt_cm1(temperature_k: f64) -> f64 {
    BOLTZMANN_CM1_PER_K * temperature_k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_conversions() {
        assert!((cm1_to_ghz(11.0) - 329.771_703_8).abs() < 1e-9);
        assert!((cm1_to_ghz(1.5) - 44.968_868_7).abs() < 1e-9);
        assert!((ghz_to_cm1(cm1_to_ghz(3.25)) - 3.25).abs() < 1e-12);
    }

    #[test]
    fn kt_at_seven_kelvin() {
        assert!((kt_cm1(7.0) - 4.865_243_6).abs() < 1e-6);
    }
}
