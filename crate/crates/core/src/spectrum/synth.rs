//! Band envelopes: unit-area line shapes summed on a uniform grid.

use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

use num_traits::Float;

use super::{invalid, Line, SpectrumError};
use crate::units::cm1_to_ghz;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LineShape {
    Gaussian,
    Lorentzian,
}

impl LineShape {
    /// Unit-area profile with full width `fwhm`, evaluated at offset `x`.
    pub fn value(self, x: f64, fwhm: f64) -> f64 {
        match self {
            LineShape::Gaussian => {
                let a = 4.0 * LN_2;
                Float::sqrt(a / PI) / fwhm * Float::exp(-a * x * x / (fwhm * fwhm))
            }
            LineShape::Lorentzian => {
                let g = 0.5 * fwhm;
                g / PI / (x * x + g * g)
            }
        }
    }
}

/// Grid and line shape, all in cm⁻¹.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumConfig {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub shape: LineShape,
    pub fwhm: f64,
}

impl SpectrumConfig {
    pub fn validate(&self) -> Result<(), SpectrumError> {
        if !self.start.is_finite() || !self.stop.is_finite() || !(self.stop > self.start) {
            return Err(invalid("stop", "grid must satisfy start < stop"));
        }
        if !(self.step > 0.0) || self.step > self.stop - self.start {
            return Err(invalid("step", "must be positive and no larger than the grid"));
        }
        if !(self.fwhm > 0.0) || !self.fwhm.is_finite() {
            return Err(invalid("fwhm", "must be positive"));
        }
        Ok(())
    }

    pub fn fwhm_ghz(&self) -> f64 {
        cm1_to_ghz(self.fwhm)
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = Float::floor((self.stop - self.start) / self.step + 1e-9) as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Synthesis {
    /// `(frequency, intensity)` on the grid.
    pub samples: Vec<(f64, f64)>,
    /// Lines whose centers fall outside the grid; they still contribute tails.
    pub clipped: Vec<Line>,
}

impl Synthesis {
    pub fn intensities(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }
}

pub fn synthesize(lines: &[Line], config: &SpectrumConfig) -> Result<Synthesis, SpectrumError> {
    config.validate()?;
    let mut samples: Vec<(f64, f64)> = config.grid().into_iter().map(|x| (x, 0.0)).collect();
    let mut clipped = Vec::new();
    for line in lines {
        if !line.frequency.is_finite() || !line.intensity.is_finite() {
            return Err(invalid("lines", "non-finite line"));
        }
        if line.frequency < config.start || line.frequency > config.stop {
            clipped.push(line.clone());
        }
        for s in samples.iter_mut() {
            s.1 += line.intensity * config.shape.value(s.0 - line.frequency, config.fwhm);
        }
    }
    Ok(Synthesis { samples, clipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{Activity, LevelId};
    use crate::symmetry::SpinLabel;
    use proptest::prelude::*;

    fn line(f: f64, i: f64) -> Line {
        Line {
            frequency: f,
            intensity: i,
            lower: LevelId::ground("(A1)1"),
            upper: LevelId::excited("(L1)1"),
            activity: Activity::Ir,
            spin: SpinLabel::A,
        }
    }

    fn cfg(shape: LineShape, fwhm: f64) -> SpectrumConfig {
        SpectrumConfig {
            start: 3150.0,
            stop: 3260.0,
            step: 0.01,
            shape,
            fwhm,
        }
    }

    #[test]
    fn shapes_have_unit_area_and_requested_width() {
        for shape in [LineShape::Gaussian, LineShape::Lorentzian] {
            let w = 1.5;
            let peak = shape.value(0.0, w);
            assert!((shape.value(w / 2.0, w) / peak - 0.5).abs() < 1e-12);
            // trapezoid over ±2000 widths; Lorentzian tails beyond that carry ~3e-4
            let (h, n) = (0.001, 3_000_000);
            let area: f64 = (0..=n).map(|i| shape.value(-1500.0 + i as f64 * h, w) * h).sum();
            assert!((area - 1.0).abs() < 5e-4, "{shape:?} {area}");
        }
    }

    #[test]
    fn fwhm_in_ghz() {
        assert!((cfg(LineShape::Gaussian, 1.5).fwhm_ghz() - 44.968_868_7).abs() < 1e-6);
    }

    #[test]
    fn two_close_lines_resolve() {
        // 11 cm⁻¹ splitting at 1.5 cm⁻¹ width
        let c = cfg(LineShape::Gaussian, 1.5);
        let s = synthesize(&[line(3206.0, 1.0), line(3217.0, 1.0)], &c).unwrap();
        let y = s.intensities();
        let maxima: Vec<f64> = (1..y.len() - 1)
            .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > 1e-3)
            .map(|i| s.samples[i].0)
            .collect();
        assert_eq!(maxima.len(), 2);
        assert!((maxima[0] - 3206.0).abs() < 0.011 && (maxima[1] - 3217.0).abs() < 0.011);
    }

    #[test]
    fn clipped_lines_are_reported() {
        let c = cfg(LineShape::Lorentzian, 1.0);
        let s = synthesize(&[line(3100.0, 1.0), line(3200.0, 1.0), line(3260.0, 1.0)], &c).unwrap();
        assert_eq!(s.clipped.len(), 1);
        assert_eq!(s.clipped[0].frequency, 3100.0);
    }

    #[test]
    fn invalid_config() {
        let mut c = cfg(LineShape::Gaussian, 1.0);
        c.fwhm = 0.0;
        assert!(matches!(synthesize(&[], &c), Err(SpectrumError::Invalid { field: "fwhm", .. })));
        c.fwhm = 1.0;
        c.stop = c.start;
        assert!(synthesize(&[], &c).is_err());
    }

    #[test]
    fn grid_is_uniform_and_inclusive() {
        let c = SpectrumConfig { start: 0.0, stop: 1.0, step: 0.1, shape: LineShape::Gaussian, fwhm: 1.0 };
        let g = c.grid();
        assert_eq!(g.len(), 11);
        assert!((g[10] - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn synthesis_is_linear(
            f1 in 3160.0f64..3250.0, f2 in 3160.0f64..3250.0,
            a in 0.0f64..5.0, b in 0.0f64..5.0, w in 0.3f64..4.0, lor in any::<bool>(),
        ) {
            let shape = if lor { LineShape::Lorentzian } else { LineShape::Gaussian };
            let mut c = cfg(shape, w);
            c.step = 0.1;
            let l1 = synthesize(&[line(f1, 1.0)], &c).unwrap().intensities();
            let l2 = synthesize(&[line(f2, 1.0)], &c).unwrap().intensities();
            let both = synthesize(&[line(f1, a), line(f2, b)], &c).unwrap().intensities();
            for i in 0..both.len() {
                prop_assert!((both[i] - a * l1[i] - b * l2[i]).abs() < 1e-9);
            }
        }

        #[test]
        fn gaussian_area_matches_intensity(f in 3180.0f64..3230.0, i in 0.1f64..10.0, w in 0.5f64..3.0) {
            let c = cfg(LineShape::Gaussian, w);
            let s = synthesize(&[line(f, i)], &c).unwrap();
            let area: f64 = s.intensities().iter().sum::<f64>() * c.step;
            prop_assert!((area - i).abs() < 1e-6 * i);
        }
    }
}
