use alloc::string::String;
use alloc::vec::Vec;

use super::FitError;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Peak {
    /// cm⁻¹.
    pub frequency: f64,
    pub intensity: Option<f64>,
    /// Transition label such as `(A1)1->(L1)1*`.
    pub label: Option<String>,
}

impl Peak {
    pub fn new(frequency: f64, label: Option<&str>) -> Peak {
        Peak {
            frequency,
            intensity: None,
            label: label.map(String::from),
        }
    }
}

/// Observed peaks with positive, distinct frequencies.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PeakList {
    peaks: Vec<Peak>,
}

impl PeakList {
    pub fn new(peaks: Vec<Peak>) -> Result<PeakList, FitError> {
        for (i, p) in peaks.iter().enumerate() {
            if !(p.frequency > 0.0) || !p.frequency.is_finite() {
                return Err(FitError::InvalidPeaks(alloc::format!("peak {} has non-positive frequency", i + 1)));
            }
            if peaks[..i].iter().any(|q| q.frequency == p.frequency) {
                return Err(FitError::InvalidPeaks(alloc::format!(
                    "duplicate peak frequency {}",
                    p.frequency
                )));
            }
            if p.intensity.is_some_and(|x| !x.is_finite() || x < 0.0) {
                return Err(FitError::InvalidPeaks(alloc::format!("peak {} has invalid intensity", i + 1)));
            }
        }
        Ok(PeakList { peaks })
    }

    pub fn peaks(&self) -> &[Peak] {
        &self.peaks
    }

    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_bad_peaks() {
        assert!(PeakList::new(vec![Peak::new(3206.0, None), Peak::new(3206.0, None)]).is_err());
        assert!(PeakList::new(vec![Peak::new(0.0, None)]).is_err());
        assert!(PeakList::new(vec![Peak::new(-1.0, None)]).is_err());
        assert_eq!(PeakList::new(vec![Peak::new(3206.0, None), Peak::new(3217.0, None)]).unwrap().len(), 2);
    }
}
