//! Flat-file input and output. Every file is written to a temporary sibling
//! and renamed into place, so readers never see a partial file.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;
use tetrarotor_core::fitting::{Peak, PeakList};
use tetrarotor_core::rotor::EnergyLevel;
use tetrarotor_core::spectrum::Line;

pub const LEVELS_HEADER: [&str; 5] = ["energy_cm1", "degeneracy", "label", "spin", "ordinal"];
pub const STICKS_HEADER: [&str; 5] = ["frequency_cm1", "intensity", "lower", "upper", "activity"];
pub const SPECTRUM_HEADER: [&str; 2] = ["frequency_cm1", "intensity"];
pub const PEAKS_HEADER: [&str; 3] = ["frequency_cm1", "intensity", "label"];

#[derive(Debug)]
pub enum IoError {
    Io { path: String, source: std::io::Error },
    Csv { path: String, message: String },
}

impl std::fmt::Display for IoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IoError::Io { path, source } => write!(f, "{path}: {source}"),
            IoError::Csv { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for IoError {}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path, message: impl std::fmt::Display) -> IoError {
    IoError::Csv {
        path: path.display().to_string(),
        message: message.to_string(),
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(dir))?;
    tmp.write_all(bytes).map_err(io_err(path))?;
    tmp.as_file().sync_all().map_err(io_err(path))?;
    tmp.persist(path).map_err(|e| IoError::Io {
        path: path.display().to_string(),
        source: e.error,
    })?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn levels_csv(levels: &[EnergyLevel]) -> Vec<u8> {
    csv_bytes(
        &LEVELS_HEADER,
        levels.iter().map(|l| {
            vec![
                l.energy.to_string(),
                l.degeneracy.to_string(),
                l.rovib_label.label.clone(),
                l.spin_species.to_string(),
                l.ordinal.to_string(),
            ]
        }),
    )
}

pub fn sticks_csv(lines: &[Line]) -> Vec<u8> {
    csv_bytes(
        &STICKS_HEADER,
        lines.iter().map(|l| {
            vec![
                l.frequency.to_string(),
                l.intensity.to_string(),
                l.lower.to_string(),
                l.upper.to_string(),
                l.activity.as_str().to_string(),
            ]
        }),
    )
}

pub fn samples_csv(samples: &[(f64, f64)]) -> Vec<u8> {
    csv_bytes(
        &SPECTRUM_HEADER,
        samples.iter().map(|(x, y)| vec![x.to_string(), y.to_string()]),
    )
}

fn check_header(path: &Path, got: &csv::StringRecord, want: &[&str]) -> Result<(), IoError> {
    let got: Vec<&str> = got.iter().map(str::trim).collect();
    if want.iter().any(|w| !got.contains(w)) {
        return Err(csv_err(path, format!("header must contain {}", want.join(","))));
    }
    Ok(())
}

#[derive(Deserialize)]
struct PeakRow {
    frequency_cm1: f64,
    intensity: Option<f64>,
    label: Option<String>,
}

/// Peak list with header `frequency_cm1,intensity,label`; the last two may be empty.
pub fn read_peaks(path: &Path) -> Result<PeakList, IoError> {
    let text = read_text(path)?;
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    check_header(path, r.headers().map_err(|e| csv_err(path, e))?, &PEAKS_HEADER)?;
    let mut peaks = Vec::new();
    for row in r.deserialize::<PeakRow>() {
        let row = row.map_err(|e| csv_err(path, e))?;
        peaks.push(Peak {
            frequency: row.frequency_cm1,
            intensity: row.intensity,
            label: row.label.filter(|l| !l.is_empty()),
        });
    }
    PeakList::new(peaks).map_err(|e| csv_err(path, e))
}

#[derive(Deserialize)]
struct StickRow {
    frequency_cm1: f64,
    #[allow(dead_code)]
    intensity: f64,
    lower: String,
    upper: String,
}

/// `(lower->upper, frequency)` pairs from a stick-list CSV.
pub fn read_line_list(path: &Path) -> Result<Vec<(String, f64)>, IoError> {
    let text = read_text(path)?;
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    check_header(path, r.headers().map_err(|e| csv_err(path, e))?, &STICKS_HEADER[..4])?;
    r.deserialize::<StickRow>()
        .map(|row| {
            let row = row.map_err(|e| csv_err(path, e))?;
            Ok((format!("{}->{}", row.lower, row.upper), row.frequency_cm1))
        })
        .collect()
}

#[derive(Deserialize)]
struct SampleRow {
    frequency_cm1: f64,
    intensity: f64,
}

pub fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>, IoError> {
    let text = read_text(path)?;
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    check_header(path, r.headers().map_err(|e| csv_err(path, e))?, &SPECTRUM_HEADER)?;
    r.deserialize::<SampleRow>()
        .map(|row| {
            let row = row.map_err(|e| csv_err(path, e))?;
            Ok((row.frequency_cm1, row.intensity))
        })
        .collect()
}

/// Six significant digits for text tables.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mut mag = x.abs().log10().floor() as i32;
    // rounding can carry into the next decade, e.g. 0.9999999
    if format!("{:.*e}", 5, x.abs()).ends_with(&format!("e{}", mag + 1)) {
        mag += 1;
    }
    if !(-4..6).contains(&mag) {
        return format!("{x:.5e}");
    }
    format!("{:.*}", (5 - mag).max(0) as usize, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig6(11.793), "11.7930");
        assert_eq!(sig6(3206.0), "3206.00");
        assert_eq!(sig6(0.00123456789), "0.00123457");
        assert_eq!(sig6(1.2073e9), "1.20730e9");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(0.99999999), "1.00000");
    }

    #[test]
    fn atomic_write_and_peak_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/peaks.csv");
        write_atomic(&p, b"frequency_cm1,intensity,label\n3206,,(L1)1->(L1)1*\n3217,1.0,\n").unwrap();
        let peaks = read_peaks(&p).unwrap();
        assert_eq!(peaks.len(), 2);
        assert_eq!(peaks.peaks()[0].label.as_deref(), Some("(L1)1->(L1)1*"));
        assert_eq!(peaks.peaks()[1].label, None);
        assert_eq!(peaks.peaks()[1].intensity, Some(1.0));
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
        write_atomic(&p, b"frequency,label\n1,a\n").unwrap();
        assert!(read_peaks(&p).is_err());
    }
}
