//! File formats: PDP and empirical-spectrum CSV input, spectrum/sweep CSV
//! and JSON report output.
//!
//! | file            | columns                          |
//! |-----------------|----------------------------------|
//! | PDP input       | `delay_us, power` (linear)       |
//! | empirical input | `angle_deg, density_per_deg`     |
//! | `spectrum.csv`  | `angle_deg, pdf_per_deg`         |
//! | `sweep.csv`     | `hpbw_deg, as_deg`               |
//!
//! A header row is optional on input.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimation::AngularSpectrum;
use crate::experiment::{RunReport, ScenarioConfig, SweepPoint};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut s))
        .map_err(|e| io_err(path, e))?;
    Ok(s)
}

pub fn read_scenario(path: &Path) -> Result<ScenarioConfig> {
    ScenarioConfig::from_json(&read_to_string(path)?)
}

/// Two-column numeric CSV; a leading non-numeric row is taken as a header.
pub fn parse_two_column_csv<R: Read>(reader: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() < 2 {
            return Err(Error::param("csv", format!("row {} has fewer than two columns", line + 1)));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(a), Ok(b)) => rows.push((a, b)),
            _ if line == 0 => continue,
            _ => {
                return Err(Error::param(
                    "csv",
                    format!("row {}: cannot parse `{}`, `{}`", line + 1, &record[0], &record[1]),
                ))
            }
        }
    }
    Ok(rows)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| io_err(path, e))
}

/// PDP samples as `(delay_s, linear_power)`.
pub fn read_pdp_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    Ok(parse_two_column_csv(open(path)?)?
        .into_iter()
        .map(|(us, p)| (us * 1e-6, p))
        .collect())
}

/// Empirical spectrum as `(angle_rad, density_per_rad)`.
pub fn read_empirical_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    Ok(empirical_from_degrees(parse_two_column_csv(open(path)?)?))
}

pub fn empirical_from_degrees(rows: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    rows.into_iter()
        .map(|(deg, per_deg)| (deg.to_radians(), per_deg.to_degrees()))
        .collect()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

fn ensure_normalized(spectrum: &AngularSpectrum) -> Result<()> {
    if spectrum.is_normalized() {
        Ok(())
    } else {
        Err(Error::Unnormalized(spectrum.total_probability()))
    }
}

/// Writes `angle_deg,pdf_per_deg` at the bin centres. Refuses spectra whose
/// total probability is not one.
pub fn write_spectrum_csv(path: &Path, spectrum: &AngularSpectrum) -> Result<()> {
    ensure_normalized(spectrum)?;
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["angle_deg", "pdf_per_deg"])?;
    for (angle, pdf) in spectrum.degree_rows() {
        w.serialize((angle, pdf))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Writes `hpbw_deg,as_deg`; `raw_paths` selects the path-level spread
/// instead of the binned one.
pub fn write_sweep_csv(path: &Path, points: &[SweepPoint], raw_paths: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["hpbw_deg", "as_deg"])?;
    for p in points {
        let spread = if raw_paths {
            p.report.raw_path_angle_spread.to_degrees()
        } else {
            p.angle_spread_deg()
        };
        w.serialize((p.hpbw_deg, spread))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| io_err(path, e))
}

pub fn write_report_json(path: &Path, report: &RunReport) -> Result<()> {
    ensure_normalized(&report.averaged_spectrum)?;
    write_json(path, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_optional() {
        let with = parse_two_column_csv("angle_deg, density_per_deg\n-10, 0.01\n10, 0.02\n".as_bytes()).unwrap();
        let without = parse_two_column_csv("-10,0.01\n10,0.02\n".as_bytes()).unwrap();
        assert_eq!(with, without);
        assert_eq!(with, vec![(-10.0, 0.01), (10.0, 0.02)]);
        assert!(parse_two_column_csv("a,b\n1,x\n".as_bytes()).is_err());
        assert!(parse_two_column_csv("1\n".as_bytes()).is_err());
    }

    #[test]
    fn empirical_units() {
        let rows = empirical_from_degrees(vec![(180.0, 1.0 / 360.0)]);
        assert!((rows[0].0 - std::f64::consts::PI).abs() < 1e-15);
        assert!((rows[0].1 - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn spectrum_writer_refuses_unnormalized() {
        let dir = tempfile::tempdir().unwrap();
        let bad = AngularSpectrum {
            density: vec![1.0; 10],
            point_mass: 0.0,
            sample_count: 1,
        };
        assert!(matches!(
            write_spectrum_csv(&dir.path().join("s.csv"), &bad),
            Err(Error::Unnormalized(_))
        ));
        let good = AngularSpectrum {
            density: vec![1.0 / (2.0 * std::f64::consts::PI); 10],
            ..bad
        };
        let path = dir.path().join("s.csv");
        write_spectrum_csv(&path, &good).unwrap();
        let text = read_to_string(&path).unwrap();
        assert!(text.starts_with("angle_deg,pdf_per_deg\n-162.0,"));
        assert_eq!(text.lines().count(), 11);
    }
}
