//! Deterministic JSON and CSV artifacts.
//!
//! Reals are written in shortest round-trip form (Rust's `Display` for CSV,
//! ryu through serde_json for JSON), keys in declaration order, and every
//! file ends in a newline, so equal reports give byte-identical files.

use crate::divisor::CorrelationRecord;
use crate::empirical::{AfeCheck, MomentReport};
use crate::error::{Error, Result};
use crate::momofmom::MoMReport;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Anything that can be laid out as a CSV table.
pub trait Table {
    fn header(&self) -> &'static str;
    fn rows(&self) -> Vec<String>;
}

impl Table for MomentReport {
    fn header(&self) -> &'static str {
        MomentReport::CSV_HEADER
    }
    fn rows(&self) -> Vec<String> {
        vec![self.csv_row()]
    }
}

impl Table for MoMReport {
    fn header(&self) -> &'static str {
        MoMReport::CSV_HEADER
    }
    fn rows(&self) -> Vec<String> {
        vec![self.csv_row()]
    }
}

impl Table for AfeCheck {
    fn header(&self) -> &'static str {
        "t,delta,Q,lhs,rhs,rel_err,truncation"
    }
    fn rows(&self) -> Vec<String> {
        vec![format!("{},{},{},{},{},{},{}", self.t, self.delta, self.q, self.lhs, self.rhs, self.rel_err, self.truncation)]
    }
}

impl Table for Vec<CorrelationRecord> {
    fn header(&self) -> &'static str {
        CorrelationRecord::CSV_HEADER
    }
    fn rows(&self) -> Vec<String> {
        self.iter().map(CorrelationRecord::csv_row).collect()
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Io(format!("json: {e}")))
}

pub fn to_csv_string<T: Table + ?Sized>(table: &T) -> String {
    let mut s = String::from(table.header());
    s.push('\n');
    for row in table.rows() {
        s.push_str(&row);
        s.push('\n');
    }
    s
}

/// Writes `<stem>.json` and `<stem>.csv`, creating the parent directory.
pub fn write_report<T: Serialize + Table>(report: &T, stem: &Path) -> Result<(PathBuf, PathBuf)> {
    if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let json = with_ext(stem, "json");
    let csv = with_ext(stem, "csv");
    std::fs::write(&json, to_json_string(report)?)?;
    std::fs::write(&csv, to_csv_string(report))?;
    Ok((json, csv))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json_str(&std::fs::read_to_string(path)?)
}

// `with_extension` would eat a dotted stem like `run.v2`
fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momofmom::{m22_formula, AveragingKernel};

    fn record(r: u64) -> CorrelationRecord {
        CorrelationRecord { x: 1000, r, sum: 12345, main: 12000.25, error: 344.75, normalized_error: 0.1 + 0.2 }
    }

    #[test]
    fn byte_identical_and_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let rep = m22_formula(1e4, &AveragingKernel::indicator(std::f64::consts::PI).unwrap()).unwrap();
        let (j1, c1) = write_report(&rep, &dir.path().join("a")).unwrap();
        let (j2, c2) = write_report(&rep, &dir.path().join("b")).unwrap();
        assert_eq!(std::fs::read(&j1).unwrap(), std::fs::read(&j2).unwrap());
        assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
        let back: MoMReport = read_json(&j1).unwrap();
        assert_eq!(back, rep);
        assert!(std::fs::read_to_string(&c1).unwrap().ends_with('\n'));
    }

    #[test]
    fn empty_records_give_header_only() {
        let empty: Vec<CorrelationRecord> = Vec::new();
        assert_eq!(to_csv_string(&empty), format!("{}\n", CorrelationRecord::CSV_HEADER));
    }

    #[test]
    fn shortest_round_trip_reals() {
        let recs = vec![record(1), record(42)];
        let csv = to_csv_string(&recs);
        assert!(csv.contains(",0.30000000000000004\n"));
        let back: Vec<CorrelationRecord> = from_json_str(&to_json_string(&recs).unwrap()).unwrap();
        assert_eq!(back, recs);
    }

    #[test]
    fn dotted_stem_keeps_its_name() {
        let dir = tempfile::tempdir().unwrap();
        let (j, c) = write_report(&vec![record(5)], &dir.path().join("sub/run.v2")).unwrap();
        assert!(j.ends_with("run.v2.json") && c.ends_with("run.v2.csv"));
    }
}
