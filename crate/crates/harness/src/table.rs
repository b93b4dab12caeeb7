//! Numeric tables and their CSV serialization.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};

/// Significant digits of every CSV float.
pub const CSV_DIGITS: usize = 9;

/// A named table of floats; undefined entries are NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_columns(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self { name: name.into(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width of table {}", self.name);
        self.rows.push(row);
    }

    pub fn is_time_series(&self) -> bool {
        self.columns.first().is_some_and(|c| c == "t")
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| HarnessError::config(format!("csv encoding of {}: {e}", self.name));
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format_significant(*x, CSV_DIGITS))).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| HarnessError::config(format!("csv buffer of {}: {e}", self.name)))
    }
}

/// `%.{digits}g`-style formatting: fixed notation for decimal exponents in
/// [−5, digits), scientific otherwise, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp: PathBuf = path.with_extension("partial");
    fs::write(&tmp, bytes).map_err(|e| HarnessError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| HarnessError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_significant(1.0, 9), "1");
        assert_eq!(format_significant(0.1, 9), "0.1");
        assert_eq!(format_significant(1.0 / 3.0, 9), "0.333333333");
        assert_eq!(format_significant(-2.0 / 3.0 * 1e-7, 9), "-6.66666667e-08");
        assert_eq!(format_significant(123456789.4, 9), "123456789");
        assert_eq!(format_significant(1234567890.0, 9), "1.23456789e+09");
        assert_eq!(format_significant(9.999999999, 9), "10");
        assert_eq!(format_significant(0.00012345, 9), "0.00012345");
        assert_eq!(format_significant(f64::NAN, 9), "NaN");
    }

    #[test]
    fn values_round_trip_to_nine_digits() {
        for &x in &[std::f64::consts::PI, -1e-300, 6.02214076e23, 0.999999999949] {
            let back: f64 = format_significant(x, 9).parse().unwrap();
            assert!((back - x).abs() <= 5e-9 * x.abs(), "{x} -> {back}");
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut t = Table::new("demo", &["t", "x"]);
        t.push(vec![0.0, 0.5]);
        t.push(vec![0.25, f64::NAN]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "t,x\n0,0.5\n0.25,NaN\n");
        assert!(t.is_time_series());
    }
}
