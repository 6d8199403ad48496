//! Report serialization: JSON with stable field order, CSV with a header row.
//! Floats carry 6 significant digits.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};

/// A float rounded to 6 significant digits on construction, so that written
/// and re-parsed reports compare equal.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct F6(f64);

impl F6 {
    pub fn new(x: f64) -> Self {
        F6(round6(x))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<f64> for F6 {
    fn from(x: f64) -> Self {
        F6::new(x)
    }
}

impl From<F6> for f64 {
    fn from(x: F6) -> f64 {
        x.0
    }
}

impl std::fmt::Display for F6 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn round6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

pub fn f6s(xs: &[f64]) -> Vec<F6> {
    xs.iter().map(|&x| F6::new(x)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Row-oriented view of a report.
pub trait Tabular {
    fn header(&self) -> Vec<String>;
    fn rows(&self) -> Vec<Vec<String>>;
}

pub fn to_json<T: Serialize>(report: &T) -> AppResult<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| AppError::data(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv(table: &dyn Tabular) -> AppResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| AppError::data(e.to_string());
    w.write_record(table.header()).map_err(fail)?;
    for row in table.rows() {
        w.write_record(row).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| AppError::data(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render<T: Serialize + Tabular>(report: &T, format: Format) -> AppResult<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

/// Writes `text` to `out`, or to stdout without one.
pub fn emit(text: &str, out: Option<&Path>) -> AppResult<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
            }
            fs::write(p, text).map_err(|e| AppError::io(p, e))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| AppError::data(format!("stdout: {e}")))
        }
    }
}

pub fn write_report<T: Serialize + Tabular>(report: &T, format: Format, out: Option<&Path>) -> AppResult<()> {
    emit(&render(report, format)?, out)
}
