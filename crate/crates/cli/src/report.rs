//! JSON and CSV rendering. Floats carry 12 significant digits, exact
//! rationals are `"p/q"` strings, complex matrices are rows of `[re, im]`.

use std::io::Write;

use qinfo_core::linalg::{CMat, Projection, ProjectionPartition};
use qinfo_core::rational::{self, Rational};
use serde_json::{json, Value};

use crate::error::CliError;

pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A float at 12 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round12(x))
    } else if x.is_nan() {
        json!("NaN")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn rat(r: &Rational) -> Value {
    Value::String(rational::format(r))
}

pub fn matrix(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([num(m[(i, j)].re), num(m[(i, j)].im)])).collect()))
            .collect(),
    )
}

/// Full-precision matrix for the oracle wire format.
pub fn matrix_exact(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

pub fn projection(p: &Projection) -> Value {
    json!({ "rank": p.rank(), "matrix": matrix(p.matrix()) })
}

/// `{"dim": d, "blocks": [matrix, …]}`, the subprocess oracle request.
pub fn partition_request(p: &ProjectionPartition) -> Value {
    json!({ "dim": p.dim(), "blocks": p.blocks().iter().map(|b| matrix_exact(b.matrix())).collect::<Vec<_>>() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Result of a command: a JSON document, an optional CSV table and the exit
/// code to use after printing.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub table: Vec<Vec<String>>,
    pub exit: u8,
}

impl Output {
    pub fn new(json: Value, table: Vec<Vec<String>>) -> Self {
        Self { json, table, exit: 0 }
    }

    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
        s.push('\n');
        s
    }

    pub fn csv_text(&self) -> Result<String, CliError> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        for row in &self.table {
            w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => Ok(self.json_text()),
            Format::Csv => self.csv_text(),
        }
    }

    /// Writes `<prefix>.json` and `<prefix>.csv`.
    pub fn write_files(&self, prefix: &str) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Io(format!("{prefix}: {e}"));
        std::fs::File::create(format!("{prefix}.json")).and_then(|mut f| f.write_all(self.json_text().as_bytes())).map_err(io)?;
        let csv = self.csv_text()?;
        std::fs::File::create(format!("{prefix}.csv")).and_then(|mut f| f.write_all(csv.as_bytes())).map_err(io)?;
        Ok(())
    }
}

pub fn cell(x: f64) -> String {
    num(x).to_string().trim_matches('"').to_string()
}
