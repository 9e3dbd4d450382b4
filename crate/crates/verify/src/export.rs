//! Byte-stable JSON and CSV renderings of verification reports.
//!
//! JSON keys follow struct order and sorted maps; floats use the shortest
//! representation that round-trips. CSV has the columns
//! `suite, case_id, value, expected, tol, verdict`.

use std::io::Write;
use std::path::Path;

use harmspace::report::VerificationReport;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VerifyError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn to_json(report: &VerificationReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| VerifyError::Format(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn from_json(text: &str) -> Result<VerificationReport> {
    serde_json::from_str(text).map_err(|e| VerifyError::Format(format!("not a report: {e}")))
}

/// Shortest round-trip decimal; non-finite values as `inf`, `-inf`, `nan`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:?}")
    }
}

pub fn parse_float(s: &str) -> Result<f64> {
    match s {
        "nan" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        _ => s.parse().map_err(|_| VerifyError::Format(format!("not a number: {s}"))),
    }
}

/// One CSV line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub suite: String,
    pub case_id: String,
    pub value: String,
    pub expected: String,
    pub tol: String,
    pub verdict: String,
}

pub fn to_csv(report: &VerificationReport) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for c in &report.cases {
        w.serialize(CsvRow {
            suite: report.suite.clone(),
            case_id: c.case_id.clone(),
            value: format_float(c.value),
            expected: format_float(c.expected),
            tol: format_float(c.tol),
            verdict: if c.pass { "pass" } else { "fail" }.into(),
        })
        .map_err(|e| VerifyError::Format(e.to_string()))?;
    }
    if report.cases.is_empty() {
        w.write_record(["suite", "case_id", "value", "expected", "tol", "verdict"])
            .map_err(|e| VerifyError::Format(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| VerifyError::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| VerifyError::Format(e.to_string()))
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| VerifyError::Format(e.to_string()))
}

pub fn render(report: &VerificationReport, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
    }
}

/// Writes to `path`, or to standard output when it is `None`.
pub fn export_report(report: &VerificationReport, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| VerifyError::io(p, e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| VerifyError::io("<stdout>", e)),
    }
}

pub fn import_report(path: &Path) -> Result<VerificationReport> {
    let text = std::fs::read_to_string(path).map_err(|e| VerifyError::io(path, e))?;
    from_json(&text)
}
