//! Structured verification results.
//!
//! A report carries every per-case number needed to recompute its verdict.
//! Non-finite floats are written as the strings `"inf"`, `"-inf"` and
//! `"nan"` so reports stay valid JSON and round-trip exactly.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

/// How a case's value is compared with its expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|value − expected| ≤ tol · max(|expected|, tiny)`.
    Relative,
    /// `|value − expected| ≤ tol`.
    Absolute,
    /// `value ≤ expected + tol`.
    AtMost,
    /// `value ≥ expected − tol`.
    AtLeast,
    /// `value` is finite; `expected` and `tol` are informational.
    Finite,
}

impl Comparison {
    pub fn holds(self, value: f64, expected: f64, tol: f64) -> bool {
        match self {
            Comparison::Relative => {
                let scale = expected.abs().max(f64::MIN_POSITIVE);
                (value - expected).abs() <= tol * scale
            }
            Comparison::Absolute => (value - expected).abs() <= tol,
            Comparison::AtMost => value <= expected + tol,
            Comparison::AtLeast => value >= expected - tol,
            Comparison::Finite => value.is_finite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case_id: String,
    #[serde(with = "float")]
    pub value: f64,
    #[serde(with = "float")]
    pub expected: f64,
    #[serde(with = "float")]
    pub tol: f64,
    pub comparison: Comparison,
    pub pass: bool,
    /// Inputs that reproduce the case.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, serde_json::Value>,
}

impl CaseResult {
    pub fn new(case_id: impl Into<String>, value: f64, expected: f64, tol: f64, comparison: Comparison) -> Self {
        CaseResult {
            case_id: case_id.into(),
            value,
            expected,
            tol,
            comparison,
            pass: comparison.holds(value, expected, tol),
            inputs: BTreeMap::new(),
        }
    }

    pub fn relative(id: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        Self::new(id, value, expected, tol, Comparison::Relative)
    }

    pub fn absolute(id: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        Self::new(id, value, expected, tol, Comparison::Absolute)
    }

    pub fn at_most(id: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(id, value, bound, 0.0, Comparison::AtMost)
    }

    pub fn at_least(id: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(id, value, bound, 0.0, Comparison::AtLeast)
    }

    pub fn with_input(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.inputs.insert(key.to_string(), v);
        self
    }

    /// Verdict recomputed from the recorded numbers.
    pub fn recomputed(&self) -> bool {
        self.comparison.holds(self.value, self.expected, self.tol)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub anchor: String,
    #[serde(default)]
    pub config: serde_json::Value,
    pub seed: u64,
    pub cases: Vec<CaseResult>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub verdict: bool,
    /// Wall-clock time; kept out of serialized reports so that they are
    /// byte-identical across runs.
    #[serde(skip)]
    pub timing: Option<Duration>,
}

impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        self.suite == other.suite
            && self.anchor == other.anchor
            && self.config == other.config
            && self.seed == other.seed
            && self.cases == other.cases
            && self.metadata == other.metadata
            && self.verdict == other.verdict
    }
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, anchor: impl Into<String>, seed: u64) -> Self {
        VerificationReport {
            suite: suite.into(),
            anchor: anchor.into(),
            config: serde_json::Value::Null,
            seed,
            cases: Vec::new(),
            metadata: BTreeMap::new(),
            verdict: true,
            timing: None,
        }
    }

    pub fn push(&mut self, case: CaseResult) {
        self.verdict &= case.pass;
        self.cases.push(case);
    }

    pub fn extend(&mut self, cases: impl IntoIterator<Item = CaseResult>) {
        for c in cases {
            self.push(c);
        }
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.metadata.insert(key.to_string(), v);
    }

    /// Verdict recomputed from the cases alone.
    pub fn recomputed_verdict(&self) -> bool {
        self.cases.iter().all(CaseResult::recomputed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

/// Serde adapter writing non-finite floats as strings.
pub mod float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparisons() {
        assert!(Comparison::Relative.holds(1.0 + 1e-9, 1.0, 1e-8));
        assert!(!Comparison::Relative.holds(1.1, 1.0, 1e-8));
        assert!(Comparison::AtMost.holds(0.5, 1.0, 0.0));
        assert!(Comparison::AtLeast.holds(1.5, 1.0, 0.0));
        assert!(!Comparison::Finite.holds(f64::INFINITY, 0.0, 0.0));
    }

    #[test]
    fn non_finite_values_round_trip() {
        let mut r = VerificationReport::new("s", "a", 7);
        r.push(CaseResult::new("c", f64::INFINITY, 1.0, 0.0, Comparison::Finite));
        let text = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert!(!back.verdict);
        assert_eq!(back.recomputed_verdict(), back.verdict);
    }
}
