//! Suite configuration: JSON documents whose empty grids fall back to the
//! suite defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, VerifyError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Small grids, minutes in total.
    #[default]
    Desk,
    /// Larger grids and more random cases.
    Heavy,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub tier: Tier,
    /// Dimensions `n`.
    pub n: Vec<usize>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub delta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub s: Vec<f64>,
    pub m: Vec<f64>,
    pub t: Vec<f64>,
    pub eps: Vec<f64>,
    /// Gauss order of the main rule.
    pub order: Option<usize>,
    /// Expansion degree or truncation.
    pub degree: Option<usize>,
    pub tol: Option<f64>,
    /// Bound asserted on empirical constants.
    pub bound: Option<f64>,
    /// Number of random cases.
    pub cases: Option<usize>,
}

impl SuiteConfig {
    pub fn new(suite: &str) -> Self {
        SuiteConfig { suite: suite.to_string(), ..Default::default() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| VerifyError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| VerifyError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn heavy(&self) -> bool {
        self.tier == Tier::Heavy
    }
}

/// `given` unless empty.
pub(crate) fn grid<T: Clone>(given: &[T], default: &[T]) -> Vec<T> {
    if given.is_empty() {
        default.to_vec()
    } else {
        given.to_vec()
    }
}

/// Fails with a config error naming the violated constraint.
pub(crate) fn require(ok: bool, suite: &str, constraint: &str, got: impl std::fmt::Display) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(VerifyError::Config(format!("{suite}: requires {constraint}, got {got}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_partial_documents() {
        let c = SuiteConfig::from_json(r#"{"suite": "rro", "alpha": [0.5], "tier": "heavy"}"#).unwrap();
        assert_eq!(c.alpha, vec![0.5]);
        assert!(c.heavy());
        assert!(c.beta.is_empty());
        assert!(SuiteConfig::from_json(r#"{"suite": "rro", "alhpa": [1]}"#).is_err());
    }

    #[test]
    fn require_names_the_constraint() {
        let e = require(false, "rro", "lambda > alpha + 1", "lambda = 1").unwrap_err();
        assert!(e.to_string().contains("lambda > alpha + 1"));
    }
}
