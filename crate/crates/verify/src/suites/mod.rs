//! The verification suites. Each takes a [`SuiteConfig`], fills in its
//! defaults, checks parameter ranges and returns a report whose config
//! echo reproduces the run.

pub mod distance;
pub mod exponents;
pub mod identities;
pub mod multipliers;
pub mod reproduction;
pub mod wellkn;

use harmspace::harmonic_fn::{CoefficientField, HarmonicFunction};
use harmspace::quadrature::DecayFit;
use harmspace::report::{CaseResult, VerificationReport};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::SuiteConfig;
use crate::error::Result;

/// Independent stream `stream` of the run seed.
pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform point on `S^{n-1}` by rejection from the cube.
pub(crate) fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let r2: f64 = v.iter().map(|c| c * c).sum();
        if r2 > 1e-4 && r2 <= 1.0 {
            let r = r2.sqrt();
            return v.into_iter().map(|c| c / r).collect();
        }
    }
}

/// Harmonic polynomial with coefficients uniform on `[−1, 1]`.
pub(crate) fn random_polynomial(rng: &mut ChaCha8Rng, n: usize, degree: usize) -> Result<HarmonicFunction> {
    let c = CoefficientField::from_fn(n, degree, |_, _| rng.random_range(-1.0..=1.0))?;
    Ok(HarmonicFunction::new(c)?)
}

pub(crate) fn slope_case(id: String, fit: &DecayFit, expected: f64, tol: f64) -> CaseResult {
    CaseResult::absolute(id, fit.slope, expected, tol)
        .with_input("samples", &fit.samples)
        .with_input("residual", fit.residual)
}

/// Report with the resolved config echoed.
pub(crate) fn report(cfg: &SuiteConfig, anchor: &str, resolved: &impl Serialize) -> VerificationReport {
    let mut r = VerificationReport::new(cfg.suite.clone(), anchor, cfg.seed);
    r.config = serde_json::to_value(resolved).unwrap_or_default();
    r
}
