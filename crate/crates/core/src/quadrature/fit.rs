use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Least-squares power law `value ≈ A (1 − ρ)^slope`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    /// `(1 − ρ, value)` pairs.
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

/// `n` gaps `1 − ρ` spaced geometrically from `largest` down to `smallest`.
pub fn geometric_gaps(largest: f64, smallest: f64, n: usize) -> Vec<f64> {
    let (a, b) = (largest.ln(), smallest.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Fits the exponent of `g` in the gap `1 − ρ`.
///
/// `g` is called with the gap itself so callers can keep `1 − ρ` exact.
/// Requires at least 8 gaps spanning two decades.
pub fn fit_decay_exponent<G: FnMut(f64) -> f64>(mut g: G, gaps: &[f64]) -> Result<DecayFit> {
    if gaps.len() < 8 {
        return domain(format!("need at least 8 grid points, got {}", gaps.len()));
    }
    let (lo, hi) = gaps.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &d| (lo.min(d), hi.max(d)));
    if !(lo > 0.0 && hi < 1.0 + 1e-15) || hi / lo < 100.0 * (1.0 - 1e-12) {
        return domain("gaps must lie in (0, 1] and span at least two decades");
    }
    let mut samples = Vec::with_capacity(gaps.len());
    for &d in gaps {
        let v = g(d);
        if !(v > 0.0 && v.is_finite()) {
            return domain(format!("non-positive sample {v} at gap {d}"));
        }
        samples.push((d, v));
    }
    Ok(fit_samples(samples))
}

pub(crate) fn fit_samples(samples: Vec<(f64, f64)>) -> DecayFit {
    let m = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|(d, _)| d.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, v)| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - intercept - slope * x;
            e * e
        })
        .sum();
    DecayFit { samples, slope, intercept, residual: (ss / m).sqrt() }
}
