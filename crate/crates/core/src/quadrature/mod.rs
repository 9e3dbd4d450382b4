//! Deterministic quadrature on `[0, 1)`, on spheres, on the half line, and
//! log-log regression for decay exponents.
//!
//! All rules are composite Gauss–Legendre rules on dyadic panels graded
//! toward the singular end. Integrands receive the distance to that end
//! computed exactly from the panel geometry, so weights like `(1 − r)^α`
//! keep full relative precision as `r → 1`.

mod fit;
mod line;
mod radial;
mod sphere;

pub use fit::{fit_decay_exponent, geometric_gaps, DecayFit};
pub(crate) use fit::fit_samples;
pub use line::{integrate_half_line, HalfLineRule};
pub use radial::{integrate_radial, integrate_radial_gap, integrate_radial_interval, RadialRule};
pub use sphere::{integrate_sphere, SphereRule, ZonalRule};

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serializable description of a rule: enough to rebuild it exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDescriptor {
    pub dimension: usize,
    pub order: usize,
    pub depth: usize,
}

/// Gauss–Legendre nodes and weights on the reference panel `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussPanel {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussPanel {
    pub fn new(order: usize) -> Result<Self> {
        let degree = NonZeroUsize::new(order)
            .ok_or_else(|| Error::Domain("Gauss-Legendre order must be positive".into()))?;
        let rule = GaussLegendre::new(degree);
        let (nodes, weights) = rule.as_node_weight_pairs().iter().copied().unzip();
        Ok(GaussPanel { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Panels `[len·2^{-k-1}, len·2^{-k}]` for `k < depth`, ordered from the far
/// end inward, followed by the innermost cap `[0, len·2^{-depth}]`.
pub(crate) fn dyadic_panels(len: f64, depth: usize) -> Vec<(f64, f64)> {
    let mut panels = Vec::with_capacity(depth + 1);
    let mut hi = len;
    for _ in 0..depth {
        let lo = 0.5 * hi;
        panels.push((lo, hi));
        hi = lo;
    }
    panels.push((0.0, hi));
    panels
}

pub(crate) fn check_finite(node: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation { node, value })
    }
}
