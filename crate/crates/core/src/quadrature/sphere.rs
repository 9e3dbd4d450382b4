use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::{check_finite, dyadic_panels, GaussPanel, RuleDescriptor};
use crate::error::{domain, Result};

/// Product rule on `S^{n-1}`, `n ∈ {2, 3}`, for the normalized measure
/// `σ(S) = 1`.
///
/// `S¹`: equispaced trapezoid. `S²`: Gauss–Legendre in `cos θ` times
/// equispaced `φ`. Exact on polynomials of degree `≤ degree`.
#[derive(Debug, Clone)]
pub struct SphereRule {
    dimension: usize,
    degree: usize,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl SphereRule {
    /// Smallest product rule exact through polynomial degree `degree`.
    pub fn new(dimension: usize, degree: usize) -> Result<Self> {
        match dimension {
            2 => {
                let m = degree + 1;
                let nodes = (0..m)
                    .map(|i| {
                        let th = 2.0 * PI * i as f64 / m as f64;
                        [th.cos(), th.sin(), 0.0]
                    })
                    .collect();
                Ok(SphereRule { dimension, degree, nodes, weights: vec![1.0 / m as f64; m] })
            }
            3 => {
                let rings = degree / 2 + 1;
                let m = degree + 1;
                let gl = GaussPanel::new(rings)?;
                let mut nodes = Vec::with_capacity(rings * m);
                let mut weights = Vec::with_capacity(rings * m);
                for (u, w) in gl.mapped(-1.0, 1.0) {
                    let s = (1.0 - u * u).sqrt();
                    for i in 0..m {
                        let ph = 2.0 * PI * i as f64 / m as f64;
                        nodes.push([s * ph.cos(), s * ph.sin(), u]);
                        weights.push(0.5 * w / m as f64);
                    }
                }
                Ok(SphereRule { dimension, degree, nodes, weights })
            }
            _ => domain(format!("sphere rules exist for n in {{2, 3}}, got {dimension}")),
        }
    }

    pub fn from_descriptor(d: &RuleDescriptor) -> Result<Self> {
        Self::new(d.dimension, d.order)
    }

    pub fn descriptor(&self) -> RuleDescriptor {
        RuleDescriptor { dimension: self.dimension, order: self.degree, depth: 0 }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Polynomial degree integrated exactly.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `∫_S f dσ` with `σ(S) = 1`.
pub fn integrate_sphere<F: Fn(&[f64; 3]) -> f64>(f: F, rule: &SphereRule) -> Result<f64> {
    let mut total = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(x);
        if !v.is_finite() {
            return Err(crate::Error::Evaluation { node: x[0], value: v });
        }
        total += w * v;
    }
    Ok(total)
}

/// Rule for functions on `S^{n-1}` depending only on `u = x'·e`.
///
/// Uses `∫_S h(x'·e) dσ = c_n ∫₀^π h(cos θ) sin^{n-2} θ dθ` with dyadic
/// panels in `θ` graded toward `θ = 0`, where kernels centred at `e` peak.
/// The integrand receives `(u, 1 − u, sin θ)`, all computed from `θ`.
#[derive(Debug, Clone)]
pub struct ZonalRule {
    dimension: usize,
    panel: GaussPanel,
    depth: usize,
    norm: f64,
}

impl ZonalRule {
    pub fn new(dimension: usize, order: usize, depth: usize) -> Result<Self> {
        if dimension < 2 {
            return domain(format!("zonal rule needs n >= 2, got {dimension}"));
        }
        let h = dimension as f64 / 2.0;
        let norm = (ln_gamma(h) - 0.5 * PI.ln() - ln_gamma(h - 0.5)).exp();
        Ok(ZonalRule { dimension, panel: GaussPanel::new(order)?, depth, norm })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn descriptor(&self) -> RuleDescriptor {
        RuleDescriptor { dimension: self.dimension, order: self.panel.order(), depth: self.depth }
    }

    pub fn refined(&self) -> Result<Self> {
        Self::new(self.dimension, 2 * self.panel.order(), self.depth + 4)
    }

    /// All `(u, 1 − u, sin θ, weight)` quadruples of the rule.
    pub fn points(&self) -> Vec<(f64, f64, f64, f64)> {
        let mut out = Vec::new();
        let pow = (self.dimension - 2) as i32;
        for (a, b) in dyadic_panels(PI, self.depth) {
            for (th, w) in self.panel.mapped(a, b) {
                let half = (0.5 * th).sin();
                let s = th.sin();
                out.push((th.cos(), 2.0 * half * half, s, self.norm * w * s.powi(pow)));
            }
        }
        out
    }

    pub fn integrate<F: Fn(f64, f64, f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut total = 0.0;
        for (u, v, s, w) in self.points() {
            total += w * check_finite(u, f(u, v, s))?;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_mass() {
        for n in [2, 3] {
            let rule = SphereRule::new(n, 10).unwrap();
            assert_relative_eq!(integrate_sphere(|_| 1.0, &rule).unwrap(), 1.0, max_relative = 1e-14);
            for x in rule.nodes() {
                let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                assert!((norm - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn second_moments() {
        let rule = SphereRule::new(3, 4).unwrap();
        let v = integrate_sphere(|x| x[0] * x[0], &rule).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0, max_relative = 1e-14);
        let rule = SphereRule::new(2, 4).unwrap();
        let v = integrate_sphere(|x| x[1] * x[1], &rule).unwrap();
        assert_relative_eq!(v, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn unsupported_dimension() {
        assert!(SphereRule::new(4, 4).is_err());
    }

    #[test]
    fn zonal_rule_moments() {
        for n in [2, 3, 5] {
            let rule = ZonalRule::new(n, 12, 20).unwrap();
            assert_relative_eq!(rule.integrate(|_, _, _| 1.0).unwrap(), 1.0, max_relative = 1e-13);
            // E[u²] = 1/n on S^{n-1}
            let m2 = rule.integrate(|u, _, _| u * u).unwrap();
            assert_relative_eq!(m2, 1.0 / n as f64, max_relative = 1e-12);
        }
    }

    #[test]
    fn zonal_rule_resolves_a_sharp_peak() {
        // Poisson kernel in n = 3 at t = 1 − 1e-6 has unit mass
        let rule = ZonalRule::new(3, 12, 48).unwrap();
        let g = 1e-6;
        let t = 1.0 - g;
        let v = rule
            .integrate(|_, v, _| {
                let q = g * g + 2.0 * t * v;
                g * (2.0 - g) / q.powf(1.5)
            })
            .unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-9);
    }
}
