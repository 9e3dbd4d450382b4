use serde::{Deserialize, Serialize};

use super::{check_finite, dyadic_panels, GaussPanel, RuleDescriptor};
use crate::error::{domain, Result};

/// Composite Gauss–Legendre rule on `[0, 1)` with panels
/// `[1 − 2^{-k}, 1 − 2^{-k-1}]` for `k < depth`.
///
/// The region `[1 − 2^{-depth}, 1)` is never sampled by the weighted
/// integrators: it is closed analytically assuming the integrand behaves
/// like `(1 − r)^{-growth}` there. The stored node list covers it with one
/// ordinary panel so that plain sums over `nodes()` integrate smooth
/// functions on the whole interval.
#[derive(Debug, Clone)]
pub struct RadialRule {
    panel: GaussPanel,
    depth: usize,
    growth: f64,
    nodes: Vec<f64>,
    gaps: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialNode {
    pub r: f64,
    /// `1 − r`, exact to rounding of the panel map.
    pub gap: f64,
    pub weight: f64,
}

impl RadialRule {
    pub fn new(order: usize, depth: usize) -> Result<Self> {
        Self::with_growth(order, depth, 0.0)
    }

    /// Rule whose analytic endpoint cap assumes `|f(r)| ~ (1 − r)^{-growth}`.
    pub fn with_growth(order: usize, depth: usize, growth: f64) -> Result<Self> {
        if depth == 0 || depth > 60 {
            return domain(format!("radial depth must be in 1..=60, got {depth}"));
        }
        let panel = GaussPanel::new(order)?;
        let mut nodes = Vec::new();
        let mut gaps = Vec::new();
        let mut weights = Vec::new();
        for (lo, hi) in dyadic_panels(1.0, depth) {
            for (s, w) in panel.mapped(lo, hi) {
                nodes.push(1.0 - s);
                gaps.push(s);
                weights.push(w);
            }
        }
        Ok(RadialRule { panel, depth, growth, nodes, gaps, weights })
    }

    /// Depth chosen so the analytic cap carries a share below `tol` of a
    /// weight `(1 − r)^alpha` integrand with the declared endpoint growth.
    pub fn for_weight(order: usize, alpha: f64, growth: f64, tol: f64) -> Result<Self> {
        let e = alpha - growth + 1.0;
        if e <= 0.0 {
            return domain(format!(
                "weight exponent {alpha} with endpoint growth {growth} is not integrable"
            ));
        }
        // cap error is O(h^{e+1}) relative to the leading behaviour
        let depth = ((-tol.log2()) / (e + 1.0)).ceil().clamp(8.0, 60.0) as usize;
        Self::with_growth(order, depth, growth)
    }

    pub fn from_descriptor(d: &RuleDescriptor) -> Result<Self> {
        Self::new(d.order, d.depth)
    }

    pub fn descriptor(&self) -> RuleDescriptor {
        RuleDescriptor { dimension: 1, order: self.panel.order(), depth: self.depth }
    }

    pub fn order(&self) -> usize {
        self.panel.order()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn growth(&self) -> f64 {
        self.growth
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Interior nodes (excluding the endpoint cap), with exact gaps.
    pub fn interior(&self) -> impl Iterator<Item = RadialNode> + '_ {
        let m = self.depth * self.panel.order();
        (0..m).map(move |i| RadialNode { r: self.nodes[i], gap: self.gaps[i], weight: self.weights[i] })
    }

    /// Width of the analytically closed endpoint cap.
    pub fn cap(&self) -> f64 {
        0.5f64.powi(self.depth as i32)
    }

    /// Same rule with twice the Gauss order and one more dyadic level.
    pub fn refined(&self) -> Result<Self> {
        Self::with_growth(2 * self.order(), (self.depth + 1).min(60), self.growth)
    }

    /// Nodes and weights of `∫₀¹ f(r) (1 − r)^alpha dr`, the weight factor
    /// included. The endpoint cap contributes one node at its midpoint.
    pub fn weighted_points(&self, alpha: f64) -> Result<Vec<RadialNode>> {
        if alpha <= -1.0 {
            return domain(format!("weight exponent must exceed -1, got {alpha}"));
        }
        let mut out: Vec<RadialNode> = self
            .interior()
            .map(|p| RadialNode { weight: p.weight * p.gap.powf(alpha), ..p })
            .collect();
        let e = alpha - self.growth + 1.0;
        if e <= 0.0 {
            return domain(format!(
                "weight exponent {alpha} with endpoint growth {} is not integrable",
                self.growth
            ));
        }
        let h = self.cap();
        let sm = 0.5 * h;
        out.push(RadialNode { r: 1.0 - sm, gap: sm, weight: sm.powf(self.growth) * h.powf(e) / e });
        Ok(out)
    }
}

/// `∫₀¹ f(r) (1 − r)^alpha dr`.
pub fn integrate_radial<F: Fn(f64) -> f64>(f: F, alpha: f64, rule: &RadialRule) -> Result<f64> {
    integrate_radial_gap(|r, _| f(r), alpha, rule)
}

/// As [`integrate_radial`], with the integrand also receiving `1 − r`.
pub fn integrate_radial_gap<F: Fn(f64, f64) -> f64>(
    f: F,
    alpha: f64,
    rule: &RadialRule,
) -> Result<f64> {
    integrate_radial_interval(f, alpha, 0.0, 1.0, rule)
}

/// `∫_lo^hi f(r, 1 − r) (1 − r)^alpha dr` for `0 ≤ lo < hi ≤ 1`, on the
/// rule's dyadic panels cut to the interval.
pub fn integrate_radial_interval<F: Fn(f64, f64) -> f64>(
    f: F,
    alpha: f64,
    lo: f64,
    hi: f64,
    rule: &RadialRule,
) -> Result<f64> {
    if alpha <= -1.0 {
        return domain(format!("weight exponent must exceed -1, got {alpha}"));
    }
    if !(0.0..=1.0).contains(&lo) || !(lo..=1.0).contains(&hi) {
        return domain(format!("invalid radial interval [{lo}, {hi}]"));
    }
    if hi <= lo {
        return Ok(0.0);
    }
    // work in s = 1 − r
    let s_lo = 1.0 - hi;
    let s_hi = 1.0 - lo;
    let cap = rule.cap();
    let mut total = 0.0;
    let mut panels = dyadic_panels(1.0, rule.depth);
    let cap_panel = panels.pop();
    for (a, b) in panels {
        let a = a.max(s_lo);
        let b = b.min(s_hi);
        if b <= a {
            continue;
        }
        for (s, w) in rule.panel.mapped(a, b) {
            let v = check_finite(1.0 - s, f(1.0 - s, s))?;
            total += w * v * s.powf(alpha);
        }
    }
    if let Some((_, cap_hi)) = cap_panel {
        let b = cap_hi.min(s_hi);
        if s_lo < cap && b > s_lo {
            if s_lo > 0.0 {
                // interval ends strictly inside: ordinary panel
                for (s, w) in rule.panel.mapped(s_lo, b) {
                    let v = check_finite(1.0 - s, f(1.0 - s, s))?;
                    total += w * v * s.powf(alpha);
                }
            } else {
                total += endpoint_cap(&f, alpha, rule.growth, b)?;
            }
        }
    }
    Ok(total)
}

/// `∫₀^h f s^alpha ds` assuming `f ≈ A s^{-g}` near `s = 0`, with `A`
/// read off at `s = h / 2`.
fn endpoint_cap<F: Fn(f64, f64) -> f64>(f: &F, alpha: f64, growth: f64, h: f64) -> Result<f64> {
    let e = alpha - growth + 1.0;
    if e <= 0.0 {
        return domain(format!(
            "weight exponent {alpha} with endpoint growth {growth} is not integrable"
        ));
    }
    let sm = 0.5 * h;
    let v = check_finite(1.0 - sm, f(1.0 - sm, sm))?;
    Ok(v * sm.powf(growth) * h.powf(e) / e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::half_beta;
    use approx::assert_relative_eq;

    #[test]
    fn unit_constant() {
        let rule = RadialRule::new(16, 40).unwrap();
        let v = integrate_radial(|_| 1.0, 0.0, &rule).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-14);
        let w: f64 = rule.weights().iter().sum();
        assert!((w - 1.0).abs() < 1e-12);
        assert!(rule.nodes().iter().all(|&r| (0.0..1.0).contains(&r)));
        assert!(rule.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn gamma_integral_example() {
        // ∫₀¹ (1 − r²) r dr = 0.25 with (1 − r²) = (1 − r)(1 + r)
        let rule = RadialRule::new(16, 40).unwrap();
        let v = integrate_radial(|r| (1.0 + r) * r, 1.0, &rule).unwrap();
        assert_relative_eq!(v, 0.25, max_relative = 1e-13);
        assert_relative_eq!(v, half_beta(1.0, 0.0, 2.0), max_relative = 1e-13);
    }

    #[test]
    fn singular_weight() {
        // ∫₀¹ (1 − r)^{-1/2} dr = 2
        let rule = RadialRule::for_weight(16, -0.5, 0.0, 1e-14).unwrap();
        let v = integrate_radial(|_| 1.0, -0.5, &rule).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn declared_growth_is_integrated() {
        // ∫₀¹ (1 − r)^{0.5} (1 − r)^{-1.2} dr = 1 / 0.3
        let rule = RadialRule::for_weight(16, 0.5, 1.2, 1e-13).unwrap();
        let v = integrate_radial_gap(|_, s| s.powf(-1.2), 0.5, &rule).unwrap();
        assert_relative_eq!(v, 1.0 / 0.3, max_relative = 1e-10);
    }

    #[test]
    fn sub_interval() {
        let rule = RadialRule::new(12, 30).unwrap();
        let v = integrate_radial_interval(|r, _| r, 0.0, 0.25, 0.75, &rule).unwrap();
        assert_relative_eq!(v, 0.25, max_relative = 1e-13);
        let v = integrate_radial_interval(|_, _| 1.0, 1.0, 0.5, 1.0, &rule).unwrap();
        assert_relative_eq!(v, 0.125, max_relative = 1e-13);
    }

    #[test]
    fn errors() {
        let rule = RadialRule::new(8, 10).unwrap();
        assert!(matches!(
            integrate_radial(|_| 1.0, -1.0, &rule),
            Err(crate::Error::Domain(_))
        ));
        let e = integrate_radial(|r| if r > 0.9 { f64::NAN } else { 1.0 }, 0.0, &rule);
        assert!(matches!(e, Err(crate::Error::Evaluation { node, .. }) if node > 0.9));
    }

    #[test]
    fn weighted_points_agree_with_integrator() {
        let rule = RadialRule::with_growth(12, 30, 0.5).unwrap();
        let f = |r: f64, s: f64| (1.0 + r) * s.powf(-0.5);
        let direct = integrate_radial_gap(f, 0.3, &rule).unwrap();
        let pts = rule.weighted_points(0.3).unwrap();
        let summed: f64 = pts.iter().map(|p| p.weight * f(p.r, p.gap)).sum();
        assert_relative_eq!(direct, summed, max_relative = 1e-13);
    }

    #[test]
    fn descriptor_roundtrip() {
        let rule = RadialRule::new(10, 20).unwrap();
        let d = rule.descriptor();
        let json = serde_json::to_string(&d).unwrap();
        let back: RuleDescriptor = serde_json::from_str(&json).unwrap();
        let rebuilt = RadialRule::from_descriptor(&back).unwrap();
        assert_eq!(rebuilt.nodes(), rule.nodes());
    }
}
