use super::{check_finite, dyadic_panels, GaussPanel};
use crate::error::{domain, Result};

/// Composite rule on `(0, ∞)`: dyadic panels graded toward `0` below
/// `scale`, geometric panels `[scale·2^k, scale·2^{k+1}]` above it, and an
/// analytic power-law tail beyond `scale·2^{levels_up}`.
#[derive(Debug, Clone)]
pub struct HalfLineRule {
    panel: GaussPanel,
    scale: f64,
    levels_down: usize,
    levels_up: usize,
}

impl HalfLineRule {
    pub fn new(order: usize, scale: f64, levels_down: usize, levels_up: usize) -> Result<Self> {
        if scale <= 0.0 || !scale.is_finite() {
            return domain(format!("half-line scale must be positive, got {scale}"));
        }
        Ok(HalfLineRule { panel: GaussPanel::new(order)?, scale, levels_down, levels_up })
    }

    /// Doubles the cut radius and adds one level at each end.
    pub fn extended(&self) -> Self {
        HalfLineRule {
            panel: self.panel.clone(),
            scale: self.scale,
            levels_down: self.levels_down + 1,
            levels_up: self.levels_up + 1,
        }
    }

    pub fn cut(&self) -> f64 {
        self.scale * 2f64.powi(self.levels_up as i32)
    }

    /// `(x, weight)` pairs over `(0, cut]`, excluding the analytic pieces.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut panels = dyadic_panels(self.scale, self.levels_down);
        panels.pop();
        let mut lo = self.scale;
        for _ in 0..self.levels_up {
            panels.push((lo, 2.0 * lo));
            lo *= 2.0;
        }
        for (a, b) in panels {
            out.extend(self.panel.mapped(a, b));
        }
        out
    }

    pub fn inner_cap(&self) -> f64 {
        self.scale * 0.5f64.powi(self.levels_down as i32)
    }
}

/// `∫₀^∞ f(x) x^delta dx` where `f` is bounded near `0` and decays like
/// `x^{-decay}` at infinity; requires `delta > -1` and `decay > delta + 1`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(
    f: F,
    delta: f64,
    decay: f64,
    rule: &HalfLineRule,
) -> Result<f64> {
    if delta <= -1.0 {
        return domain(format!("weight exponent must exceed -1, got {delta}"));
    }
    if decay <= delta + 1.0 {
        return domain(format!(
            "declared decay {decay} does not make x^{delta} integrable at infinity"
        ));
    }
    let mut total = 0.0;
    for (x, w) in rule.points() {
        total += w * check_finite(x, f(x))? * x.powf(delta);
    }
    // inner cap: f ≈ f(h/2) on (0, h]
    let h = rule.inner_cap();
    total += check_finite(0.5 * h, f(0.5 * h))? * h.powf(delta + 1.0) / (delta + 1.0);
    // outer tail: f ≈ f(X) (X / x)^decay
    let x = rule.cut();
    let fx = check_finite(x, f(x))?;
    total += fx * x.powf(delta + 1.0) / (decay - delta - 1.0);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rational_decay() {
        // ∫₀^∞ dx / (1 + x)³ = 1/2
        let rule = HalfLineRule::new(16, 1.0, 30, 30).unwrap();
        let v = integrate_half_line(|x| (1.0 + x).powi(-3), 0.0, 3.0, &rule).unwrap();
        assert_relative_eq!(v, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn weighted_at_origin() {
        // ∫₀^∞ x^{-1/2} e^{-x} dx = √π
        let rule = HalfLineRule::new(16, 1.0, 50, 8).unwrap();
        let v = integrate_half_line(|x| (-x).exp(), -0.5, 50.0, &rule).unwrap();
        assert_relative_eq!(v, std::f64::consts::PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn insufficient_decay_is_rejected() {
        let rule = HalfLineRule::new(4, 1.0, 4, 4).unwrap();
        assert!(integrate_half_line(|x| 1.0 / (1.0 + x), 0.0, 1.0, &rule).is_err());
    }
}
