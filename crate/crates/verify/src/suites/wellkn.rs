//! Power inequality for integrals of increasing functions against
//! `(1 − r)^β (1 − ρr)^{−γ} r^α`.

use harmspace::multipliers::RhoGrid;
use harmspace::quadrature::{integrate_radial_interval, RadialRule};
use harmspace::report::{CaseResult, VerificationReport};
use rand::RngExt;
use rayon::prelude::*;
use serde::Serialize;

use super::{report, rng};
use crate::config::{grid, require, SuiteConfig};
use crate::error::Result;

pub const ANCHOR: &str = "for positive increasing G and 0 < q <= 1: (int_0^1 G(r) (1-r)^beta (1-rho r)^(-gamma) r^alpha dr)^q <= C int_0^1 G(r)^q (1-r)^(beta q+q-1) (1-rho r)^(-q gamma) r^alpha dr";

/// `G = Σ heights[i] · 1[r ≥ jumps[i]]`, `jumps[0] = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct StepFunction {
    pub jumps: Vec<f64>,
    pub heights: Vec<f64>,
}

impl StepFunction {
    /// Up to `max_steps` jumps at `1 − 2^{−20u}`, `u` uniform, so that
    /// some sit very close to `r = 1`.
    fn random(g: &mut rand_chacha::ChaCha8Rng, max_steps: usize) -> Self {
        let k = g.random_range(1..=max_steps);
        let mut jumps: Vec<f64> = (0..k).map(|_| 1.0 - (-20.0 * g.random_range(0.0..1.0f64)).exp2()).collect();
        jumps.sort_by(f64::total_cmp);
        jumps.insert(0, 0.0);
        let heights = (0..=k).map(|_| (g.random_range(-3.0..3.0f64)).exp()).collect();
        StepFunction { jumps, heights }
    }

    /// `Σ_i G_i^power ∫_{a_i}^{a_{i+1}} h(r) (1 − r)^e dr`.
    fn integrate(&self, power: f64, e: f64, h: impl Fn(f64) -> f64, rule: &RadialRule) -> harmspace::Result<f64> {
        let mut level = 0.0;
        let mut total = 0.0;
        for (i, (&a, &hgt)) in self.jumps.iter().zip(&self.heights).enumerate() {
            level += hgt;
            let b = self.jumps.get(i + 1).copied().unwrap_or(1.0);
            if b > a {
                total += level.powf(power) * integrate_radial_interval(|r, _| h(r), e, a, b, rule)?;
            }
        }
        Ok(total)
    }
}

#[derive(Serialize)]
struct WellknConfig {
    alpha: f64,
    beta: f64,
    gamma: f64,
    q: Vec<f64>,
    functions: usize,
    max_steps: usize,
    rho_levels: usize,
    order: usize,
    depth: usize,
    bound: f64,
    spread: f64,
}

/// `max_ρ LHS^q / RHS` and where it is attained.
fn worst_ratio(
    f: &StepFunction,
    c: &WellknConfig,
    q: f64,
    rho: &[f64],
    rule: &RadialRule,
) -> harmspace::Result<(f64, f64)> {
    let mut best = (0.0, 0.0);
    for &p in rho {
        let ra = |r: f64| r.powf(c.alpha);
        let lhs = f.integrate(1.0, c.beta, |r| ra(r) * (1.0 - p * r).powf(-c.gamma), rule)?;
        let rhs = f.integrate(q, c.beta * q + q - 1.0, |r| ra(r) * (1.0 - p * r).powf(-q * c.gamma), rule)?;
        let v = lhs.powf(q) / rhs;
        if v > best.0 {
            best = (v, p);
        }
    }
    Ok(best)
}

pub fn run(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let c = WellknConfig {
        alpha: cfg.alpha.first().copied().unwrap_or(0.0),
        beta: cfg.beta.first().copied().unwrap_or(0.5),
        gamma: cfg.gamma.first().copied().unwrap_or(2.0),
        q: grid(&cfg.q, &[0.3, 0.5, 1.0]),
        functions: cfg.cases.unwrap_or(if cfg.heavy() { 400 } else { 100 }),
        max_steps: 8,
        rho_levels: 12,
        order: cfg.order.unwrap_or(8),
        depth: 48,
        bound: cfg.bound.unwrap_or(100.0),
        spread: 2.0,
    };
    require(c.alpha >= 0.0, &cfg.suite, "alpha >= 0 (r^alpha bounded for the panel rule)", c.alpha)?;
    require(c.beta > -1.0, &cfg.suite, "beta > -1", c.beta)?;
    require(c.gamma >= 0.0, &cfg.suite, "gamma >= 0", c.gamma)?;
    for &q in &c.q {
        require(q > 0.0 && q <= 1.0, &cfg.suite, "0 < q <= 1", q)?;
    }
    let mut rep = report(cfg, ANCHOR, &c);
    let mut g = rng(cfg.seed, 0);
    let fs: Vec<StepFunction> = (0..c.functions).map(|_| StepFunction::random(&mut g, c.max_steps)).collect();
    let base = RadialRule::new(c.order, c.depth)?;
    let fine = RadialRule::new(2 * c.order, c.depth + 4)?;
    let rho = RhoGrid::dyadic(c.rho_levels, 1).rho;
    let rho_fine = RhoGrid::dyadic(c.rho_levels, 2).rho;
    for &q in &c.q {
        let rows: Vec<((f64, f64), (f64, f64))> = fs
            .par_iter()
            .map(|f| Ok((worst_ratio(f, &c, q, &rho, &base)?, worst_ratio(f, &c, q, &rho_fine, &fine)?)))
            .collect::<harmspace::Result<_>>()?;
        let pick = |sel: fn(&((f64, f64), (f64, f64))) -> (f64, f64)| {
            rows.iter().enumerate().fold((0, (0.0, 0.0)), |b, (i, r)| if sel(r).0 > b.1 .0 { (i, sel(r)) } else { b })
        };
        let (i0, (c0, rho0)) = pick(|r| r.0);
        let (i1, (c1, rho1)) = pick(|r| r.1);
        rep.push(
            CaseResult::at_most(format!("q={q}/constant"), c0, c.bound)
                .with_input("function", &fs[i0])
                .with_input("rho", rho0),
        );
        rep.push(
            CaseResult::at_most(format!("q={q}/constant_refined"), c1, c.bound)
                .with_input("function", &fs[i1])
                .with_input("rho", rho1),
        );
        rep.push(
            CaseResult::at_most(format!("q={q}/grid_spread"), (c1 / c0).max(c0 / c1), c.spread)
                .with_input("constant", c0)
                .with_input("constant_refined", c1),
        );
    }
    Ok(rep)
}
