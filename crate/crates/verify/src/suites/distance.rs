//! Constructive distance bounds: the ball decomposition `f = f₁ + f₂` over
//! an `ε` grid, and the half-space `s₂` integral.

use harmspace::distance::{distance_bound_check, s2_check, DistanceSettings, S2Settings};
use harmspace::harmonic_fn::{BallFunction, CoefficientField, HarmonicFunction};
use harmspace::kernels::{BallPoint, BoundaryPoisson, ExtremalFunction};
use harmspace::norms::ShiftedPoisson;
use harmspace::report::{CaseResult, Comparison, VerificationReport};
use serde::Serialize;

use super::report;
use crate::config::{require, SuiteConfig};
use crate::error::Result;

pub const BALL_ANCHOR: &str = "dist_(A^inf_t)(f, A^p_alpha) <= C eps over eps > t2(f), t = (alpha+n)/p, with f = f1 + f2 split along U = {|f|(1-|x|^2)^t >= eps}";

#[derive(Serialize)]
struct Case {
    name: String,
    eps: Vec<f64>,
    alpha: f64,
}

#[derive(Serialize)]
struct BallConfig {
    n: usize,
    p: f64,
    cases: Vec<Case>,
    frontier_alpha: f64,
    frontier_eps: Vec<f64>,
    settings: DistanceSettings,
}

pub fn ball(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let n = cfg.n.first().copied().unwrap_or(2);
    let p = cfg.p.first().copied().unwrap_or(2.0);
    let alpha = cfg.alpha.first().copied().unwrap_or(1.9);
    let dense = if cfg.eps.is_empty() { vec![1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0] } else { cfg.eps.clone() };
    let c = BallConfig {
        n,
        p,
        cases: vec![
            Case { name: "constant".into(), eps: dense.clone(), alpha },
            Case { name: "polynomial".into(), eps: dense, alpha },
            Case { name: "extremal".into(), eps: vec![0.5, 0.25, 0.125], alpha },
            Case { name: "zero".into(), eps: vec![0.5, 0.25, 0.125], alpha },
        ],
        frontier_alpha: 0.0,
        frontier_eps: vec![0.5, 1.0, 1.5, 2.5, 3.0],
        settings: DistanceSettings::default(),
    };
    require(n == 2 || n == 3, &cfg.suite, "n in {2, 3}", n)?;
    require(p > 1.0 && p.is_finite(), &cfg.suite, "1 < p < inf", p)?;
    require(alpha > -1.0, &cfg.suite, "alpha > -1", alpha)?;
    require(c.cases[0].eps.iter().all(|e| *e > 0.0), &cfg.suite, "eps > 0", format!("{:?}", c.cases[0].eps))?;

    let e1: Vec<f64> = std::iter::once(1.0).chain(std::iter::repeat_n(0.0, n - 1)).collect();
    let constant = HarmonicFunction::constant(n, 1.0)?;
    let polynomial = HarmonicFunction::new(CoefficientField::from_fn(n, 2, |k, j| match (k, j) {
        (0, _) => 3.0,
        (1, 0) => 1.0,
        (2, 0) => 0.5,
        _ => 0.0,
    })?)?;
    let extremal = ExtremalFunction::new(1.0, BallPoint::new(n, 0.9, &e1)?)?;
    let zero = HarmonicFunction::constant(n, 0.0)?;
    let fns: [&dyn BallFunction; 4] = [&constant, &polynomial, &extremal, &zero];

    let mut rep = report(cfg, BALL_ANCHOR, &c);
    for (case, f) in c.cases.iter().zip(fns) {
        let est = distance_bound_check(f, p, case.alpha, &case.eps, &c.settings)?;
        for cs in &est.cases {
            let mut cs = cs.clone();
            cs.case_id = format!("{}/{}", case.name, cs.case_id);
            rep.push(cs);
        }
        if case.name == "zero" {
            rep.push(CaseResult::absolute("zero/t2", est.t2, 0.0, 0.0));
        }
        rep.note(&case.name, &est.rows);
    }

    // P(·, e) is unbounded in A^∞_t when α = 0: the integral diverges for small ε
    let frontier = distance_bound_check(&BoundaryPoisson::new(n, &e1)?, p, c.frontier_alpha, &c.frontier_eps, &c.settings)?;
    let infinite = frontier.rows.iter().filter(|r| r.infinite).count();
    rep.push(
        CaseResult::new("frontier/divergent_eps", infinite as f64, 1.0, 0.0, Comparison::AtLeast)
            .with_input("t2", frontier.t2)
            .with_input("bracket", frontier.bracket),
    );
    rep.push(CaseResult::at_least("frontier/finite_eps", (frontier.rows.len() - infinite) as f64, 1.0));
    for cs in &frontier.cases {
        let mut cs = cs.clone();
        cs.case_id = format!("frontier/{}", cs.case_id);
        rep.push(cs);
    }
    rep.note("frontier", &frontier.rows);
    Ok(rep)
}

pub const HALFSPACE_ANCHOR: &str = "s2(eps) = int (int_V |Q_m(z,w)| s^(m-lambda) dw)^p t^alpha dz with V = {|f| t^lambda >= eps}, lambda = (alpha+n+1)/p";

#[derive(Serialize)]
struct HalfConfig {
    f: ShiftedPoisson,
    p: f64,
    alpha: f64,
    m: usize,
    eps: Vec<f64>,
    empty_eps: f64,
    settings: S2Settings,
}

pub fn halfspace(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let p = cfg.p.first().copied().unwrap_or(2.0);
    let alpha = cfg.alpha.first().copied().unwrap_or(0.0);
    let c = HalfConfig {
        f: ShiftedPoisson { n: 2, shift: 1.0, scale: 1.0 },
        p,
        alpha,
        m: cfg.m.first().map_or(1, |m| *m as usize),
        eps: if cfg.eps.is_empty() { vec![0.045, 0.03, 0.02] } else { cfg.eps.clone() },
        empty_eps: 10.0,
        settings: S2Settings::default(),
    };
    require(p > 1.0 && p.is_finite(), &cfg.suite, "1 < p < inf", p)?;
    require(alpha > -1.0, &cfg.suite, "alpha > -1", alpha)?;
    let lambda = (alpha + 3.0) / p;
    require(c.m as f64 > (lambda - 1.0).max(alpha / p), &cfg.suite, "integer m > max(lambda - 1, alpha/p)", c.m)?;
    require(c.eps.iter().all(|e| *e > 0.0), &cfg.suite, "eps > 0", format!("{:?}", c.eps))?;

    let mut rep = report(cfg, HALFSPACE_ANCHOR, &c);
    let mut eps = c.eps.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    let mut values = Vec::new();
    for &e in &eps {
        let chk = s2_check(&c.f, e, p, alpha, c.m, &c.settings)?;
        rep.push(
            CaseResult::new(format!("eps={e}/consistent"), chk.consistent as u8 as f64, 1.0, 0.0, Comparison::AtLeast)
                .with_input("base", chk.base)
                .with_input("doubled", chk.doubled),
        );
        values.push(chk.base.value);
    }
    // V grows as ε decreases
    let monotone = values.windows(2).all(|w| w[1] >= w[0]);
    rep.push(CaseResult::new("monotone_in_eps", monotone as u8 as f64, 1.0, 0.0, Comparison::AtLeast).with_input("values", &values));
    let empty = s2_check(&c.f, c.empty_eps, p, alpha, c.m, &c.settings)?;
    rep.push(CaseResult::absolute("empty/value", empty.base.value, 0.0, 0.0).with_input("nodes", empty.base.nodes));
    Ok(rep)
}
