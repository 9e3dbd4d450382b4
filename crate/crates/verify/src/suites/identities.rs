//! Exact identities: the radial Gamma integral, the Poisson series, the
//! addition theorem and the pairing identity.

use harmspace::harmonic_fn::pairing_values;
use harmspace::kernels::{poisson_ball, poisson_ball_series, BallPoint};
use harmspace::quadrature::{integrate_radial, RadialRule};
use harmspace::report::{CaseResult, VerificationReport};
use harmspace::spharm::{zonal, HarmonicBasis};
use rand::RngExt;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::gamma::gamma;

use super::{random_polynomial, report, rng, unit_vector};
use crate::config::{grid, require, SuiteConfig};
use crate::error::Result;

pub const GAMMA_ANCHOR: &str =
    "exact radial integral: int_0^1 (1-r^2)^s r^(2t+n-1) dr = Gamma(s+1) Gamma(n/2+t) / (2 Gamma(s+1+n/2+t))";

#[derive(Serialize)]
struct GammaConfig {
    s: Vec<f64>,
    t: Vec<f64>,
    n: Vec<usize>,
    order: usize,
    tol: f64,
}

pub fn gamma_exact(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let c = GammaConfig {
        s: grid(&cfg.s, &[-0.5, 0.0, 1.0, 2.5]),
        t: grid(&cfg.t, &[0.0, 0.5, 3.0]),
        n: grid(&cfg.n, &[2, 3]),
        order: cfg.order.unwrap_or(16),
        tol: cfg.tol.unwrap_or(1e-8),
    };
    for &s in &c.s {
        require(s > -1.0, &cfg.suite, "s > -1", s)?;
    }
    for &n in &c.n {
        for &t in &c.t {
            require(2.0 * t + n as f64 > 0.0, &cfg.suite, "2t + n > 0", format!("t = {t}, n = {n}"))?;
        }
    }
    let mut rep = report(cfg, GAMMA_ANCHOR, &c);
    for &n in &c.n {
        for &s in &c.s {
            let rule = RadialRule::for_weight(c.order, s, 0.0, 1e-15)?;
            for &t in &c.t {
                // (1 − r²)^s = (1 − r)^s (1 + r)^s
                let e = 2.0 * t + n as f64 - 1.0;
                let value = integrate_radial(|r| (1.0 + r).powf(s) * r.powf(e), s, &rule)?;
                let nh = n as f64 / 2.0;
                let expected = 0.5 * gamma(s + 1.0) * gamma(nh + t) / gamma(s + 1.0 + nh + t);
                rep.push(
                    CaseResult::relative(format!("n={n}/s={s}/t={t}"), value, expected, c.tol)
                        .with_input("rule", rule.descriptor()),
                );
            }
        }
    }
    Ok(rep)
}

pub const POISSON_ANCHOR: &str =
    "Poisson kernel of the ball: series sum_k r^k Z_k(x',y') equals (1-|x|^2)/|x-y'|^n; addition theorem sum_j Y_j(x') Y_j(y') = Z_k(x',y')";

#[derive(Serialize)]
struct PoissonConfig {
    n: Vec<usize>,
    cases: usize,
    max_radius: f64,
    truncation: usize,
    max_degree: usize,
    pairs: usize,
    tol: f64,
    addition_tol: f64,
}

pub fn poisson(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let c = PoissonConfig {
        n: grid(&cfg.n, &[2, 3]),
        cases: cfg.cases.unwrap_or(if cfg.heavy() { 1000 } else { 200 }),
        max_radius: cfg.t.first().copied().unwrap_or(0.9),
        truncation: cfg.degree.unwrap_or(400),
        max_degree: 12,
        pairs: 20,
        tol: cfg.tol.unwrap_or(1e-8),
        addition_tol: 1e-10,
    };
    for &n in &c.n {
        require((2..=3).contains(&n), &cfg.suite, "n in {2, 3}", n)?;
    }
    require((0.0..1.0).contains(&c.max_radius), &cfg.suite, "radius bound in [0, 1)", c.max_radius)?;
    let mut rep = report(cfg, POISSON_ANCHOR, &c);
    for (stream, &n) in c.n.iter().enumerate() {
        let mut g = rng(cfg.seed, stream as u64);
        let inputs: Vec<(f64, Vec<f64>, Vec<f64>)> = (0..c.cases)
            .map(|_| {
                let r = c.max_radius * g.random_range(0.0..=1.0);
                (r, unit_vector(&mut g, n), unit_vector(&mut g, n))
            })
            .collect();
        let errs: Vec<(f64, f64)> = inputs
            .par_iter()
            .map(|(r, xd, y)| -> Result<(f64, f64)> {
                let x = BallPoint::new(n, *r, xd)?;
                let series = poisson_ball_series(&x, y, c.truncation)?;
                let closed = poisson_ball(&x, y)?;
                Ok(((series - closed).abs() / closed.abs(), closed))
            })
            .collect::<Result<_>>()?;
        let (worst, _) = errs.iter().enumerate().fold((0, 0.0), |b, (i, e)| if e.0 > b.1 { (i, e.0) } else { b });
        let (r, xd, y) = &inputs[worst];
        rep.push(
            CaseResult::at_most(format!("series/n={n}"), errs[worst].0, c.tol)
                .with_input("r", r)
                .with_input("x_dir", xd)
                .with_input("y", y)
                .with_input("points", c.cases),
        );

        let basis = HarmonicBasis::new(n, c.max_degree)?;
        let pairs: Vec<(Vec<f64>, Vec<f64>)> =
            (0..c.pairs).map(|_| (unit_vector(&mut g, n), unit_vector(&mut g, n))).collect();
        for k in 0..=c.max_degree {
            let mut worst = (0.0, 0);
            for (i, (a, b)) in pairs.iter().enumerate() {
                let pad = |v: &[f64]| {
                    let mut o = [0.0; 3];
                    o[..n].copy_from_slice(v);
                    o
                };
                let (ya, yb) = (basis.eval(&pad(a))?, basis.eval(&pad(b))?);
                let o = basis.offset(k);
                let d = basis.offset(k + 1) - o;
                let sum: f64 = (o..o + d).map(|j| ya[j] * yb[j]).sum();
                let err = (sum - zonal(n, k, a, b)?).abs();
                if err > worst.0 {
                    worst = (err, i);
                }
            }
            let (a, b) = &pairs[worst.1];
            rep.push(
                CaseResult::at_most(format!("addition/n={n}/k={k}"), worst.0, c.addition_tol)
                    .with_input("x", a)
                    .with_input("y", b),
            );
        }
    }
    Ok(rep)
}

pub const PAIRING_ANCHOR: &str = "pairing identity: int_S (g*P_y')(r x') f(rho x') dx' = sum_k (r rho)^k sum_j b_k^j c_k^j Y_j(y') = 2 int_0^1 int_S Lambda_(m+1)(g*P_y')(rRx') f(rho R x') (1-R^2)^m R^(n-1) dx' dR";

#[derive(Serialize)]
struct PairingConfig {
    n: Vec<usize>,
    cases: usize,
    degree: usize,
    m_range: (f64, f64),
    max_radius: f64,
    tol: f64,
}

#[derive(Serialize)]
struct PairingCase {
    n: usize,
    f: Vec<Vec<f64>>,
    g: Vec<Vec<f64>>,
    m: f64,
    r: f64,
    rho: f64,
    y: Vec<f64>,
}

pub fn pairing(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let c = PairingConfig {
        n: grid(&cfg.n, &[2, 3]),
        cases: cfg.cases.unwrap_or(if cfg.heavy() { 200 } else { 50 }),
        degree: cfg.degree.unwrap_or(6),
        m_range: match cfg.m.as_slice() {
            [lo, hi, ..] => (*lo, *hi),
            _ => (-0.5, 3.0),
        },
        max_radius: 0.9,
        tol: cfg.tol.unwrap_or(1e-8),
    };
    require(c.m_range.0 > -1.0 && c.m_range.0 <= c.m_range.1, &cfg.suite, "-1 < m_lo <= m_hi", format!("{:?}", c.m_range))?;
    for &n in &c.n {
        require((2..=3).contains(&n), &cfg.suite, "n in {2, 3}", n)?;
    }
    let mut rep = report(cfg, PAIRING_ANCHOR, &c);
    let mut g = rng(cfg.seed, 0);
    let cases: Vec<PairingCase> = (0..c.cases)
        .map(|i| -> Result<PairingCase> {
            let n = c.n[i % c.n.len()];
            let deg = g.random_range(0..=c.degree);
            let f = random_polynomial(&mut g, n, deg)?;
            let deg = g.random_range(0..=c.degree);
            let gg = random_polynomial(&mut g, n, deg)?;
            Ok(PairingCase {
                n,
                f: f.coefficients().rows().to_vec(),
                g: gg.coefficients().rows().to_vec(),
                m: g.random_range(c.m_range.0..=c.m_range.1),
                r: c.max_radius * g.random_range(0.0..=1.0),
                rho: c.max_radius * g.random_range(0.0..=1.0),
                y: unit_vector(&mut g, n),
            })
        })
        .collect::<Result<_>>()?;
    let results: Vec<CaseResult> = cases
        .par_iter()
        .enumerate()
        .map(|(i, pc)| -> Result<CaseResult> {
            use harmspace::harmonic_fn::{CoefficientField, HarmonicFunction};
            let f = HarmonicFunction::new(CoefficientField::new(pc.n, pc.f.clone())?)?;
            let g = HarmonicFunction::new(CoefficientField::new(pc.n, pc.g.clone())?)?;
            let v = pairing_values(&f, &g, pc.m, pc.r, pc.rho, &pc.y)?;
            let scale = v.series.abs().max(1.0);
            Ok(CaseResult::at_most(format!("case{i:03}"), v.max_deviation() / scale, c.tol)
                .with_input("case", pc)
                .with_input("series", v.series)
                .with_input("sphere", v.sphere)
                .with_input("ball", v.ball))
        })
        .collect::<Result<_>>()?;
    rep.extend(results);
    Ok(rep)
}
