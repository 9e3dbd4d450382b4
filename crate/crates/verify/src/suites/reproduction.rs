//! Reproducing formulas on the ball and on the half-space.

use harmspace::distance::{bergman_projection, halfspace_reproduce, DistanceSettings};
use harmspace::harmonic_fn::{BallFunction, HarmonicFunction};
use harmspace::kernels::{BallPoint, HalfSpacePoint};
use harmspace::norms::{HalfSpaceFunction, HalfSpaceSettings, ShiftedPoisson};
use harmspace::report::{CaseResult, VerificationReport};
use rand::RngExt;
use rayon::prelude::*;
use serde::Serialize;

use super::{random_polynomial, report, rng};
use crate::config::{grid, require, SuiteConfig};
use crate::error::Result;

pub const BALL_ANCHOR: &str =
    "weighted Bergman reproduction on the ball: f(x) = int_B Q_beta(x,y) f(y) (1-|y|^2)^beta dy for harmonic f, beta >= 0";

#[derive(Serialize)]
struct BallConfig {
    n: Vec<usize>,
    beta: Vec<f64>,
    degree: usize,
    points: usize,
    max_radius: f64,
    tol: f64,
    settings: DistanceSettings,
}

/// `count` points with `|x| ≤ radius`, uniform in the ball.
fn interior_points(g: &mut rand_chacha::ChaCha8Rng, n: usize, count: usize, radius: f64) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| loop {
            let x: Vec<f64> = (0..n).map(|_| g.random_range(-radius..=radius)).collect();
            if x.iter().map(|c| c * c).sum::<f64>() <= radius * radius {
                break x;
            }
        })
        .collect()
}

pub fn ball(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let c = BallConfig {
        n: grid(&cfg.n, &[2, 3]),
        beta: grid(&cfg.beta, &[1.0, 2.0]),
        degree: cfg.degree.unwrap_or(4),
        points: cfg.cases.unwrap_or(50),
        max_radius: 0.7,
        tol: cfg.tol.unwrap_or(1e-6),
        settings: DistanceSettings::default(),
    };
    for &n in &c.n {
        require((2..=3).contains(&n), &cfg.suite, "n in {2, 3}", n)?;
    }
    for &b in &c.beta {
        require(b >= 0.0, &cfg.suite, "beta >= 0", b)?;
    }
    require(c.degree <= 20, &cfg.suite, "polynomial degree <= 20", c.degree)?;
    let mut rep = report(cfg, BALL_ANCHOR, &c);
    let mut g = rng(cfg.seed, 0);
    for &n in &c.n {
        let points = interior_points(&mut g, n, c.points, c.max_radius);
        let poly = random_polynomial(&mut g, n, c.degree)?;
        let one = HarmonicFunction::constant(n, 1.0)?;
        for &beta in &c.beta {
            for (name, f) in [("polynomial", &poly), ("constant", &one)] {
                let proj = bergman_projection(f, beta, &c.settings)?;
                let errs: Vec<f64> = points
                    .par_iter()
                    .map(|x| -> Result<f64> {
                        let x = BallPoint::from_cartesian(n, x)?;
                        Ok((proj.value(&x) - f.value(&x)).abs())
                    })
                    .collect::<Result<_>>()?;
                let worst = errs.iter().enumerate().fold((0, 0.0), |b, (i, e)| if *e > b.1 { (i, *e) } else { b });
                rep.push(
                    CaseResult::at_most(format!("{name}/n={n}/beta={beta}"), worst.1, c.tol)
                        .with_input("coefficients", f.coefficients().rows())
                        .with_input("worst_point", &points[worst.0])
                        .with_input("nodes", proj.len()),
                );
            }
        }
    }
    Ok(rep)
}

pub const HALFSPACE_ANCHOR: &str =
    "Bergman reproduction on the half-space: f(z) = int f(w) Q_m(z,w) s^m dy ds, tested on f(x,t) = P(x, t+1)";

#[derive(Serialize)]
struct HalfConfig {
    n: usize,
    m: usize,
    points: usize,
    shift: f64,
    tol: f64,
    settings: HalfSpaceSettings,
}

pub fn halfspace(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let n = cfg.n.first().copied().unwrap_or(2);
    let m = cfg.m.first().copied().unwrap_or(1.0);
    require((1..=3).contains(&n), &cfg.suite, "n in {1, 2, 3}", n)?;
    require(m >= 0.0 && m.fract() == 0.0, &cfg.suite, "integer m >= 0", m)?;
    let c = HalfConfig {
        n,
        m: m as usize,
        points: cfg.cases.unwrap_or(10),
        shift: 1.0,
        tol: cfg.tol.unwrap_or(1e-2),
        settings: HalfSpaceSettings {
            order: cfg.order.unwrap_or(8),
            levels_down: 20,
            levels_up: 12,
            ..HalfSpaceSettings::default()
        },
    };
    let mut rep = report(cfg, HALFSPACE_ANCHOR, &c);
    let f = ShiftedPoisson { n, shift: c.shift, scale: 1.0 };
    let mut g = rng(cfg.seed, 0);
    let points: Vec<HalfSpacePoint> = (0..c.points)
        .map(|_| {
            let x: Vec<f64> = (0..n).map(|_| g.random_range(-1.5..=1.5)).collect();
            HalfSpacePoint::new(&x, g.random_range(0.1..=2.0))
        })
        .collect::<harmspace::Result<_>>()?;
    for (i, z) in points.iter().enumerate() {
        // P(·, · + 1) decays like |z|^{-n}
        let value = halfspace_reproduce(&f, z, c.m, n as f64, &c.settings)?;
        let expected = f.value(&z.x, z.t);
        rep.push(CaseResult::relative(format!("point{i}"), value, expected, c.tol).with_input("z", z));
    }
    Ok(rep)
}
