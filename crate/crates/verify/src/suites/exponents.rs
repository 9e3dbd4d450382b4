//! Asymptotic exponents fitted on log-log grids.

use harmspace::kernels::{BallPoint, BergmanKernelBall, BergmanKernelHalfSpace, ExtremalFunction};
use harmspace::norms::{radial_mean, space_norm, NormSettings, SpaceSpec};
use harmspace::quadrature::{
    fit_decay_exponent, geometric_gaps, integrate_half_line, integrate_radial_gap, HalfLineRule, RadialRule, ZonalRule,
};
use harmspace::report::VerificationReport;
use harmspace::special::sphere_area;
use rayon::prelude::*;
use serde::Serialize;

use super::{report, slope_case};
use crate::config::{grid, require, SuiteConfig};
use crate::error::Result;

/// Samples `g` on the gaps in parallel, then fits.
fn fit_parallel(
    gaps: &[f64],
    g: impl Fn(f64) -> harmspace::Result<f64> + Sync,
) -> Result<harmspace::quadrature::DecayFit> {
    let vals: Vec<f64> = gaps.par_iter().map(|&d| g(d)).collect::<harmspace::Result<_>>()?;
    let mut it = vals.into_iter();
    Ok(fit_decay_exponent(|_| it.next().unwrap_or(f64::NAN), gaps)?)
}

pub const RRO_ANCHOR: &str =
    "radial integral: int_0^1 (1-r)^alpha (1-r rho)^(-lambda) dr ~ (1-rho)^(alpha+1-lambda), alpha > -1, lambda > alpha+1";

#[derive(Serialize)]
struct RroConfig {
    pairs: Vec<(f64, f64)>,
    gaps: Vec<f64>,
    order: usize,
    tol: f64,
}

pub fn rro(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let alpha = grid(&cfg.alpha, &[0.0, 0.5, -0.5, 1.0]);
    let lambda = grid(&cfg.lambda, &[2.0, 3.0, 1.0, 2.5]);
    require(alpha.len() == lambda.len(), &cfg.suite, "alpha and lambda grids of equal length", format!("{} and {}", alpha.len(), lambda.len()))?;
    let c = RroConfig {
        pairs: alpha.into_iter().zip(lambda).collect(),
        gaps: geometric_gaps(1e-2, 1e-5, if cfg.heavy() { 16 } else { 10 }),
        order: cfg.order.unwrap_or(16),
        tol: cfg.tol.unwrap_or(0.05),
    };
    for &(a, l) in &c.pairs {
        require(a > -1.0, &cfg.suite, "alpha > -1", a)?;
        require(l > a + 1.0, &cfg.suite, "lambda > alpha + 1", format!("alpha = {a}, lambda = {l}"))?;
    }
    let mut rep = report(cfg, RRO_ANCHOR, &c);
    for &(a, l) in &c.pairs {
        let rule = RadialRule::for_weight(c.order, a, 0.0, 1e-14)?;
        // 1 − ρr = d + s − d s with d = 1 − ρ, s = 1 − r
        let fit = fit_parallel(&c.gaps, |d| integrate_radial_gap(|_, s| (d + s - d * s).powf(-l), a, &rule))?;
        rep.push(slope_case(format!("alpha={a}/lambda={l}"), &fit, a + 1.0 - l, c.tol));
    }
    Ok(rep)
}

pub const QBETA_ANCHOR: &str = "kernel power integral on the ball: int_B |Q_beta(x,y)|^(gamma/(n+beta)) (1-|y|)^delta dy ~ (1-|x|)^(delta-gamma+n), integer beta > 0, gamma > n+delta";

#[derive(Serialize)]
struct QbetaConfig {
    n: usize,
    cases: Vec<(f64, f64, f64)>,
    gaps: Vec<f64>,
    order: usize,
    depth: usize,
    tol: f64,
}

/// `∫_B |Q_β(x, y)|^a (1 − |y|)^δ dy` at `|x| = 1 − d`.
fn qbeta_integral(kernel: &BergmanKernelBall, a: f64, delta: f64, d: f64, radial: &RadialRule, zonal: &ZonalRule) -> harmspace::Result<f64> {
    let n = kernel.dimension();
    let r = 1.0 - d;
    let sphere = zonal.points();
    integrate_radial_gap(
        |rho, s| {
            let t = r * rho;
            let g = d + r * s;
            let mut acc = 0.0;
            for &(u, v, _, w) in &sphere {
                acc += w * kernel.eval_zonal(t, g, u, v).unwrap_or(f64::NAN).abs().powf(a);
            }
            acc * rho.powi(n as i32 - 1)
        },
        delta,
        radial,
    )
}

pub fn qbeta(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let n = cfg.n.first().copied().unwrap_or(3);
    let betas = grid(&cfg.beta, &[1.0, 2.0]);
    let deltas = grid(&cfg.delta, &[0.0, 0.5]);
    let mut cases = Vec::new();
    for &b in &betas {
        for &dl in &deltas {
            let gammas = if cfg.gamma.is_empty() {
                vec![n as f64 + dl + 0.5, n as f64 + dl + 1.5]
            } else {
                cfg.gamma.clone()
            };
            for g in gammas {
                cases.push((b, dl, g));
            }
        }
    }
    let c = QbetaConfig {
        n,
        cases,
        gaps: geometric_gaps(1e-2, 1e-4, if cfg.heavy() { 12 } else { 8 }),
        order: cfg.order.unwrap_or(8),
        depth: 48,
        tol: cfg.tol.unwrap_or(0.07),
    };
    require((2..=3).contains(&n), &cfg.suite, "n in {2, 3}", n)?;
    for &(b, dl, g) in &c.cases {
        require(b > 0.0 && b.fract() == 0.0, &cfg.suite, "integer beta > 0", b)?;
        require(dl > -1.0, &cfg.suite, "delta > -1", dl)?;
        require(g > n as f64 + dl, &cfg.suite, "gamma > n + delta", format!("gamma = {g}, delta = {dl}"))?;
    }
    let mut rep = report(cfg, QBETA_ANCHOR, &c);
    let zonal = ZonalRule::new(n, c.order, c.depth)?;
    for &(b, dl, g) in &c.cases {
        let kernel = BergmanKernelBall::new(n, b, 64)?;
        let radial = RadialRule::with_growth(c.order, c.depth, 0.0)?;
        let a = g / (n as f64 + b);
        let fit = fit_parallel(&c.gaps, |d| qbeta_integral(&kernel, a, dl, d, &radial, &zonal))?;
        rep.push(slope_case(format!("beta={b}/delta={dl}/gamma={g}"), &fit, dl - g + n as f64, c.tol));
    }
    Ok(rep)
}

pub const KERNEL_ANCHOR: &str = "sphere integral of the Bergman kernel: int_S |Q_beta(r x', y)| dx' ~ (1-r|y|)^(-1-beta)";

#[derive(Serialize)]
struct KernelConfig {
    cases: Vec<(usize, f64)>,
    gaps: Vec<f64>,
    order: usize,
    depth: usize,
    tol: f64,
}

pub fn kernel_estimate(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let ns = grid(&cfg.n, &[2, 3]);
    let betas = grid(&cfg.beta, &[1.0, 2.0]);
    let mut cases: Vec<(usize, f64)> = ns.iter().flat_map(|&n| betas.iter().map(move |&b| (n, b))).collect();
    if cfg.beta.is_empty() && ns.contains(&2) {
        cases.push((2, 0.5));
    }
    let c = KernelConfig {
        cases,
        gaps: geometric_gaps(1e-1, 1e-4, if cfg.heavy() { 16 } else { 10 }),
        order: cfg.order.unwrap_or(8),
        depth: 48,
        tol: cfg.tol.unwrap_or(0.05),
    };
    for &(n, b) in &c.cases {
        require((2..=3).contains(&n), &cfg.suite, "n in {2, 3}", n)?;
        require(b > -1.0, &cfg.suite, "beta > -1", b)?;
        require(n == 2 || b.fract() == 0.0, &cfg.suite, "integer beta when n = 3", b)?;
    }
    let mut rep = report(cfg, KERNEL_ANCHOR, &c);
    for &(n, b) in &c.cases {
        let kernel = BergmanKernelBall::new(n, b, 64)?;
        let zonal = ZonalRule::new(n, c.order, c.depth)?;
        let pts = zonal.points();
        // r|y| = 1 − d
        let fit = fit_parallel(&c.gaps, |d| {
            let mut acc = 0.0;
            for &(u, v, _, w) in &pts {
                acc += w * kernel.eval_zonal(1.0 - d, d, u, v)?.abs();
            }
            Ok(acc)
        })?;
        rep.push(slope_case(format!("n={n}/beta={b}"), &fit, -1.0 - b, c.tol));
    }
    Ok(rep)
}

pub const QM_ANCHOR: &str = "kernel power integral on the half-space: int |Q_m(z,w)|^(gamma/(n+m+1)) s^delta dy ds ~ t^(delta-gamma+n+1), gamma > n+1+delta";

#[derive(Serialize)]
struct QmConfig {
    n: usize,
    cases: Vec<(usize, f64, f64)>,
    heights: Vec<f64>,
    order: usize,
    levels: usize,
    tol: f64,
}

pub fn qm(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let n = cfg.n.first().copied().unwrap_or(2);
    let ms = grid(&cfg.m, &[0.0, 1.0, 2.0]);
    let deltas = grid(&cfg.delta, &[0.0, 0.5]);
    let mut cases = Vec::new();
    for &m in &ms {
        require(m >= 0.0 && m.fract() == 0.0, &cfg.suite, "integer m >= 0", m)?;
        for &dl in &deltas {
            let gammas = if cfg.gamma.is_empty() {
                vec![n as f64 + 1.0 + dl + 0.5, n as f64 + 1.0 + dl + 1.5]
            } else {
                cfg.gamma.clone()
            };
            for g in gammas {
                cases.push((m as usize, dl, g));
            }
        }
    }
    let c = QmConfig {
        n,
        cases,
        heights: geometric_gaps(1.0, 1e-3, if cfg.heavy() { 12 } else { 8 }),
        order: cfg.order.unwrap_or(12),
        levels: 40,
        tol: cfg.tol.unwrap_or(0.07),
    };
    require((1..=3).contains(&n), &cfg.suite, "n in {1, 2, 3}", n)?;
    for &(_, dl, g) in &c.cases {
        require(dl > -1.0, &cfg.suite, "delta > -1", dl)?;
        require(g > n as f64 + 1.0 + dl, &cfg.suite, "gamma > n + 1 + delta", format!("gamma = {g}, delta = {dl}"))?;
    }
    let mut rep = report(cfg, QM_ANCHOR, &c);
    let nf = n as f64;
    let area = if n == 1 { 2.0 } else { sphere_area(n) };
    let rule = HalfLineRule::new(c.order, 1.0, c.levels, c.levels)?;
    for &(m, dl, g) in &c.cases {
        let kernel = BergmanKernelHalfSpace::new(n, m)?;
        let a = g / (nf + m as f64 + 1.0);
        // |Q_m|^a decays like |y|^{-γ} in y and the y-integral like (t + s)^{n−γ}
        let fit = fit_parallel(&c.heights, |t| {
            let inner = |s: f64| {
                area * integrate_half_line(|rho| kernel.eval_r2(rho * rho, t + s).abs().powf(a), nf - 1.0, g, &rule)
                    .unwrap_or(f64::NAN)
            };
            integrate_half_line(inner, dl, g - nf, &rule)
        })?;
        rep.push(slope_case(format!("m={m}/delta={dl}/gamma={g}"), &fit, dl - g + nf + 1.0, c.tol));
    }
    Ok(rep)
}

pub const FY_ANCHOR: &str = "norm estimates of f_(m,y) = Q_m(., y): M_inf ~ (1-|y|r)^(-n-m), M_1 ~ (1-|y|r)^(-1-m), B^(p,1)_alpha ~ (1-|y|)^(alpha-1-m), B^(p,inf)_alpha ~ (1-|y|)^(alpha-n-m), A^1_alpha ~ (1-|y|)^(alpha-m), H^1_alpha ~ (1-|y|)^(alpha-1-m)";

#[derive(Serialize)]
struct FyConfig {
    n: Vec<usize>,
    m: Vec<f64>,
    p: f64,
    alpha: f64,
    gaps: Vec<f64>,
    norms: NormSettings,
    tol: f64,
}

pub fn fy_estimates(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let c = FyConfig {
        n: grid(&cfg.n, &[2, 3]),
        m: grid(&cfg.m, &[1.0, 2.0]),
        p: cfg.p.first().copied().unwrap_or(2.0),
        alpha: cfg.alpha.first().copied().unwrap_or(0.5),
        gaps: geometric_gaps(1e-2, 1e-5, if cfg.heavy() { 12 } else { 8 }),
        norms: NormSettings { estimate_error: false, sup_grid: 48, ..NormSettings::default() },
        tol: cfg.tol.unwrap_or(0.07),
    };
    let (p, alpha) = (c.p, c.alpha);
    require(p > 0.0, &cfg.suite, "p > 0", p)?;
    require(alpha > 0.0, &cfg.suite, "alpha > 0", alpha)?;
    for &n in &c.n {
        require((2..=3).contains(&n), &cfg.suite, "n in {2, 3}", n)?;
    }
    for &m in &c.m {
        require(m > 0.0 && m.fract() == 0.0, &cfg.suite, "integer m > 0", m)?;
        require(m > alpha, &cfg.suite, "m > alpha", format!("m = {m}, alpha = {alpha}"))?;
    }
    let mut rep = report(cfg, FY_ANCHOR, &c);
    let s = &c.norms;
    for &n in &c.n {
        let nf = n as f64;
        let dir: Vec<f64> = (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
        for &m in &c.m {
            // r = |y| with 1 − r|y| = d
            let at_product = |d: f64| -> harmspace::Result<(ExtremalFunction, f64)> {
                let r = (1.0 - d).sqrt();
                Ok((ExtremalFunction::new(m, BallPoint::new(n, r, &dir)?)?, r))
            };
            let pole = |d: f64| -> harmspace::Result<ExtremalFunction> {
                ExtremalFunction::new(m, BallPoint::with_gap(n, d, &dir)?)
            };
            let id = |e: &str| format!("{e}/n={n}/m={m}");
            let fit = fit_parallel(&c.gaps, |d| {
                let (f, r) = at_product(d)?;
                radial_mean(&f, f64::INFINITY, r, s)
            })?;
            rep.push(slope_case(id("M_inf"), &fit, -nf - m, c.tol));
            let fit = fit_parallel(&c.gaps, |d| {
                let (f, r) = at_product(d)?;
                radial_mean(&f, 1.0, r, s)
            })?;
            rep.push(slope_case(id("M_1"), &fit, -1.0 - m, c.tol));
            let specs = [
                ("B_p1", SpaceSpec::mixed(p, 1.0, alpha), alpha - 1.0 - m),
                ("B_pinf", SpaceSpec::mixed(p, f64::INFINITY, alpha), alpha - nf - m),
                ("A_1", SpaceSpec::bergman(1.0, alpha), alpha - m),
                ("H_1", SpaceSpec::hardy(1.0, alpha), alpha - 1.0 - m),
            ];
            for (name, spec, expected) in specs {
                let fit = fit_parallel(&c.gaps, |d| Ok(space_norm(&pole(d)?, &spec, s)?.value))?;
                rep.push(slope_case(id(name), &fit, expected, c.tol).with_input("space", spec));
            }
        }
    }
    Ok(rep)
}
