//! Multiplier characterizations, the Young-type convolution bound and the
//! pointwise embedding of weighted Bergman spaces.

use harmspace::harmonic_fn::{BallFunction, CoefficientField, HarmonicFunction};
use harmspace::kernels::{BallPoint, ExtremalFunction};
use harmspace::multipliers::{
    multiplier_stability, random_family, random_field, verify_multiplier_theorem, verify_young_proposition,
    DecayProfile, MultiplierProblem, MultiplierSettings,
};
use harmspace::norms::{embedding_check, NormSettings, SpaceSpec};
use harmspace::report::{CaseResult, VerificationReport};
use serde::Serialize;

use super::{report, rng, unit_vector};
use crate::config::{require, SuiteConfig};
use crate::error::Result;

pub const MULTIPLIER_ANCHOR: &str = "coefficient multiplier characterizations by N_s(g_c) = sup (1-rho)^(m+1-alpha+beta) ||Lambda_(m+1)(g_c*P_x')(rho y')||_(L^s(dx')): B^(p,1)_alpha -> B^(q,1)_beta (p > 1 and p <= 1), B^(p,1)_alpha -> H^s_beta, H^1_alpha -> H^p_beta";

#[derive(Serialize)]
struct MultiplierConfig {
    n: usize,
    degree: usize,
    m: f64,
    per_shape: usize,
    family_size: usize,
    family_degree: usize,
    problems: Vec<(String, SpaceSpec, SpaceSpec)>,
    profiles: Vec<DecayProfile>,
    family_profiles: Vec<DecayProfile>,
    spread: f64,
    settings: MultiplierSettings,
}

pub fn multipliers(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let n = cfg.n.first().copied().unwrap_or(2);
    let alpha = cfg.alpha.first().copied().unwrap_or(0.5);
    let beta = cfg.beta.first().copied().unwrap_or(0.5);
    let c = MultiplierConfig {
        n,
        degree: cfg.degree.unwrap_or(6),
        m: cfg.m.first().copied().unwrap_or(1.0),
        per_shape: cfg.cases.unwrap_or(5),
        family_size: if cfg.heavy() { 8 } else { 4 },
        family_degree: 6,
        problems: vec![
            ("bpbq_large".into(), SpaceSpec::mixed(2.0, 1.0, alpha), SpaceSpec::mixed(3.0, 1.0, beta)),
            ("bpbq_small".into(), SpaceSpec::mixed(0.5, 1.0, alpha), SpaceSpec::mixed(1.0, 1.0, beta)),
            ("bphs".into(), SpaceSpec::mixed(1.0, 1.0, alpha), SpaceSpec::hardy(2.0, beta)),
            ("h1hp".into(), SpaceSpec::hardy(1.0, alpha), SpaceSpec::hardy(2.0, beta)),
        ],
        profiles: vec![
            DecayProfile::Power { a: 1.0 },
            DecayProfile::Power { a: 2.0 },
            DecayProfile::Power { a: 3.0 },
            DecayProfile::Exponential { b: 0.5 },
            DecayProfile::Exponential { b: 1.0 },
        ],
        family_profiles: vec![DecayProfile::Power { a: 1.0 }, DecayProfile::Exponential { b: 0.3 }],
        spread: cfg.bound.unwrap_or(2.0),
        settings: MultiplierSettings {
            norms: NormSettings { estimate_error: false, radial_depth: 30, ..NormSettings::default() },
            ..MultiplierSettings::default()
        },
    };
    require((2..=3).contains(&n), &cfg.suite, "n in {2, 3}", n)?;
    require(alpha > 0.0, &cfg.suite, "alpha > 0 (mixed-norm source)", alpha)?;
    require(beta > 0.0, &cfg.suite, "beta > 0", beta)?;
    require(c.m > alpha - 1.0, &cfg.suite, "m > alpha - 1", format!("m = {}, alpha = {alpha}", c.m))?;
    let mut rep = report(cfg, MULTIPLIER_ANCHOR, &c);
    let families: Vec<Vec<HarmonicFunction>> = c
        .family_profiles
        .iter()
        .enumerate()
        .map(|(i, p)| random_family(n, c.family_degree, c.family_size, *p, cfg.seed.wrapping_add(1000 * (i as u64 + 1))))
        .collect::<harmspace::Result<_>>()?;
    for (pi, (name, source, target)) in c.problems.iter().enumerate() {
        for k in 0..c.per_shape {
            let profile = c.profiles[k % c.profiles.len()];
            let seed = cfg.seed.wrapping_add((pi * c.per_shape + k) as u64);
            let prob = MultiplierProblem {
                source: *source,
                target: *target,
                c: random_field(n, c.degree, profile, seed)?,
                m: c.m,
            };
            let id = format!("{name}/seq{k}");
            let (certs, cases) = multiplier_stability(&prob, &families, &c.settings, c.spread, &id)?;
            rep.extend(cases.into_iter().map(|cs| cs.with_input("sequence_seed", seed).with_input("profile", profile)));
            rep.note(&id, certs.iter().map(|x| x.constant).collect::<Vec<_>>());
        }
    }

    // c ≡ 0 and c ≡ 1 from B^{p,1}_α to itself
    let same = SpaceSpec::mixed(2.0, 1.0, alpha);
    for (name, value) in [("zero", 0.0), ("one", 1.0)] {
        let prob = MultiplierProblem { source: same, target: same, c: CoefficientField::constant(n, c.family_degree, value)?, m: c.m };
        let cert = verify_multiplier_theorem(&prob, &families[0], &c.settings)?;
        let worst = cert.ratios.iter().fold(0.0f64, |a, r| a.max((r - value).abs()));
        rep.push(CaseResult::absolute(format!("{name}/ratios"), worst, 0.0, 1e-12).with_input("ratios", &cert.ratios));
        if value == 0.0 {
            rep.push(CaseResult::absolute("zero/functional", cert.functional.value, 0.0, 0.0));
        } else {
            rep.push(
                CaseResult::at_most("one/sufficiency", cert.ratio_max, cert.c_tol * cert.functional.value)
                    .with_input("functional", cert.functional.value),
            );
        }
    }
    Ok(rep)
}

pub const YOUNG_ANCHOR: &str =
    "convolution bound ||g*f||_(H^r_beta) <= C ||g||_(H^p_gamma) ||f||_(H^q_alpha), 1/q + 1/p = 1 + 1/r, alpha + gamma = beta";

#[derive(Serialize)]
struct YoungConfig {
    n: usize,
    exponents: (f64, f64, f64),
    weights: (f64, f64, f64),
    degree: usize,
    family_size: usize,
    bound: f64,
    norms: NormSettings,
}

pub fn young(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let n = cfg.n.first().copied().unwrap_or(2);
    let q = cfg.q.first().copied().unwrap_or(2.0);
    let c = YoungConfig {
        n,
        exponents: (cfg.p.first().copied().unwrap_or(1.0), q, cfg.s.first().copied().unwrap_or(q)),
        weights: (
            cfg.alpha.first().copied().unwrap_or(0.5),
            cfg.beta.first().copied().unwrap_or(0.5),
            cfg.gamma.first().copied().unwrap_or(0.0),
        ),
        degree: cfg.degree.unwrap_or(8),
        family_size: cfg.cases.unwrap_or(if cfg.heavy() { 40 } else { 10 }),
        bound: cfg.bound.unwrap_or(1.0 + 1e-6),
        norms: NormSettings { estimate_error: false, ..NormSettings::default() },
    };
    let (p, q, r) = c.exponents;
    let (alpha, beta, gamma) = c.weights;
    let inv = |e: f64| if e.is_infinite() { 0.0 } else { 1.0 / e };
    require((2..=3).contains(&n), &cfg.suite, "n in {2, 3}", n)?;
    require(p >= 1.0 && q >= 1.0 && r >= 1.0, &cfg.suite, "p, q, r >= 1", format!("{p}, {q}, {r}"))?;
    require((inv(q) + inv(p) - 1.0 - inv(r)).abs() < 1e-12, &cfg.suite, "1/q + 1/p = 1 + 1/r", format!("p = {p}, q = {q}, r = {r}"))?;
    require(alpha >= 0.0 && gamma >= 0.0 && (alpha + gamma - beta).abs() < 1e-12, &cfg.suite, "alpha, gamma >= 0 and alpha + gamma = beta", format!("{alpha}, {beta}, {gamma}"))?;
    let g = HarmonicFunction::new(random_field(n, c.degree, DecayProfile::Power { a: 1.0 }, cfg.seed)?)?;
    let family = random_family(n, c.degree, c.family_size, DecayProfile::Power { a: 0.5 }, cfg.seed.wrapping_add(1))?;
    let inner = verify_young_proposition(&g, c.exponents, c.weights, &family, c.bound, &c.norms)?;
    let mut rep = report(cfg, YOUNG_ANCHOR, &c);
    rep.extend(inner.cases);
    Ok(rep)
}

pub const EMBEDDING_ANCHOR: &str = "pointwise bound |f(x)| (1-|x|)^((alpha+n)/p) <= C ||f||_(A^p_alpha)";

#[derive(Serialize)]
struct EmbeddingConfig {
    n: usize,
    p: Vec<f64>,
    alpha: Vec<f64>,
    degree: usize,
    polynomials: usize,
    poles: Vec<f64>,
    m: f64,
    bound: f64,
    norms: NormSettings,
}

pub fn embedding(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let n = cfg.n.first().copied().unwrap_or(2);
    let c = EmbeddingConfig {
        n,
        p: if cfg.p.is_empty() { vec![1.0, 2.0] } else { cfg.p.clone() },
        alpha: if cfg.alpha.is_empty() { vec![0.0, 1.0] } else { cfg.alpha.clone() },
        degree: cfg.degree.unwrap_or(6),
        polynomials: cfg.cases.unwrap_or(5),
        poles: vec![0.5, 0.8, 0.9, 0.95],
        m: cfg.m.first().copied().unwrap_or(2.0),
        bound: cfg.bound.unwrap_or(10.0),
        norms: NormSettings { estimate_error: false, ..NormSettings::default() },
    };
    require((2..=3).contains(&n), &cfg.suite, "n in {2, 3}", n)?;
    require(c.m > 0.0, &cfg.suite, "m > 0", c.m)?;
    let mut g = rng(cfg.seed, 0);
    let polys: Vec<HarmonicFunction> =
        (0..c.polynomials).map(|_| super::random_polynomial(&mut g, n, c.degree)).collect::<Result<_>>()?;
    let dir = unit_vector(&mut g, n);
    let poles: Vec<ExtremalFunction> = c
        .poles
        .iter()
        .map(|&r| ExtremalFunction::new(c.m, BallPoint::new(n, r, &dir)?))
        .collect::<harmspace::Result<_>>()?;
    let mut family: Vec<(String, &dyn BallFunction, Option<&HarmonicFunction>)> = Vec::new();
    for (i, f) in polys.iter().enumerate() {
        family.push((format!("polynomial{i}"), f, Some(f)));
    }
    for (r, f) in c.poles.iter().zip(&poles) {
        family.push((format!("f_y/|y|={r}"), f, None));
    }
    let mut rep = report(cfg, EMBEDDING_ANCHOR, &c);
    for &p in &c.p {
        for &alpha in &c.alpha {
            require(p > 0.0 && p.is_finite(), &cfg.suite, "0 < p < inf", p)?;
            require(alpha > -1.0, &cfg.suite, "alpha > -1", alpha)?;
            let inner = embedding_check(&family, p, alpha, c.bound, &c.norms)?;
            rep.extend(inner.cases.into_iter().map(|mut cs| {
                cs.case_id = format!("p={p}/alpha={alpha}/{}", cs.case_id);
                cs
            }));
        }
    }
    Ok(rep)
}
