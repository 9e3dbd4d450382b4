use approx::assert_relative_eq;
use harmspace::harmonic_fn::{BallFunction, HarmonicFunction};
use harmspace::kernels::{BallPoint, ExtremalFunction};
use harmspace::multipliers::{random_field, DecayProfile};
use harmspace::norms::{
    embedding_ratio, halfspace_norm, radial_mean_of, space_norm, space_norm_of, HalfSpaceFunction, HalfSpaceSettings,
    NormSettings, ShiftedPoisson, SpaceSpec,
};
use proptest::prelude::*;
use statrs::function::beta::beta;
use statrs::function::gamma::gamma;

fn quick() -> NormSettings {
    NormSettings { estimate_error: false, ..NormSettings::default() }
}

fn random(n: usize, degree: usize, seed: u64) -> HarmonicFunction {
    HarmonicFunction::new(random_field(n, degree, DecayProfile::Power { a: 0.5 }, seed).unwrap()).unwrap()
}

fn energy(f: &HarmonicFunction, k: usize) -> f64 {
    f.coefficients().row(k).iter().map(|c| c * c).sum()
}

#[test]
fn constant_norms() {
    let s = quick();
    for n in [2usize, 3] {
        let one = HarmonicFunction::constant(n, 1.0).unwrap();
        for (p, alpha) in [(1.0, 0.0), (2.0, 0.5), (0.5, -0.5), (3.0, 2.0)] {
            let a = space_norm_of(&one, &SpaceSpec::bergman(p, alpha), &s).unwrap().value;
            let nf = n as f64;
            assert_relative_eq!(a.powf(p), gamma(alpha + 1.0) * gamma(nf) / gamma(alpha + 1.0 + nf), max_relative = 1e-10);
        }
        for (p, q, alpha) in [(1.0, 1.0, 0.5), (2.0, 1.0, 1.0), (3.0, 2.0, 0.7)] {
            let b = space_norm_of(&one, &SpaceSpec::mixed(p, q, alpha), &s).unwrap().value;
            let ap = alpha * p;
            let closed = (0.5 * gamma(ap) * gamma(n as f64 / 2.0) / gamma(ap + n as f64 / 2.0)).powf(1.0 / p);
            assert_relative_eq!(b, closed, max_relative = 1e-10);
        }
        for alpha in [0.0, 0.5, 2.0] {
            assert_relative_eq!(space_norm_of(&one, &SpaceSpec::hardy(1.5, alpha), &s).unwrap().value, 1.0, max_relative = 1e-12);
        }
        for p in [0.5, 1.0, 2.0, f64::INFINITY] {
            assert_relative_eq!(radial_mean_of(&one, p, 0.3, &s).unwrap(), 1.0, max_relative = 1e-12);
        }
    }
}

#[test]
fn parseval_for_p_two() {
    let s = quick();
    for n in [2usize, 3] {
        let f = random(n, 7, 40 + n as u64);
        for r in [0.0f64, 0.5, 0.97] {
            let oracle: f64 = (0..=f.degree()).map(|k| r.powi(2 * k as i32) * energy(&f, k)).sum::<f64>().sqrt();
            assert_relative_eq!(radial_mean_of(&f, 2.0, r, &s).unwrap(), oracle, max_relative = 1e-10);
        }
        for alpha in [-0.5, 0.0, 1.5] {
            // ∫₀¹ r^{2k+n−1} (1 − r)^α dr = B(2k + n, α + 1)
            let oracle: f64 = (0..=f.degree()).map(|k| energy(&f, k) * beta((2 * k + n) as f64, alpha + 1.0)).sum();
            let a = space_norm_of(&f, &SpaceSpec::bergman(2.0, alpha), &s).unwrap().value;
            assert_relative_eq!(a * a, oracle, max_relative = 1e-8);
        }
    }
}

#[test]
fn sup_norm_identities() {
    let s = quick();
    for n in [2usize, 3] {
        for seed in 0..4 {
            let f = random(n, 6, 100 + seed);
            for alpha in [0.0, 0.5, 1.0] {
                let a = space_norm_of(&f, &SpaceSpec::bergman_sup(alpha), &s).unwrap().value;
                let h = space_norm_of(&f, &SpaceSpec::hardy(f64::INFINITY, alpha), &s).unwrap().value;
                assert_relative_eq!(a, h, max_relative = 1e-10);
            }
            for q in [1.0, 2.0] {
                for alpha in [0.5, 1.0] {
                    let b = space_norm_of(&f, &SpaceSpec::mixed(f64::INFINITY, q, alpha), &s).unwrap().value;
                    let h = space_norm_of(&f, &SpaceSpec::hardy(q, alpha), &s).unwrap().value;
                    assert_relative_eq!(b, h, max_relative = 1e-10);
                }
            }
        }
    }
}

#[test]
fn mixed_norm_inclusion_ratio_is_bounded() {
    let s = quick();
    let alpha = 0.5;
    let ratio = |f: &dyn BallFunction| {
        let lo = space_norm(f, &SpaceSpec::mixed(1.0, 1.0, alpha), &s).unwrap().value;
        let hi = space_norm(f, &SpaceSpec::mixed(2.0, 1.0, alpha), &s).unwrap().value;
        hi / lo
    };
    let mut ratios = Vec::new();
    for seed in 0..4 {
        ratios.push(ratio(&random(2, 6, 200 + seed)));
    }
    let poles: Vec<f64> = vec![0.5, 0.8, 0.9, 0.95];
    let kernel: Vec<f64> = poles
        .iter()
        .map(|&y| ratio(&ExtremalFunction::new(2.0, BallPoint::new(2, y, &[1.0, 0.0]).unwrap()).unwrap()))
        .collect();
    ratios.extend(&kernel);
    assert!(ratios.iter().all(|r| r.is_finite() && *r > 0.0));
    // no growth as the pole approaches the boundary
    assert!(kernel.windows(2).all(|w| w[1] <= w[0] * 1.05), "{kernel:?}");
}

#[test]
fn embedding_examples() {
    let s = quick();
    let one = HarmonicFunction::constant(2, 1.0).unwrap();
    for (p, alpha) in [(1.0, 0.0), (2.0, 1.0)] {
        let e = embedding_ratio(&one, Some(&one), p, alpha, &s).unwrap();
        let norm = space_norm_of(&one, &SpaceSpec::bergman(p, alpha), &s).unwrap().value;
        assert_relative_eq!(e.ratio, 1.0 / norm, max_relative = 1e-12);
        let seven = one.scaled(7.0);
        let e7 = embedding_ratio(&seven, Some(&seven), p, alpha, &s).unwrap();
        assert_relative_eq!(e7.ratio, e.ratio, max_relative = 1e-14);
    }
    // ratio against 1 − |y| must not decay
    let poles = [0.5, 0.9, 0.99];
    let pts: Vec<(f64, f64)> = poles
        .iter()
        .map(|&y| {
            let f = ExtremalFunction::new(2.0, BallPoint::new(2, y, &[0.6, 0.8]).unwrap()).unwrap();
            ((1.0 - y as f64).ln(), embedding_ratio(&f, None, 2.0, 0.0, &s).unwrap().ratio.ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!(slope >= -0.05, "slope {slope}");
}

struct Zero;

impl HalfSpaceFunction for Zero {
    fn dimension(&self) -> usize {
        2
    }

    fn value(&self, _x: &[f64; 3], _t: f64) -> f64 {
        0.0
    }
}

#[test]
fn halfspace_norms() {
    let s = HalfSpaceSettings::default();
    let pi = std::f64::consts::PI;
    // ∫_R (c₁ s / (x² + s²))³ dx = 3 / (8 π² s²) integrates to 3 / (8 π²) over s ≥ 1
    let f = ShiftedPoisson { n: 1, shift: 1.0, scale: 1.0 };
    let v = halfspace_norm(&f, &SpaceSpec::half_bergman(3.0, 0.0), 1.0, &s).unwrap().value;
    assert_relative_eq!(v.powi(3), 3.0 / (8.0 * pi * pi), max_relative = 1e-6);
    // n = 1, p = 2, α = −1/2: ∫₀^∞ t^{−1/2} / (2π (t + 1)) dt = 1/2
    let v = halfspace_norm(&f, &SpaceSpec::half_bergman(2.0, -0.5), 1.0, &s).unwrap().value;
    assert_relative_eq!(v * v, 0.5, max_relative = 1e-4);
    // n = 2, p = 2, α = 0: ∫_{R²} P(x, s)² dx = 1 / (8 π s²)
    let f2 = ShiftedPoisson { n: 2, shift: 1.0, scale: 1.0 };
    let v = halfspace_norm(&f2, &SpaceSpec::half_bergman(2.0, 0.0), 2.0, &s).unwrap().value;
    assert_relative_eq!(v * v, 1.0 / (8.0 * pi), max_relative = 1e-6);

    // f_λ(x, t) = f(λx, λt) scales the norm by λ^{−(n+1+α)/p}
    let (p, alpha) = (2.0, 0.3);
    let base = halfspace_norm(&f2, &SpaceSpec::half_bergman(p, alpha), 2.0, &s).unwrap().value;
    for lam in [0.5, 3.0] {
        let g = ShiftedPoisson { n: 2, shift: 1.0, scale: lam };
        let v = halfspace_norm(&g, &SpaceSpec::half_bergman(p, alpha), 2.0, &s).unwrap().value;
        assert_relative_eq!(v, base * lam.powf(-(3.0 + alpha) / p), max_relative = 1e-6);
    }

    assert_eq!(halfspace_norm(&Zero, &SpaceSpec::half_bergman(1.0, 0.0), 10.0, &s).unwrap().value, 0.0);
    assert_eq!(halfspace_norm(&Zero, &SpaceSpec::half_sup(1.0), 10.0, &s).unwrap().value, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    // |f|^p is subharmonic for p >= 1; for p < 1 the means of a positive f can fall below f(0)
    #[test]
    fn integral_means_increase_with_radius(n in 2usize..=3, seed in 0u64..10_000, p in prop::sample::select(vec![1.0, 2.0, 4.0]), r1 in 0.0f64..0.99, r2 in 0.0f64..0.99) {
        let f = random(n, 5, seed);
        let s = NormSettings { sphere_degree: Some(40), ..quick() };
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        let a = radial_mean_of(&f, p, lo, &s).unwrap();
        let b = radial_mean_of(&f, p, hi, &s).unwrap();
        prop_assert!(a <= b + 1e-10, "{a} {b}");
    }
}
