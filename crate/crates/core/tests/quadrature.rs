use approx::assert_relative_eq;
use harmspace::quadrature::{
    fit_decay_exponent, geometric_gaps, integrate_radial, integrate_radial_gap, integrate_sphere, RadialRule,
    SphereRule,
};
use harmspace::spharm::HarmonicBasis;
use proptest::prelude::*;
use statrs::function::gamma::gamma;

/// Midpoint sum of `f(r) (1 − r)^alpha` with `panels` cells.
fn midpoint(f: impl Fn(f64) -> f64, alpha: f64, panels: usize) -> f64 {
    let h = 1.0 / panels as f64;
    (0..panels)
        .map(|i| {
            let r = (i as f64 + 0.5) * h;
            f(r) * (1.0 - r).powf(alpha)
        })
        .sum::<f64>()
        * h
}

#[test]
fn smooth_integrand_matches_dense_midpoint_sum() {
    let f = |r: f64| (1.0 - 0.5 * r).powi(-3);
    let rule = RadialRule::new(16, 40).unwrap();
    let q = integrate_radial(f, 1.0, &rule).unwrap();
    let oracle = midpoint(f, 1.0, 10_000_000);
    assert_relative_eq!(q, oracle, max_relative = 1e-8);
}

#[test]
fn unit_constant_and_gamma_example() {
    let rule = RadialRule::new(16, 40).unwrap();
    assert_relative_eq!(integrate_radial(|_| 1.0, 0.0, &rule).unwrap(), 1.0, max_relative = 1e-14);
    // (1 − r²) r = (1 − r)(1 + r) r
    let v = integrate_radial(|r| (1.0 + r) * r, 1.0, &rule).unwrap();
    assert_relative_eq!(v, 0.25, max_relative = 1e-13);
}

#[test]
fn gamma_grid() {
    for n in [2usize, 3] {
        for s in [-0.5, 0.0, 1.0, 2.5] {
            for t in [0.0, 0.5, 3.0] {
                let rule = RadialRule::for_weight(16, s, 0.0, 1e-15).unwrap();
                let q = integrate_radial(|r| (1.0 + r).powf(s) * r.powf(2.0 * t + n as f64 - 1.0), s, &rule).unwrap();
                let nh = n as f64 / 2.0;
                let exact = 0.5 * gamma(s + 1.0) * gamma(nh + t) / gamma(s + 1.0 + nh + t);
                assert_relative_eq!(q, exact, max_relative = 1e-8);
            }
        }
    }
}

#[test]
fn sphere_rule_integrates_basis_products() {
    for n in [2usize, 3] {
        let basis = HarmonicBasis::new(n, 12).unwrap();
        // degree 24 integrands need a rule exact to degree 24
        let rule = SphereRule::new(n, 24).unwrap();
        let vals: Vec<Vec<f64>> = rule.nodes().iter().map(|x| basis.eval(x).unwrap()).collect();
        assert_relative_eq!(integrate_sphere(|_| 1.0, &rule).unwrap(), 1.0, max_relative = 1e-14);
        for i in 0..basis.len() {
            for j in 0..=i {
                let g: f64 = vals.iter().zip(rule.weights()).map(|(v, w)| w * v[i] * v[j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g - expect).abs() < 1e-12, "n={n} i={i} j={j}: {g}");
            }
            if i > 0 {
                let mean: f64 = vals.iter().zip(rule.weights()).map(|(v, w)| w * v[i]).sum();
                assert!(mean.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn fit_examples() {
    let gaps = geometric_gaps(1e-1, 1e-4, 10);
    let f = fit_decay_exponent(|d| d.powi(-2), &gaps).unwrap();
    assert!((f.slope + 2.0).abs() < 1e-6);
    let f = fit_decay_exponent(|d| 3.0 * d.sqrt(), &gaps).unwrap();
    assert!((f.slope - 0.5).abs() < 1e-6);
    // ∫₀¹ (1 − ρr)^{-2} dr = 1/(1 − ρ) exactly
    let rule = RadialRule::new(16, 40).unwrap();
    let f = fit_decay_exponent(
        |d| integrate_radial_gap(|_, s| (d + s - d * s).powi(-2), 0.0, &rule).unwrap(),
        &geometric_gaps(1e-2, 1e-5, 10),
    )
    .unwrap();
    assert!((f.slope + 1.0).abs() < 0.05, "{}", f.slope);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planted_exponents_are_recovered(e in -5.0f64..2.0, a in 0.1f64..10.0) {
        let gaps = geometric_gaps(1e-1, 1e-5, 12);
        let fit = fit_decay_exponent(|d| a * d.powf(e), &gaps).unwrap();
        prop_assert!((fit.slope - e).abs() < 1e-6);
    }

    #[test]
    fn refining_the_rule_is_self_consistent(alpha in -0.9f64..3.0, c in 0.0f64..0.9, k in 0i32..6) {
        let f = |r: f64| (1.0 - c * r).powi(-k) * (1.0 + r * r);
        let rule = RadialRule::for_weight(12, alpha, 0.0, 1e-13).unwrap();
        let a = integrate_radial(f, alpha, &rule).unwrap();
        let b = integrate_radial(f, alpha, &rule.refined().unwrap()).unwrap();
        // the cap treats f as flat on the last gap, so its error carries f'(1) as well as f(1)
        let slope = k as f64 * c / (1.0 - c) * f(1.0) + 2.0 / (1.0 - c).powi(k);
        prop_assert!((a - b).abs() <= 1e-12 * (f(1.0) + slope), "{a} {b}");
    }
}
