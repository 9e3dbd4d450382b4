use approx::assert_relative_eq;
use harmspace::harmonic_fn::{
    convolve, convolved_poisson, fractional_derivative, lambda_factor, pairing_values, CoefficientField, HarmonicFunction,
};
use harmspace::kernels::BallPoint;
use harmspace::multipliers::{random_field, DecayProfile};
use harmspace::quadrature::{integrate_sphere, SphereRule};
use proptest::prelude::*;
use statrs::function::gamma::gamma;

fn random(n: usize, degree: usize, seed: u64) -> HarmonicFunction {
    HarmonicFunction::new(random_field(n, degree, DecayProfile::Power { a: 0.5 }, seed).unwrap()).unwrap()
}

fn dirs(n: usize) -> Vec<[f64; 3]> {
    if n == 2 {
        vec![[1.0, 0.0, 0.0], [0.6, 0.8, 0.0], [-0.28, -0.96, 0.0]]
    } else {
        vec![[0.0, 0.0, 1.0], [0.48, 0.6, 0.64], [-0.36, 0.48, -0.8]]
    }
}


#[test]
fn functions_are_harmonic() {
    // five-point / seven-point Laplacian on cartesian coordinates
    for n in [2usize, 3] {
        let f = random(n, 6, 11);
        let at = |x: [f64; 3]| f.eval(&BallPoint::from_cartesian(n, &x[..n]).unwrap()).unwrap();
        let x0 = [0.2, -0.1, 0.15];
        let h = 1e-3;
        let mut lap = 0.0;
        for i in 0..n {
            let (mut p, mut m) = (x0, x0);
            p[i] += h;
            m[i] -= h;
            lap += (at(p) - 2.0 * at(x0) + at(m)) / (h * h);
        }
        assert!(lap.abs() < 1e-4, "n={n} laplacian={lap}");
    }
}

#[test]
fn mean_value_property() {
    for n in [2usize, 3] {
        let f = random(n, 8, 3);
        let rule = SphereRule::new(n, 18).unwrap();
        for r in [0.0, 0.4, 0.95] {
            let mean = integrate_sphere(|x| f.eval_polar(r, x), &rule).unwrap();
            assert_relative_eq!(mean, f.coefficients().get(0, 1), epsilon = 1e-13);
        }
    }
}

#[test]
fn trivial_multipliers() {
    let f = random(3, 5, 1);
    assert_eq!(convolve(&CoefficientField::constant(3, 5, 1.0).unwrap(), &f).unwrap(), f);
    let zero = convolve(&CoefficientField::zeros(3, 5).unwrap(), &f).unwrap();
    assert!(zero.coefficients().rows().iter().flatten().all(|c| *c == 0.0));
}

#[test]
fn convolution_is_a_sphere_integral() {
    // (c ∗ f)(r² x') = ∫_S (g ∗ P_{y'})(r x') f(r y') dσ(y') with c the coefficients of g
    for n in [2usize, 3] {
        let f = random(n, 6, 21);
        let g = random(n, 6, 22);
        let cf = convolve(g.coefficients(), &f).unwrap();
        let rule = SphereRule::new(n, 14).unwrap();
        let r = 0.8;
        for x in dirs(n) {
            let lhs = cf.eval_polar(r * r, &x);
            let rhs = integrate_sphere(|y| convolved_poisson(&g, &y[..n]).unwrap().eval_polar(r, &x) * f.eval_polar(r, y), &rule).unwrap();
            assert_relative_eq!(lhs, rhs, epsilon = 1e-12, max_relative = 1e-12);
        }
    }
}

#[test]
fn lambda_factor_matches_gamma() {
    for n in [2usize, 3] {
        for k in 0..15 {
            for t in [0.3, 1.0, 2.5] {
                let h = n as f64 / 2.0 + k as f64;
                assert_relative_eq!(lambda_factor(n, k, t), gamma(h + t) / (gamma(h) * gamma(t)), max_relative = 1e-12);
            }
        }
    }
    assert!(fractional_derivative(&random(2, 2, 0), 0.0).is_err());
}

#[test]
fn pairing_with_constants_and_at_the_centre() {
    let f = HarmonicFunction::constant(3, 2.0).unwrap();
    let g = HarmonicFunction::constant(3, -1.5).unwrap();
    let v = pairing_values(&f, &g, 0.5, 0.6, 0.3, &[0.0, 0.0, 1.0]).unwrap();
    for side in [v.series, v.sphere, v.ball] {
        assert_relative_eq!(side, -3.0, max_relative = 1e-10);
    }
    // r = 0 keeps only the degree-0 terms
    let f = random(2, 5, 5);
    let g = random(2, 5, 6);
    let v = pairing_values(&f, &g, 1.0, 0.0, 0.7, &[0.6, 0.8]).unwrap();
    let expected = f.coefficients().get(0, 1) * g.coefficients().get(0, 1);
    assert_relative_eq!(v.series, expected, max_relative = 1e-14);
    assert!(v.max_deviation() < 1e-10);
    assert!(pairing_values(&f, &g, -1.0, 0.5, 0.5, &[1.0, 0.0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_and_lambda_are_linear(n in 2usize..=3, seed in 0u64..1000, a in -3.0f64..3.0, b in -3.0f64..3.0, t in 0.1f64..3.0) {
        let f = random(n, 5, seed);
        let g = random(n, 5, seed + 1);
        let c = random_field(n, 5, DecayProfile::Exponential { b: 0.3 }, seed + 2).unwrap();
        let comb = f.combine(a, &g, b).unwrap();
        let lhs = convolve(&c, &comb).unwrap();
        let rhs = convolve(&c, &f).unwrap().combine(a, &convolve(&c, &g).unwrap(), b).unwrap();
        let lam = fractional_derivative(&comb, t).unwrap();
        let lam2 = fractional_derivative(&f, t).unwrap().combine(a, &fractional_derivative(&g, t).unwrap(), b).unwrap();
        for x in dirs(n) {
            prop_assert!((lhs.eval_polar(0.7, &x) - rhs.eval_polar(0.7, &x)).abs() < 1e-12);
            prop_assert!((lam.eval_polar(0.7, &x) - lam2.eval_polar(0.7, &x)).abs() < 1e-11);
        }
    }

    #[test]
    fn convolved_poisson_is_symmetric_and_commutes_with_lambda(n in 2usize..=3, seed in 0u64..1000, t in 0.1f64..3.0) {
        let g = random(n, 6, seed);
        let ds = dirs(n);
        let (x, y) = (&ds[1], &ds[2]);
        let a = convolved_poisson(&g, &y[..n]).unwrap().eval_polar(1.0, x);
        let b = convolved_poisson(&g, &x[..n]).unwrap().eval_polar(1.0, y);
        prop_assert!((a - b).abs() < 1e-12);
        let l1 = fractional_derivative(&convolved_poisson(&g, &y[..n]).unwrap(), t).unwrap();
        let l2 = convolved_poisson(&fractional_derivative(&g, t).unwrap(), &y[..n]).unwrap();
        prop_assert_eq!(l1.degree(), l2.degree());
        for (r1, r2) in l1.coefficients().rows().iter().flatten().zip(l2.coefficients().rows().iter().flatten()) {
            prop_assert!((r1 - r2).abs() <= 1e-12 * r1.abs().max(1.0));
        }
    }

    #[test]
    fn pairing_sides_agree(n in 2usize..=3, seed in 0u64..1000, m in -0.5f64..3.0, r in 0.0f64..0.9, rho in 0.0f64..0.9, which in 0usize..3) {
        let f = random(n, 6, seed);
        let g = random(n, 4, seed + 7);
        let y = dirs(n)[which];
        let v = pairing_values(&f, &g, m, r, rho, &y[..n]).unwrap();
        prop_assert!(v.max_deviation() <= 1e-8 * v.series.abs().max(1.0), "{v:?}");
    }
}
