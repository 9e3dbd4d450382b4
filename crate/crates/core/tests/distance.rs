use harmspace::distance::{
    decompose, default_beta, distance_bound_check, halfspace_reproduce, recheck, s2_check,
    s2_integral, t2_integral, DistanceEstimate, DistanceSettings, S2Settings, SublevelSet,
};
use harmspace::harmonic_fn::{BallFunction, CoefficientField, HarmonicFunction};
use harmspace::kernels::{BallPoint, BergmanKernelBall, HalfSpacePoint};
use harmspace::multipliers::{random_field, DecayProfile};
use harmspace::norms::{HalfSpaceSettings, ShiftedPoisson};

fn quick() -> DistanceSettings {
    DistanceSettings { angle_samples: 64, ..DistanceSettings::default() }
}

fn interior_points(n: usize, count: usize) -> Vec<BallPoint> {
    (0..count)
        .map(|i| {
            let r = 0.7 * (i as f64 + 0.5) / count as f64;
            let a = 2.399963 * i as f64;
            let d = if n == 2 {
                vec![a.cos(), a.sin()]
            } else {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                let s = (1.0 - z * z).sqrt();
                vec![s * a.cos(), s * a.sin(), z]
            };
            BallPoint::new(n, r, &d).unwrap()
        })
        .collect()
}

#[test]
fn empty_sublevel_set_gives_zero() {
    let f = HarmonicFunction::constant(3, 2.0).unwrap();
    // sup |f| (1 − |x|)^t = 2
    let v = t2_integral(&f, 2.5, 2.0, 1.0, 2.0, &quick()).unwrap();
    assert_eq!(v.value, 0.0);
    assert_eq!(v.nodes, 0);
    assert!(!v.infinite);
    let set = SublevelSet::new(&f, 2.5, 4.0 / 3.0).unwrap();
    assert!(!set.contains(&BallPoint::new(3, 0.0, &[1.0, 0.0, 0.0]).unwrap()));
}

#[test]
fn parameter_constraints_are_domain_errors() {
    let f = HarmonicFunction::constant(2, 1.0).unwrap();
    let s = quick();
    assert!(t2_integral(&f, 0.5, 1.0, 0.0, 1.0, &s).is_err());
    assert!(t2_integral(&f, 0.5, 2.0, -1.0, 1.0, &s).is_err());
    assert!(t2_integral(&f, 0.5, 2.0, 0.0, 0.0, &s).is_err());
    assert!(t2_integral(&f, -0.5, 2.0, 0.0, 1.0, &s).is_err());
    assert!(decompose(&f, 0.5, 2.0, 1.0, &s).is_err());
    let g = ShiftedPoisson { n: 2, shift: 1.0, scale: 1.0 };
    assert!(s2_integral(&g, 0.1, 1.0, 0.0, 1, &S2Settings::default()).is_err());
    assert!(s2_integral(&g, 0.1, 2.0, 0.0, 0, &S2Settings::default()).is_err());
}

#[test]
fn t2_of_a_constant_matches_nested_quadrature() {
    // n = 2, p = 2, α = 0: t = 1, β = 1, U = {|y| ≤ 3/4} for f ≡ 1, ε = 1/4
    let f = HarmonicFunction::constant(2, 1.0).unwrap();
    let beta = default_beta(2.0, 0.0, 1.0);
    assert_eq!(beta, 1.0);
    let v = t2_integral(&f, 0.25, 2.0, 0.0, beta, &quick()).unwrap();
    assert!(!v.infinite);
    assert_eq!(v.e_inner, 0.0);

    // U is rotation invariant, so the inner integral depends on |x| only;
    // the fixed rule meets the edge of U between nodes, hence the 1% bound
    let kernel = BergmanKernelBall::new(2, beta, 0).unwrap();
    let radius = 0.75;
    let (nr, nt, no) = (200, 256, 160);
    let inner = |rho: f64| -> f64 {
        let x = BallPoint::new(2, rho, &[1.0, 0.0]).unwrap();
        let mut total = 0.0;
        for i in 0..nr {
            let r = radius * (i as f64 + 0.5) / nr as f64;
            let mut ring = 0.0;
            for j in 0..nt {
                let th = std::f64::consts::TAU * j as f64 / nt as f64;
                let y = BallPoint::new(2, r, &[th.cos(), th.sin()]).unwrap();
                ring += kernel.eval(&x, &y).unwrap().abs();
            }
            total += ring / nt as f64 * r;
        }
        total * radius / nr as f64
    };
    let oracle: f64 = (0..no)
        .map(|i| {
            let rho = (i as f64 + 0.5) / no as f64;
            inner(rho).powi(2) * rho
        })
        .sum::<f64>()
        / no as f64;
    assert!((v.value / oracle - 1.0).abs() < 0.01, "{} vs {oracle}", v.value);
}

#[test]
fn t2_is_non_increasing_in_eps() {
    let f = HarmonicFunction::new(CoefficientField::from_fn(2, 2, |k, j| [3.0, 1.0, 0.5][k] * (j == 1) as u8 as f64).unwrap()).unwrap();
    let s = quick();
    let values: Vec<f64> = [0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2]
        .iter()
        .map(|&e| t2_integral(&f, e, 2.0, 0.0, 1.0, &s).unwrap().value)
        .collect();
    assert!(values.windows(2).all(|w| w[1] <= w[0]), "{values:?}");
    assert_eq!(*values.last().unwrap(), 0.0);
}

#[test]
fn large_eps_leaves_everything_in_f1() {
    let s = quick();
    let f = HarmonicFunction::new(random_field(2, 4, DecayProfile::Power { a: 1.0 }, 8).unwrap()).unwrap();
    // |f| ≤ Σ |b_k^j| · √2 on the closed ball
    let bound: f64 = f.coefficients().rows().iter().flatten().map(|c| c.abs() * 2f64.sqrt()).sum();
    let dec = decompose(&f, 2.0 * bound, 1.0, 1.0, &s).unwrap();
    assert!(dec.f2.is_empty());
    for x in interior_points(2, 10) {
        assert_eq!(dec.f2.value(&x), 0.0);
        assert_eq!(dec.f1().value(&x), f.value(&x));
        assert!((dec.complement.value(&x) - f.value(&x)).abs() <= 1e-6 * f.value(&x).abs().max(1.0));
    }
}

#[test]
fn zero_function_has_zero_distance() {
    let f = HarmonicFunction::new(CoefficientField::zeros(2, 2).unwrap()).unwrap();
    let est = distance_bound_check(&f, 2.0, 0.0, &[0.5, 0.25], &quick()).unwrap();
    assert_eq!(est.t2, 0.0);
    assert!(est.rows.iter().all(|r| r.value == 0.0 && r.f1_norm == 0.0 && r.f2_norm == 0.0));
    assert!(est.verdict);
}

#[test]
fn estimate_round_trips_and_rechecks() {
    let s = quick();
    let f = HarmonicFunction::constant(2, 1.0).unwrap();
    let est = distance_bound_check(&f, 2.0, 0.0, &[0.5, 0.25], &s).unwrap();
    let text = serde_json::to_string(&est).unwrap();
    let back: DistanceEstimate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, est);
    let again = recheck(&back, &s);
    assert_eq!(again.verdict, est.verdict);
    assert_eq!(again.cases.len(), est.cases.len());
    assert!(est.rows.windows(2).all(|w| w[0].eps < w[1].eps));
    assert!(distance_bound_check(&f, 2.0, 0.0, &[], &s).is_err());
}

#[test]
fn s2_examples() {
    let f = ShiftedPoisson { n: 2, shift: 1.0, scale: 1.0 };
    let s = S2Settings::default();
    // sup |P(x, t + 1)| t^λ is finite; far above it V is empty
    let empty = s2_integral(&f, 10.0, 2.0, 0.0, 1, &s).unwrap();
    assert_eq!(empty.value, 0.0);
    assert_eq!(empty.nodes, 0);
    let check = s2_check(&f, 0.03, 2.0, 0.0, 1, &s).unwrap();
    assert!(check.consistent);
    let a = s2_integral(&f, 0.02, 2.0, 0.0, 1, &s).unwrap();
    let b = s2_integral(&f, 0.045, 2.0, 0.0, 1, &s).unwrap();
    assert!(b.value <= a.value);
}

#[test]
fn halfspace_reproduction_within_one_percent() {
    let f = ShiftedPoisson { n: 2, shift: 1.0, scale: 1.0 };
    let settings = HalfSpaceSettings::default();
    for (x, t) in [([0.0, 0.0], 0.5), ([1.0, -0.5], 1.0), ([0.3, 2.0], 0.1)] {
        let z = HalfSpacePoint::new(&x, t).unwrap();
        let exact = harmspace::norms::HalfSpaceFunction::value(&f, &z.x, t);
        let v = halfspace_reproduce(&f, &z, 1, 2.0, &settings).unwrap();
        assert!((v / exact - 1.0).abs() < 0.01, "{v} vs {exact}");
    }
}
