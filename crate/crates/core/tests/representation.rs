use harmspace::distance::{bergman_projection, DistanceSettings};
use harmspace::harmonic_fn::{BallFunction, CoefficientField, HarmonicFunction};
use harmspace::kernels::BallPoint;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_polynomial(n: usize, degree: usize, seed: u64) -> HarmonicFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = CoefficientField::from_fn(n, degree, |_, _| rng.random_range(-1.0..=1.0)).unwrap();
    HarmonicFunction::new(c).unwrap()
}

fn interior_points(n: usize, count: usize, seed: u64) -> Vec<BallPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-0.7..=0.7)).collect();
            if x.iter().map(|c| c * c).sum::<f64>() <= 0.49 {
                break BallPoint::from_cartesian(n, &x).unwrap();
            }
        })
        .collect()
}

#[test]
fn projection_reproduces_harmonic_polynomials() {
    let settings = DistanceSettings::default();
    for n in [2, 3] {
        for beta in [1.0, 2.0] {
            let f = random_polynomial(n, 4, 10 * n as u64 + beta as u64);
            let proj = bergman_projection(&f, beta, &settings).unwrap();
            let worst = interior_points(n, 50, 7)
                .iter()
                .map(|x| (proj.value(x) - f.value(x)).abs())
                .fold(0.0, f64::max);
            assert!(worst <= 1e-6, "n = {n}, beta = {beta}: {worst}");
        }
    }
}

#[test]
fn projection_of_one_is_one() {
    let settings = DistanceSettings::default();
    for n in [2, 3] {
        let one = HarmonicFunction::constant(n, 1.0).unwrap();
        let proj = bergman_projection(&one, 1.0, &settings).unwrap();
        for x in interior_points(n, 10, 3) {
            assert!((proj.value(&x) - 1.0).abs() < 1e-6);
        }
    }
}
