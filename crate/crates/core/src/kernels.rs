//! Poisson and Bergman kernels on the ball and the upper half-space, and
//! the extremal functions `f_{m,y} = Q_m(·, y)`.
//!
//! Ball kernels are zonal: they depend on `t = |x||y|` and `u = x'·y'`
//! only. Every closed form takes the complements `1 − t` and `1 − u`
//! explicitly so that values near the boundary diagonal keep their digits.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Result};
use crate::harmonic_fn::{BallFunction, CoefficientField, HarmonicFunction};
use crate::special::{gamma_ratio, Jet};
use crate::spharm::{check_unit, dim_harmonics, zonal_of_inner, HarmonicBasis};

/// A point `x = r x'` of the unit ball in `R^n`, `n ≤ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    n: usize,
    r: f64,
    gap: f64,
    dir: [f64; 3],
}

impl BallPoint {
    pub fn new(n: usize, r: f64, dir: &[f64]) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return domain(format!("ball point needs 0 <= r < 1, got {r}"));
        }
        Self::build(n, r, 1.0 - r, dir)
    }

    /// Point at distance `gap = 1 − r` from the sphere, `0 < gap ≤ 1`.
    pub fn with_gap(n: usize, gap: f64, dir: &[f64]) -> Result<Self> {
        if !(gap > 0.0 && gap <= 1.0) {
            return domain(format!("ball point needs 0 < 1 - r <= 1, got {gap}"));
        }
        Self::build(n, 1.0 - gap, gap, dir)
    }

    pub fn from_cartesian(n: usize, x: &[f64]) -> Result<Self> {
        if x.len() < n || !(2..=3).contains(&n) {
            return domain(format!("expected {n} coordinates with n in {{2, 3}}"));
        }
        let r = x.iter().take(n).map(|c| c * c).sum::<f64>().sqrt();
        if r == 0.0 {
            return Self::new(n, 0.0, &[1.0, 0.0, 0.0][..n]);
        }
        let dir: Vec<f64> = x.iter().take(n).map(|c| c / r).collect();
        Self::new(n, r, &dir)
    }

    fn build(n: usize, r: f64, gap: f64, dir: &[f64]) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return domain(format!("ball points are supported for n in {{2, 3}}, got {n}"));
        }
        check_unit(n, dir)?;
        let mut d = [0.0; 3];
        d[..n].copy_from_slice(&dir[..n]);
        Ok(BallPoint { n, r, gap, dir: d })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// `1 − r`, as supplied at construction.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn dir(&self) -> &[f64; 3] {
        &self.dir
    }

    pub fn cartesian(&self) -> [f64; 3] {
        self.dir.map(|c| c * self.r)
    }
}

/// `x'·y'` together with `1 − x'·y' = |x' − y'|² / 2`.
pub fn inner_and_gap(a: &[f64; 3], b: &[f64; 3]) -> (f64, f64) {
    let u = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let d2: f64 = (0..3).map(|i| (a[i] - b[i]) * (a[i] - b[i])).sum();
    (u.clamp(-1.0, 1.0), (0.5 * d2).min(2.0))
}

/// `1 − t` for `t = r ρ`, from the two radial gaps.
pub fn product_gap(x: &BallPoint, y: &BallPoint) -> f64 {
    x.gap + x.r * y.gap
}

/// Poisson kernel of the ball in zonal form: `r = |x|`, `g = 1 − r`,
/// `v = 1 − x'·y'`.
pub fn poisson_zonal(n: usize, r: f64, g: f64, v: f64) -> f64 {
    let q = g * g + 2.0 * r * v;
    g * (1.0 + r) / q.powf(0.5 * n as f64)
}

/// `P(x, y') = (1 − |x|²) / |x − y'|^n`, normalized to unit mass for `σ(S) = 1`.
pub fn poisson_ball(x: &BallPoint, y: &[f64]) -> Result<f64> {
    let y = unit3(x.n, y)?;
    let (_, v) = inner_and_gap(&x.dir, &y);
    Ok(poisson_zonal(x.n, x.r, x.gap, v))
}

/// `Σ_{k ≤ K} r^k Z^{(k)}_{x'}(y')`.
pub fn poisson_ball_series(x: &BallPoint, y: &[f64], truncation: usize) -> Result<f64> {
    let y = unit3(x.n, y)?;
    let (u, _) = inner_and_gap(&x.dir, &y);
    let mut total = 0.0;
    let mut rk = 1.0;
    for k in 0..=truncation {
        total += rk * zonal_of_inner(x.n, k, u)?;
        rk *= x.r;
    }
    Ok(total)
}

fn unit3(n: usize, y: &[f64]) -> Result<[f64; 3]> {
    check_unit(n, y)?;
    let mut out = [0.0; 3];
    out[..n].copy_from_slice(&y[..n]);
    Ok(out)
}

/// Weighted Bergman kernel of the ball,
/// `Q_β(x, y) = 2 Σ_k Γ(β+1+k+n/2) / (Γ(β+1) Γ(k+n/2)) (rρ)^k Z^{(k)}_{x'}(y')`.
///
/// [`series`](Self::series) sums the definition up to the stored
/// truncation. [`eval`](Self::eval) uses a closed form when one exists:
/// for `n = 2` the series is a binomial series in `z = rρ e^{iφ}`, and for
/// integer `β` it equals `(2/β!) Π_{i=0}^{β} (t d/dt + n/2 + i)` applied to
/// the Poisson kernel, which is evaluated exactly with Taylor jets.
#[derive(Debug, Clone)]
pub struct BergmanKernelBall {
    n: usize,
    beta: f64,
    coefs: Vec<f64>,
}

impl BergmanKernelBall {
    pub fn new(n: usize, beta: f64, truncation: usize) -> Result<Self> {
        if beta <= -1.0 || !beta.is_finite() {
            return domain(format!("Bergman kernel needs beta > -1, got {beta}"));
        }
        if n < 2 {
            return domain(format!("Bergman kernel needs n >= 2, got {n}"));
        }
        let coefs = (0..=truncation)
            .map(|k| 2.0 * gamma_ratio(k as f64 + n as f64 / 2.0, beta + 1.0))
            .collect();
        Ok(BergmanKernelBall { n, beta, coefs })
    }

    /// Kernel truncated where the geometric tail bound at `t_max = max rρ`
    /// drops below `tol` relative to the constant term.
    pub fn for_radius(n: usize, beta: f64, t_max: f64, tol: f64) -> Result<Self> {
        let k = Self::truncation_for(n, beta, t_max, tol)?;
        Self::new(n, beta, k)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn truncation(&self) -> usize {
        self.coefs.len() - 1
    }

    /// `2 Γ(β+1+k+n/2) / (Γ(β+1) Γ(k+n/2))`.
    pub fn coefficient(&self, k: usize) -> f64 {
        match self.coefs.get(k) {
            Some(c) => *c,
            None => 2.0 * gamma_ratio(k as f64 + self.n as f64 / 2.0, self.beta + 1.0),
        }
    }

    /// Bound on `Σ_{k > K} coef_k t^k |Z^{(k)}|` using `|Z^{(k)}| ≤ d_k` and
    /// the ratio of consecutive terms just past `K`.
    pub fn tail_bound(&self, t: f64) -> f64 {
        tail_bound(self.n, self.beta, self.truncation(), t)
    }

    pub fn truncation_for(n: usize, beta: f64, t_max: f64, tol: f64) -> Result<usize> {
        if !(0.0..1.0).contains(&t_max) {
            return domain(format!("series diverges for r rho = {t_max} >= 1"));
        }
        let scale = 2.0 * gamma_ratio(n as f64 / 2.0, beta + 1.0);
        let mut k = 4;
        while tail_bound(n, beta, k, t_max) > tol * scale {
            k += k / 2;
            if k > 2_000_000 {
                return domain(format!("truncation for r rho = {t_max} is out of reach"));
            }
        }
        Ok(k)
    }

    /// Truncated series at `t = rρ`, `u = x'·y'`.
    pub fn series_zonal(&self, t: f64, u: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&t) {
            return domain(format!("series diverges for r rho = {t} >= 1"));
        }
        let mut total = 0.0;
        let mut tk = 1.0;
        for (k, c) in self.coefs.iter().enumerate() {
            total += c * tk * zonal_of_inner(self.n, k, u)?;
            tk *= t;
        }
        Ok(total)
    }

    pub fn series(&self, x: &BallPoint, y: &BallPoint) -> Result<f64> {
        let (u, _) = inner_and_gap(&x.dir, &y.dir);
        self.series_zonal(x.r * y.r, u)
    }

    /// Kernel at `t = rρ`, `g = 1 − t`, `u`, `v = 1 − u`, `s = sin θ`
    /// (the latter only used for `n = 2`).
    pub fn eval_zonal(&self, t: f64, g: f64, u: f64, v: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&t) {
            return domain(format!("kernel undefined for r rho = {t} >= 1"));
        }
        let n = self.n;
        if n == 2 {
            return Ok(disc_kernel(self.beta, t, g, v));
        }
        if self.beta.fract() == 0.0 && self.beta >= 0.0 {
            return Ok(jet_kernel(n, self.beta as usize, t, g, v));
        }
        let k = Self::truncation_for(n, self.beta, t, 1e-15)?;
        if k + 1 > self.coefs.len() {
            return BergmanKernelBall::new(n, self.beta, k)?.series_zonal(t, u);
        }
        self.series_zonal(t, u)
    }

    pub fn eval(&self, x: &BallPoint, y: &BallPoint) -> Result<f64> {
        let (u, v) = inner_and_gap(&x.dir, &y.dir);
        self.eval_zonal(x.r * y.r, product_gap(x, y), u, v)
    }

    /// Coefficients of `f_{β,y} = Q_β(·, y)` through degree `truncation()`.
    pub fn extremal_coefficients(&self, y: &BallPoint) -> Result<HarmonicFunction> {
        let basis = HarmonicBasis::new(self.n, self.truncation())?;
        let ys = basis.eval(&y.dir)?;
        let mut rows = Vec::with_capacity(self.coefs.len());
        let mut rk = 1.0;
        for (k, c) in self.coefs.iter().enumerate() {
            let o = basis.offset(k);
            let d = dim_harmonics(self.n, k)?;
            rows.push(ys[o..o + d].iter().map(|yv| c * rk * yv).collect());
            rk *= y.r;
        }
        HarmonicFunction::new(CoefficientField::new(self.n, rows)?)
    }
}

fn tail_bound(n: usize, beta: f64, k: usize, t: f64) -> f64 {
    let term = |j: usize| {
        let jf = j as f64;
        let c = 2.0 * gamma_ratio(jf + n as f64 / 2.0, beta + 1.0);
        let d = dim_harmonics(n, j).unwrap_or(1) as f64;
        (c.ln() + d.ln() + jf * t.ln()).exp()
    };
    let first = term(k + 1);
    let ratio = term(k + 2) / first;
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        first / (1.0 - ratio)
    }
}

/// `n = 2`: `Q_β = 2(β+1) [2 Re (1 − z)^{-(β+2)} − 1]` with `z = t e^{iφ}`.
fn disc_kernel(beta: f64, t: f64, g: f64, v: f64) -> f64 {
    // 1 − z = (g + t v) − i t sin φ, and sin²φ = v (2 − v)
    let a = g + t * v;
    let b = t * (v * (2.0 - v)).max(0.0).sqrt();
    let modulus2 = a * a + b * b;
    if beta.fract() == 0.0 && (0.0..=32.0).contains(&beta) {
        // (1 − z)^{-1} = (a + i b) / |1 − z|², raised to an integer power
        let (wr, wi) = (a / modulus2, b / modulus2);
        let (mut pr, mut pi) = (wr, wi);
        for _ in 1..(beta as usize + 2) {
            (pr, pi) = (pr * wr - pi * wi, pr * wi + pi * wr);
        }
        return 2.0 * (beta + 1.0) * (2.0 * pr - 1.0);
    }
    let arg = b.atan2(a);
    let e = beta + 2.0;
    let re = modulus2.powf(-0.5 * e) * (e * arg).cos();
    2.0 * (beta + 1.0) * (2.0 * re - 1.0)
}

/// Integer `β`: the Euler-operator product applied to the Poisson kernel.
fn jet_kernel(n: usize, beta: usize, t0: f64, g0: f64, v: f64) -> f64 {
    let order = beta + 1;
    let half = 0.5 * n as f64;
    // t = t0 + h
    let q = Jet::from_poly(&[g0 * g0 + 2.0 * t0 * v, -2.0 * g0 + 2.0 * v, 1.0], order);
    let num = Jet::from_poly(&[g0 * (1.0 + t0), -2.0 * t0, -1.0], order);
    let mut p = num.mul(&q.powf(-half));
    for i in 0..=beta {
        p = p.euler_shift(t0, half + i as f64);
    }
    let fact: f64 = (1..=beta).map(|i| i as f64).product();
    2.0 * p.0[0] / fact
}

/// `f_{m,y}`: coefficients `2Γ(m+1+k+n/2)/(Γ(m+1)Γ(k+n/2)) ρ^k Y^{(k)}_j(y')`.
pub fn extremal_fmy(m: f64, y: &BallPoint, truncation: usize) -> Result<HarmonicFunction> {
    if m <= 0.0 {
        return domain(format!("extremal functions need m > 0, got {m}"));
    }
    BergmanKernelBall::new(y.n, m, truncation)?.extremal_coefficients(y)
}

/// `f_{m,y}(x) = Q_m(x, y)` evaluated in closed form.
#[derive(Debug, Clone)]
pub struct ExtremalFunction {
    kernel: BergmanKernelBall,
    y: BallPoint,
}

impl ExtremalFunction {
    pub fn new(m: f64, y: BallPoint) -> Result<Self> {
        if m <= 0.0 {
            return domain(format!("extremal functions need m > 0, got {m}"));
        }
        Ok(ExtremalFunction { kernel: BergmanKernelBall::new(y.n, m, 0)?, y })
    }

    pub fn pole(&self) -> &BallPoint {
        &self.y
    }

    pub fn m(&self) -> f64 {
        self.kernel.beta
    }

    pub fn kernel(&self) -> &BergmanKernelBall {
        &self.kernel
    }
}

impl BallFunction for ExtremalFunction {
    fn dimension(&self) -> usize {
        self.y.n
    }

    fn value(&self, x: &BallPoint) -> f64 {
        self.kernel.eval(x, &self.y).unwrap_or(f64::NAN)
    }

    fn zonal_axis(&self) -> Option<[f64; 3]> {
        Some(self.y.dir)
    }

    fn zonal_value(&self, r: f64, gap: f64, u: f64, v: f64) -> f64 {
        let t = r * self.y.r;
        let g = gap + r * self.y.gap;
        self.kernel.eval_zonal(t, g, u, v).unwrap_or(f64::NAN)
    }
}

/// `x ↦ P(x, e)` for a boundary point `e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoisson {
    n: usize,
    pole: [f64; 3],
}

impl BoundaryPoisson {
    pub fn new(n: usize, pole: &[f64]) -> Result<Self> {
        Ok(BoundaryPoisson { n, pole: unit3(n, pole)? })
    }
}

impl BallFunction for BoundaryPoisson {
    fn dimension(&self) -> usize {
        self.n
    }

    fn value(&self, x: &BallPoint) -> f64 {
        let (_, v) = inner_and_gap(&x.dir, &self.pole);
        poisson_zonal(self.n, x.r, x.gap, v)
    }

    fn zonal_axis(&self) -> Option<[f64; 3]> {
        Some(self.pole)
    }

    fn zonal_value(&self, r: f64, gap: f64, _u: f64, v: f64) -> f64 {
        poisson_zonal(self.n, r, gap, v)
    }
}

/// A point `(x, t)` of the upper half-space `R^{n+1}_+`, `n ≤ 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpacePoint {
    pub x: [f64; 3],
    pub t: f64,
}

impl HalfSpacePoint {
    pub fn new(x: &[f64], t: f64) -> Result<Self> {
        if !(t > 0.0) || x.len() > 3 {
            return domain(format!("half-space point needs t > 0 and n <= 3, got t = {t}"));
        }
        let mut p = [0.0; 3];
        p[..x.len()].copy_from_slice(x);
        Ok(HalfSpacePoint { x: p, t })
    }

    pub fn distance2(&self, other: &HalfSpacePoint) -> f64 {
        (0..3).map(|i| (self.x[i] - other.x[i]).powi(2)).sum()
    }
}

/// `c_n = Γ((n+1)/2) / π^{(n+1)/2}`, the unit-mass constant.
pub fn halfspace_constant(n: usize) -> f64 {
    let h = (n as f64 + 1.0) / 2.0;
    (ln_gamma(h) - h * std::f64::consts::PI.ln()).exp()
}

/// `P(x, t) = c_n t / (|x|² + t²)^{(n+1)/2}` given `|x|²`.
pub fn poisson_halfspace_r2(n: usize, x2: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("half-space Poisson kernel needs t > 0, got {t}"));
    }
    Ok(halfspace_constant(n) * t / (x2 + t * t).powf(0.5 * (n as f64 + 1.0)))
}

pub fn poisson_halfspace(x: &[f64], t: f64) -> Result<f64> {
    let x2 = x.iter().map(|c| c * c).sum();
    poisson_halfspace_r2(x.len(), x2, t)
}

/// `Q_m(z, w) = ((−2)^{m+1} / m!) ∂_t^{m+1} P(x − y, t + s)`, differentiated
/// exactly with Taylor jets in `t + s`.
#[derive(Debug, Clone, Copy)]
pub struct BergmanKernelHalfSpace {
    n: usize,
    m: usize,
    cn: f64,
}

impl BergmanKernelHalfSpace {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return domain(format!("half-space kernels are supported for n in 1..=3, got {n}"));
        }
        Ok(BergmanKernelHalfSpace { n, m, cn: halfspace_constant(n) })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Kernel as a function of `|x − y|²` and `τ = t + s`.
    pub fn eval_r2(&self, xi2: f64, tau: f64) -> f64 {
        let order = self.m + 1;
        let q = Jet::from_poly(&[xi2 + tau * tau, 2.0 * tau, 1.0], order);
        let lin = Jet::from_poly(&[tau, 1.0], order);
        let p = lin.mul(&q.powf(-0.5 * (self.n as f64 + 1.0)));
        let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
        sign * 2f64.powi(order as i32) * order as f64 * self.cn * p.0[order]
    }

    pub fn eval(&self, z: &HalfSpacePoint, w: &HalfSpacePoint) -> Result<f64> {
        if !(z.t > 0.0 && w.t > 0.0) {
            return domain("half-space points need positive heights");
        }
        Ok(self.eval_r2(z.distance2(w), z.t + w.t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn poisson_examples() {
        let x = BallPoint::new(2, 0.5, &[1.0, 0.0]).unwrap();
        assert_relative_eq!(poisson_ball(&x, &[1.0, 0.0]).unwrap(), 3.0, max_relative = 1e-15);
        let o = BallPoint::new(3, 0.0, &[0.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(poisson_ball(&o, &[0.6, 0.8, 0.0]).unwrap(), 1.0, max_relative = 1e-15);
        assert!(BallPoint::new(2, 1.0, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn poisson_series_antipodal() {
        let x = BallPoint::new(2, 0.9, &[1.0, 0.0]).unwrap();
        let s = poisson_ball_series(&x, &[-1.0, 0.0], 400).unwrap();
        assert_relative_eq!(s, 0.19 / 3.61, max_relative = 1e-8);
    }

    #[test]
    fn bergman_constant_term() {
        let q = BergmanKernelBall::new(2, 0.0, 10).unwrap();
        let o = BallPoint::new(2, 0.0, &[1.0, 0.0]).unwrap();
        let y = BallPoint::new(2, 0.7, &[0.0, 1.0]).unwrap();
        assert_relative_eq!(q.series(&o, &y).unwrap(), 2.0, max_relative = 1e-15);
        assert_relative_eq!(q.eval(&o, &y).unwrap(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn closed_forms_match_series() {
        let dir_a = [0.48, 0.6, 0.64];
        let dir_b = [0.0, 0.6, 0.8];
        for beta in [0.0, 1.0, 2.0, 3.0] {
            let q = BergmanKernelBall::new(3, beta, 400).unwrap();
            let x = BallPoint::new(3, 0.8, &dir_a).unwrap();
            let y = BallPoint::new(3, 0.85, &dir_b).unwrap();
            assert_relative_eq!(q.eval(&x, &y).unwrap(), q.series(&x, &y).unwrap(), max_relative = 1e-11);
        }
        for beta in [0.0, 0.5, 1.0, 2.7, 3.0] {
            let q = BergmanKernelBall::new(2, beta, 600).unwrap();
            let x = BallPoint::new(2, 0.9, &[0.6, 0.8]).unwrap();
            let y = BallPoint::new(2, 0.8, &[1.0, 0.0]).unwrap();
            assert_relative_eq!(q.eval(&x, &y).unwrap(), q.series(&x, &y).unwrap(), max_relative = 1e-11);
        }
    }

    #[test]
    fn halfspace_kernel_on_the_axis() {
        for n in [1, 2, 3] {
            let q = BergmanKernelHalfSpace::new(n, 0).unwrap();
            let tau: f64 = 1.7;
            let expect = 2.0 * n as f64 * halfspace_constant(n) * tau.powi(-(n as i32 + 1));
            assert_relative_eq!(q.eval_r2(0.0, tau), expect, max_relative = 1e-14);
        }
        assert!(poisson_halfspace(&[0.0, 0.0], 0.0).is_err());
        assert_relative_eq!(
            poisson_halfspace(&[0.0, 0.0], 2.0).unwrap(),
            halfspace_constant(2) / 4.0,
            max_relative = 1e-15
        );
    }
}
