//! Harmonic functions on the ball stored by their spherical-harmonic
//! coefficients, with Hadamard convolution and fractional derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernels::BallPoint;
use crate::quadrature::{integrate_radial, RadialRule, SphereRule};
use crate::special::gamma_ratio;
use crate::spharm::{dim_harmonics, HarmonicBasis};

/// Anything that can be evaluated on the ball.
///
/// Functions that depend only on `|x|` and `x'·e` for a fixed axis `e`
/// report the axis, letting integrators use one-dimensional sphere rules.
pub trait BallFunction: Sync {
    fn dimension(&self) -> usize;

    fn value(&self, x: &BallPoint) -> f64;

    fn zonal_axis(&self) -> Option<[f64; 3]> {
        None
    }

    /// Value at `r`, `1 − r`, `u = x'·e`, `1 − u`; only called when
    /// [`zonal_axis`](Self::zonal_axis) is `Some`.
    fn zonal_value(&self, r: f64, gap: f64, u: f64, v: f64) -> f64 {
        let _ = (r, gap, u, v);
        f64::NAN
    }
}

/// Ragged array `c_k^j`, `0 ≤ k ≤ K`, `1 ≤ j ≤ d_k`.
///
/// JSON form: `{"n": .., "K": .., "rows": [[c_0^1], [c_1^1, ..], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawField", into = "RawField")]
pub struct CoefficientField {
    n: usize,
    rows: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawField {
    n: usize,
    #[serde(rename = "K")]
    k: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<RawField> for CoefficientField {
    type Error = Error;

    fn try_from(raw: RawField) -> Result<Self> {
        if raw.rows.len() != raw.k + 1 {
            return domain(format!("K = {} but {} rows given", raw.k, raw.rows.len()));
        }
        CoefficientField::new(raw.n, raw.rows)
    }
}

impl From<CoefficientField> for RawField {
    fn from(c: CoefficientField) -> Self {
        RawField { n: c.n, k: c.rows.len() - 1, rows: c.rows }
    }
}

impl CoefficientField {
    pub fn new(n: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return domain("a coefficient field needs at least the degree-0 row");
        }
        for (k, row) in rows.iter().enumerate() {
            let d = dim_harmonics(n, k)?;
            if row.len() != d {
                return domain(format!("row {k} has {} entries, expected d_{k} = {d}", row.len()));
            }
        }
        Ok(CoefficientField { n, rows })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> f64>(n: usize, degree: usize, mut f: F) -> Result<Self> {
        let mut rows = Vec::with_capacity(degree + 1);
        for k in 0..=degree {
            rows.push((1..=dim_harmonics(n, k)?).map(|j| f(k, j)).collect());
        }
        Ok(CoefficientField { n, rows })
    }

    pub fn constant(n: usize, degree: usize, value: f64) -> Result<Self> {
        Self::from_fn(n, degree, |_, _| value)
    }

    pub fn zeros(n: usize, degree: usize) -> Result<Self> {
        Self::constant(n, degree, 0.0)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k]
    }

    /// `c_k^j` with `1 ≤ j ≤ d_k`; zero beyond the stored degree.
    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.rows.get(k).and_then(|r| r.get(j.wrapping_sub(1))).copied().unwrap_or(0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map(|_, _, c| s * c)
    }

    pub fn map<F: FnMut(usize, usize, f64) -> f64>(&self, mut f: F) -> Self {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(k, row)| row.iter().enumerate().map(|(j, c)| f(k, j + 1, *c)).collect())
            .collect();
        CoefficientField { n: self.n, rows }
    }

    /// Entries flattened degree by degree.
    pub fn flat(&self) -> Vec<f64> {
        self.rows.iter().flatten().copied().collect()
    }

    pub fn truncated(&self, degree: usize) -> Self {
        CoefficientField { n: self.n, rows: self.rows[..=degree.min(self.degree())].to_vec() }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }
}

/// `f(r x') = Σ_k r^k Σ_j b_k^j Y^{(k)}_j(x')`, truncated at degree `K`.
#[derive(Debug, Clone)]
pub struct HarmonicFunction {
    coeffs: CoefficientField,
    basis: HarmonicBasis,
}

impl PartialEq for HarmonicFunction {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl HarmonicFunction {
    pub fn new(coeffs: CoefficientField) -> Result<Self> {
        let basis = HarmonicBasis::new(coeffs.n, coeffs.degree())?;
        Ok(HarmonicFunction { coeffs, basis })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(CoefficientField::new(n, vec![vec![value]])?)
    }

    pub fn coefficients(&self) -> &CoefficientField {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.degree()
    }

    pub fn basis(&self) -> &HarmonicBasis {
        &self.basis
    }

    pub fn eval(&self, x: &BallPoint) -> Result<f64> {
        if x.dimension() != self.coeffs.n {
            return domain("point and function live in different dimensions");
        }
        let profile = self.degree_sums(x.dir());
        Ok(horner(&profile, x.r()))
    }

    /// Evaluation at `r x'` for `r ≤ 1`; `r = 1` is meaningful because
    /// expansions are finite.
    pub fn eval_polar(&self, r: f64, dir: &[f64; 3]) -> f64 {
        horner(&self.degree_sums(dir), r)
    }

    /// `S_k(x') = Σ_j b_k^j Y^{(k)}_j(x')`, so that `f(r x') = Σ_k r^k S_k(x')`.
    pub fn degree_sums(&self, dir: &[f64; 3]) -> Vec<f64> {
        let mut ys = vec![0.0; self.basis.len()];
        self.basis.eval_into(dir, &mut ys);
        self.sums_from_basis(&ys)
    }

    pub(crate) fn sums_from_basis(&self, ys: &[f64]) -> Vec<f64> {
        self.coeffs
            .rows
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let o = self.basis.offset(k);
                row.iter().zip(&ys[o..o + row.len()]).map(|(b, y)| b * y).sum()
            })
            .collect()
    }

    /// Degree sums at every node of a sphere rule.
    pub fn profile(&self, rule: &SphereRule) -> Result<SphereProfile> {
        if rule.dimension() != self.coeffs.n {
            return domain("sphere rule and function live in different dimensions");
        }
        let sums = rule.nodes().iter().map(|x| self.degree_sums(x)).collect();
        Ok(SphereProfile { sums, weights: rule.weights().to_vec() })
    }

    pub fn map_coefficients<F: FnMut(usize, usize, f64) -> f64>(&self, f: F) -> Self {
        HarmonicFunction { coeffs: self.coeffs.map(f), basis: self.basis.clone() }
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map_coefficients(|_, _, c| s * c)
    }

    /// `a f + b g`, padded to the larger degree.
    pub fn combine(&self, a: f64, other: &HarmonicFunction, b: f64) -> Result<Self> {
        if other.coeffs.n != self.coeffs.n {
            return domain("dimension mismatch");
        }
        let degree = self.degree().max(other.degree());
        let coeffs = CoefficientField::from_fn(self.coeffs.n, degree, |k, j| {
            a * self.coeffs.get(k, j) + b * other.coeffs.get(k, j)
        })?;
        Self::new(coeffs)
    }
}

impl BallFunction for HarmonicFunction {
    fn dimension(&self) -> usize {
        self.coeffs.n
    }

    fn value(&self, x: &BallPoint) -> f64 {
        self.eval_polar(x.r(), x.dir())
    }
}

fn horner(sums: &[f64], r: f64) -> f64 {
    sums.iter().rev().fold(0.0, |acc, s| acc * r + s)
}

/// Degree sums of one function at the nodes of a sphere rule.
#[derive(Debug, Clone)]
pub struct SphereProfile {
    sums: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl SphereProfile {
    /// Values `f(r x'_i)` at every node.
    pub fn values(&self, r: f64) -> Vec<f64> {
        self.sums.iter().map(|s| horner(s, r)).collect()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `(c ∗ f)`: coefficients `c_k^j b_k^j(f)`, truncated at the smaller degree.
pub fn convolve(c: &CoefficientField, f: &HarmonicFunction) -> Result<HarmonicFunction> {
    if c.n != f.coeffs.n {
        return domain(format!("dimension mismatch: multiplier n = {}, function n = {}", c.n, f.coeffs.n));
    }
    let degree = c.degree().min(f.degree());
    let coeffs = CoefficientField::from_fn(c.n, degree, |k, j| c.get(k, j) * f.coeffs.get(k, j))?;
    HarmonicFunction::new(coeffs)
}

/// `Γ(k + n/2 + t) / (Γ(k + n/2) Γ(t))`.
pub fn lambda_factor(n: usize, k: usize, t: f64) -> f64 {
    gamma_ratio(k as f64 + n as f64 / 2.0, t)
}

/// `Λ_t f`.
pub fn fractional_derivative(f: &HarmonicFunction, t: f64) -> Result<HarmonicFunction> {
    if !(t > 0.0) {
        return domain(format!("fractional derivative needs t > 0, got {t}"));
    }
    let n = f.coeffs.n;
    Ok(f.map_coefficients(|k, _, c| lambda_factor(n, k, t) * c))
}

/// `x ↦ (g ∗ P_{y'})(x)`, with coefficients `c_k^j Y^{(k)}_j(y')`.
pub fn convolved_poisson(g: &HarmonicFunction, y: &[f64]) -> Result<HarmonicFunction> {
    let n = g.coeffs.n;
    let ys = g.basis.eval(&crate::spharm::to_array(n, y)?)?;
    let basis = &g.basis;
    Ok(g.map_coefficients(|k, j, c| c * ys[basis.offset(k) + j - 1]))
}

/// The three values compared by [`pairing_identity_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingValues {
    pub series: f64,
    pub sphere: f64,
    pub ball: f64,
}

impl PairingValues {
    pub fn max_deviation(&self) -> f64 {
        let a = (self.series - self.sphere).abs();
        let b = (self.series - self.ball).abs();
        let c = (self.sphere - self.ball).abs();
        a.max(b).max(c)
    }
}

/// The three sides of the pairing identity for `(g ∗ P_{y'})` against `f`:
/// the coefficient series `Σ (rρ)^k Σ_j b_k^j c_k^j Y_j^{(k)}(y')`, the
/// sphere integral, and the weighted ball integral with `Λ_{m+1}`.
pub fn pairing_values(
    f: &HarmonicFunction,
    g: &HarmonicFunction,
    m: f64,
    r: f64,
    rho: f64,
    y: &[f64],
) -> Result<PairingValues> {
    if m <= -1.0 {
        return domain(format!("pairing identity needs m > -1, got {m}"));
    }
    if !(0.0..1.0).contains(&r) || !(0.0..1.0).contains(&rho) {
        return domain("pairing identity needs 0 <= r, rho < 1");
    }
    let n = f.coeffs.n;
    let gp = convolved_poisson(g, y)?;
    let degree = f.degree().min(g.degree());
    let yd = crate::spharm::to_array(n, y)?;
    let ys = g.basis.eval(&yd)?;
    let mut series = 0.0;
    let mut tk = 1.0;
    for k in 0..=degree {
        let o = g.basis.offset(k);
        let s: f64 = (1..=dim_harmonics(n, k)?)
            .map(|j| f.coeffs.get(k, j) * g.coeffs.get(k, j) * ys[o + j - 1])
            .sum();
        series += tk * s;
        tk *= r * rho;
    }
    let rule = SphereRule::new(n, 2 * degree.max(f.degree()).max(g.degree()) + 2)?;
    let fp = f.profile(&rule)?;
    let gpp = gp.profile(&rule)?;
    let sphere_at = |a: f64, b: f64| -> f64 {
        let gv = gpp.values(a);
        let fv = fp.values(b);
        gv.iter().zip(&fv).zip(fp.weights()).map(|((x, y), w)| w * x * y).sum()
    };
    let sphere = sphere_at(r, rho);
    let lam = fractional_derivative(&gp, m + 1.0)?;
    let lp = lam.profile(&rule)?;
    let radial = RadialRule::new(24, 24)?;
    // (1 − R²)^m = (1 − R)^m (1 + R)^m
    let ball = 2.0
        * integrate_radial(
            |big_r| {
                let gv = lp.values(r * big_r);
                let fv = fp.values(rho * big_r);
                let s: f64 = gv.iter().zip(&fv).zip(fp.weights()).map(|((x, y), w)| w * x * y).sum();
                s * (1.0 + big_r).powf(m) * big_r.powi(n as i32 - 1)
            },
            m,
            &radial,
        )?;
    Ok(PairingValues { series, sphere, ball })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_function() {
        let f = HarmonicFunction::constant(3, 5.0).unwrap();
        let x = BallPoint::new(3, 0.7, &[0.0, 0.6, 0.8]).unwrap();
        assert_eq!(f.eval(&x).unwrap(), 5.0);
    }

    #[test]
    fn first_degree_cosine() {
        let c = CoefficientField::new(2, vec![vec![0.0], vec![1.5, 0.0]]).unwrap();
        let f = HarmonicFunction::new(c).unwrap();
        let x = BallPoint::new(2, 0.5, &[1.0, 0.0]).unwrap();
        assert_relative_eq!(f.eval(&x).unwrap(), 0.5 * 2f64.sqrt() * 1.5, max_relative = 1e-15);
    }

    #[test]
    fn row_lengths_are_checked() {
        assert!(CoefficientField::new(3, vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        let bad = r#"{"n":2,"K":2,"rows":[[1.0],[1.0,2.0]]}"#;
        assert!(CoefficientField::from_json(bad).is_err());
    }

    #[test]
    fn lambda_factors() {
        assert_relative_eq!(lambda_factor(2, 0, 1.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(lambda_factor(2, 3, 1.0), 4.0, max_relative = 1e-14);
        let f = HarmonicFunction::constant(2, 1.0).unwrap();
        assert!(fractional_derivative(&f, 0.0).is_err());
    }

    #[test]
    fn convolution_dimension_mismatch() {
        let c = CoefficientField::constant(3, 2, 1.0).unwrap();
        let f = HarmonicFunction::constant(2, 1.0).unwrap();
        assert!(convolve(&c, &f).is_err());
    }
}
