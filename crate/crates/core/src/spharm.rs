//! Spherical harmonics on `S¹` and `S²` under the normalized measure
//! `σ(S) = 1`.
//!
//! The real basis is fixed once and for all:
//!
//! * `n = 2`: `Y^{(0)} = 1`, `Y^{(k)}_1 = √2 cos kθ`, `Y^{(k)}_2 = √2 sin kθ`.
//! * `n = 3`: `Y^{(l)}_1 = √(2l+1) P_l(cos θ)`, then for `m = 1..=l` the pair
//!   `Y^{(l)}_{2m} ∝ P_l^m(cos θ) cos mφ`, `Y^{(l)}_{2m+1} ∝ P_l^m(cos θ) sin mφ`
//!   with the 4π normalization (no Condon–Shortley phase).
//!
//! Azimuthal factors are formed as `(x₁ + i x₂)^m`, so nothing degenerates
//! at the poles.

use crate::error::{domain, Result};

const UNIT_TOL: f64 = 1e-10;

/// Dimension of the degree-`k` spherical harmonics in `n` variables.
pub fn dim_harmonics(n: usize, k: usize) -> Result<usize> {
    if n < 2 {
        return domain(format!("spherical harmonics need n >= 2, got {n}"));
    }
    let binom = |m: usize, r: usize| -> usize {
        if m < r {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..r {
            acc = acc * (m - i) as u128 / (i + 1) as u128;
        }
        acc as usize
    };
    let top = binom(k + n - 1, n - 1);
    let low = if k >= 2 { binom(k + n - 3, n - 1) } else { 0 };
    Ok(top - low)
}

/// Gegenbauer polynomial `C_k^λ(u)` by the three-term recurrence.
pub fn gegenbauer(lambda: f64, k: usize, u: f64) -> Result<f64> {
    if lambda <= 0.0 {
        return domain(format!("Gegenbauer index must be positive, got {lambda}"));
    }
    if u.abs() > 1.0 + 1e-12 {
        return domain(format!("Gegenbauer argument must lie in [-1, 1], got {u}"));
    }
    let mut prev = 1.0;
    if k == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * lambda * u;
    for i in 2..=k {
        let i = i as f64;
        let next = (2.0 * u * (i + lambda - 1.0) * cur - (i + 2.0 * lambda - 2.0) * prev) / i;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Chebyshev polynomial `T_k(u)`.
pub fn chebyshev(k: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, u);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = 2.0 * u * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Zonal harmonic of degree `k` as a function of `u = x'·y'`.
pub fn zonal_of_inner(n: usize, k: usize, u: f64) -> Result<f64> {
    let u = u.clamp(-1.0, 1.0);
    match n {
        0 | 1 => domain(format!("zonal harmonics need n >= 2, got {n}")),
        2 => Ok(if k == 0 { 1.0 } else { 2.0 * chebyshev(k, u) }),
        _ => {
            let lambda = (n as f64 - 2.0) / 2.0;
            Ok((k as f64 + lambda) / lambda * gegenbauer(lambda, k, u)?)
        }
    }
}

/// `Z^{(k)}_{x'}(y')`.
pub fn zonal(n: usize, k: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    check_unit(n, x)?;
    check_unit(n, y)?;
    let u: f64 = x.iter().zip(y).take(n).map(|(a, b)| a * b).sum();
    zonal_of_inner(n, k, u)
}

/// `Y^{(k)}_j(x')`, `1 ≤ j ≤ d_k`.
pub fn basis_eval(n: usize, k: usize, j: usize, x: &[f64]) -> Result<f64> {
    let d = dim_harmonics(n, k)?;
    if j == 0 || j > d {
        return domain(format!("basis index {j} outside 1..={d} for degree {k}"));
    }
    let basis = HarmonicBasis::new(n, k)?;
    let vals = basis.eval(&to_array(n, x)?)?;
    Ok(vals[basis.offset(k) + j - 1])
}

pub(crate) fn check_unit(n: usize, x: &[f64]) -> Result<()> {
    if x.len() < n {
        return domain(format!("expected a vector with {n} components"));
    }
    let norm2: f64 = x.iter().take(n).map(|c| c * c).sum();
    if (norm2.sqrt() - 1.0).abs() > UNIT_TOL {
        return domain(format!("direction is not a unit vector (|x| = {})", norm2.sqrt()));
    }
    Ok(())
}

pub(crate) fn to_array(n: usize, x: &[f64]) -> Result<[f64; 3]> {
    check_unit(n, x)?;
    let mut out = [0.0; 3];
    out[..n].copy_from_slice(&x[..n]);
    Ok(out)
}

/// Real orthonormal basis through degree `max_degree`, stored degree by
/// degree in one flat vector.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    n: usize,
    max_degree: usize,
    offsets: Vec<usize>,
    // recurrence coefficients for n = 3, indexed [l][m]
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
}

impl HarmonicBasis {
    pub fn new(n: usize, max_degree: usize) -> Result<Self> {
        if n != 2 && n != 3 {
            return domain(format!("explicit bases exist for n in {{2, 3}}, got {n}"));
        }
        let mut offsets = Vec::with_capacity(max_degree + 2);
        let mut acc = 0;
        for k in 0..=max_degree {
            offsets.push(acc);
            acc += dim_harmonics(n, k)?;
        }
        offsets.push(acc);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        if n == 3 {
            for l in 0..=max_degree {
                let mut al = vec![0.0; l + 1];
                let mut bl = vec![0.0; l + 1];
                for m in 0..=l {
                    if l >= m + 2 {
                        let (lf, mf) = (l as f64, m as f64);
                        al[m] = ((2.0 * lf - 1.0) * (2.0 * lf + 1.0) / ((lf - mf) * (lf + mf))).sqrt();
                        bl[m] = ((2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0)
                            / ((lf - mf) * (lf + mf) * (2.0 * lf - 3.0)))
                            .sqrt();
                    }
                }
                a.push(al);
                b.push(bl);
            }
        }
        Ok(HarmonicBasis { n, max_degree, offsets, a, b })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Index of `Y^{(k)}_1` in the flat layout.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// Total number of basis functions.
    pub fn len(&self) -> usize {
        self.offsets[self.max_degree + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Values of every basis function at the unit vector `x`.
    pub fn eval(&self, x: &[f64; 3]) -> Result<Vec<f64>> {
        check_unit(self.n, x)?;
        let mut out = vec![0.0; self.len()];
        self.eval_into(x, &mut out);
        Ok(out)
    }

    /// Unchecked variant writing into `out` (length `len()`).
    pub fn eval_into(&self, x: &[f64; 3], out: &mut [f64]) {
        let kmax = self.max_degree;
        // powers (x₁ + i x₂)^m
        let mut re = vec![1.0; kmax + 1];
        let mut im = vec![0.0; kmax + 1];
        for m in 1..=kmax {
            re[m] = re[m - 1] * x[0] - im[m - 1] * x[1];
            im[m] = re[m - 1] * x[1] + im[m - 1] * x[0];
        }
        if self.n == 2 {
            out[0] = 1.0;
            for k in 1..=kmax {
                let o = self.offsets[k];
                out[o] = std::f64::consts::SQRT_2 * re[k];
                out[o + 1] = std::f64::consts::SQRT_2 * im[k];
            }
            return;
        }
        let u = x[2];
        let mut diag = 1.0;
        for m in 0..=kmax {
            if m == 1 {
                diag = 3f64.sqrt();
            } else if m >= 2 {
                diag *= ((2 * m + 1) as f64 / (2 * m) as f64).sqrt();
            }
            let mut p_prev = 0.0;
            let mut p_cur = diag;
            for l in m..=kmax {
                if l == m + 1 {
                    let next = ((2 * m + 3) as f64).sqrt() * u * p_cur;
                    p_prev = p_cur;
                    p_cur = next;
                } else if l >= m + 2 {
                    let next = self.a[l][m] * u * p_cur - self.b[l][m] * p_prev;
                    p_prev = p_cur;
                    p_cur = next;
                }
                let o = self.offsets[l];
                if m == 0 {
                    out[o] = p_cur;
                } else {
                    out[o + 2 * m - 1] = p_cur * re[m];
                    out[o + 2 * m] = p_cur * im[m];
                }
            }
        }
    }
}
