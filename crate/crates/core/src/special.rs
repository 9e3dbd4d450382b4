//! Gamma-function ratios and truncated Taylor arithmetic.
//!
//! Every coefficient of the form `Γ(a + s) / (Γ(a) Γ(s))` is evaluated as a
//! difference of log-Gamma values so that large degrees never overflow.
//! Closed-form kernels are differentiated with [`Jet`]s: truncated power
//! series in the displacement `h` around an expansion point.

use statrs::function::gamma::ln_gamma;

/// `Γ(a + s) / (Γ(a) Γ(s))` for `a, s > 0`.
pub fn gamma_ratio(a: f64, s: f64) -> f64 {
    (ln_gamma(a + s) - ln_gamma(a) - ln_gamma(s)).exp()
}

/// `Γ(a) / Γ(b)` for positive arguments.
pub fn gamma_quotient(a: f64, b: f64) -> f64 {
    (ln_gamma(a) - ln_gamma(b)).exp()
}

/// `∫₀¹ (1 − r²)^s r^(2t + n − 1) dr` in closed form.
pub fn half_beta(s: f64, t: f64, n: f64) -> f64 {
    0.5 * (ln_gamma(s + 1.0) + ln_gamma(n / 2.0 + t) - ln_gamma(s + 1.0 + n / 2.0 + t)).exp()
}

/// Surface area of the unit sphere `S^{n-1}` in Lebesgue measure.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / ln_gamma(h).exp()
}

/// Truncated Taylor series `Σ_{k ≤ N} c_k h^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    /// Polynomial jet from explicit coefficients, padded or cut to `order`.
    pub fn from_poly(coeffs: &[f64], order: usize) -> Jet {
        let mut c = vec![0.0; order + 1];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = *src;
        }
        Jet(c)
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        let n = self.order().min(other.order());
        let mut out = vec![0.0; n + 1];
        for (i, a) in self.0.iter().enumerate().take(n + 1) {
            for (j, b) in other.0.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Jet(out)
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet(self.0.iter().map(|c| c * s).collect())
    }

    /// `self^alpha` by the J. C. P. Miller recurrence; requires `c_0 > 0`.
    pub fn powf(&self, alpha: f64) -> Jet {
        let a = &self.0;
        let n = self.order();
        let mut b = vec![0.0; n + 1];
        b[0] = a[0].powf(alpha);
        for k in 1..=n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((alpha + 1.0) * j as f64 - k as f64) * a[j] * b[k - j];
            }
            b[k] = acc / (k as f64 * a[0]);
        }
        Jet(b)
    }

    /// Applies `t d/dt + shift` where `t = t0 + h`; the order drops by one.
    pub fn euler_shift(&self, t0: f64, shift: f64) -> Jet {
        let n = self.order();
        assert!(n >= 1, "cannot differentiate an order-0 jet");
        let deriv: Vec<f64> = (0..n).map(|k| (k + 1) as f64 * self.0[k + 1]).collect();
        let out = (0..n)
            .map(|k| {
                let mut v = t0 * deriv[k] + shift * self.0[k];
                if k > 0 {
                    v += deriv[k - 1];
                }
                v
            })
            .collect();
        Jet(out)
    }

    /// The `k`-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.0[k] * fact
    }
}
