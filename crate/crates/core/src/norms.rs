//! Integral means `M_p(f, r)` and the (quasi-)norms of the weighted
//! Bergman, Hardy and mixed-norm spaces on the ball, and of the weighted
//! Bergman spaces on the half-space.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::harmonic_fn::{BallFunction, HarmonicFunction, SphereProfile};
use crate::kernels::{poisson_halfspace_r2, BallPoint};
use crate::quadrature::{integrate_half_line, HalfLineRule, RadialRule, RuleDescriptor, SphereRule, ZonalRule};
use crate::report::{float, CaseResult, Comparison, VerificationReport};
use crate::special::sphere_area;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `A^p_α`, `α > −1`.
    A,
    /// `H^p_α`, `α ≥ 0`.
    H,
    /// `B^{p,q}_α`, `α > 0`.
    B,
    /// `A^∞_α`.
    #[serde(rename = "A_inf")]
    AInf,
    /// `Ã^p_α` on the half-space, `α > −1`.
    #[serde(rename = "A_half")]
    HalfA,
    /// `Ã^∞_α` on the half-space, `α > 0`.
    #[serde(rename = "A_inf_half")]
    HalfAInf,
}

/// One function space with its parameters; JSON `{family, p, q, alpha}`
/// with `"inf"` accepted for infinite exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub family: Family,
    #[serde(with = "float", default = "infinite")]
    pub p: f64,
    #[serde(with = "float", default = "one")]
    pub q: f64,
    pub alpha: f64,
}

fn infinite() -> f64 {
    f64::INFINITY
}

fn one() -> f64 {
    1.0
}

impl SpaceSpec {
    pub fn bergman(p: f64, alpha: f64) -> Self {
        SpaceSpec { family: Family::A, p, q: 1.0, alpha }
    }

    pub fn hardy(p: f64, alpha: f64) -> Self {
        SpaceSpec { family: Family::H, p, q: 1.0, alpha }
    }

    pub fn mixed(p: f64, q: f64, alpha: f64) -> Self {
        SpaceSpec { family: Family::B, p, q, alpha }
    }

    pub fn bergman_sup(alpha: f64) -> Self {
        SpaceSpec { family: Family::AInf, p: f64::INFINITY, q: 1.0, alpha }
    }

    pub fn half_bergman(p: f64, alpha: f64) -> Self {
        SpaceSpec { family: Family::HalfA, p, q: 1.0, alpha }
    }

    pub fn half_sup(alpha: f64) -> Self {
        SpaceSpec { family: Family::HalfAInf, p: f64::INFINITY, q: 1.0, alpha }
    }

    pub fn validate(&self) -> Result<()> {
        let exp_ok = |e: f64| e > 0.0 && !e.is_nan();
        if !exp_ok(self.p) {
            return domain(format!("exponent p must lie in (0, inf], got {}", self.p));
        }
        if !self.alpha.is_finite() {
            return domain("weight alpha must be finite");
        }
        match self.family {
            Family::A if self.alpha <= -1.0 => domain(format!("A^p_alpha needs alpha > -1, got {}", self.alpha)),
            Family::H if self.alpha < 0.0 => domain(format!("H^p_alpha needs alpha >= 0, got {}", self.alpha)),
            Family::B if self.alpha <= 0.0 => domain(format!("B^(p,q)_alpha needs alpha > 0, got {}", self.alpha)),
            Family::B if !exp_ok(self.q) => domain(format!("exponent q must lie in (0, inf], got {}", self.q)),
            Family::AInf if self.alpha < 0.0 => domain(format!("A^inf_alpha needs alpha >= 0, got {}", self.alpha)),
            Family::HalfA if self.alpha <= -1.0 || self.p.is_infinite() => {
                domain("half-space A^p_alpha needs alpha > -1 and finite p")
            }
            Family::HalfAInf if self.alpha <= 0.0 => domain("half-space A^inf_alpha needs alpha > 0"),
            _ => Ok(()),
        }
    }
}

/// Quadrature parameters shared by all norm computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSettings {
    pub radial_order: usize,
    pub radial_depth: usize,
    /// Product-rule degree on the sphere; `None` picks `4K + 24` from the
    /// expansion degree `K`.
    pub sphere_degree: Option<usize>,
    pub zonal_order: usize,
    pub zonal_depth: usize,
    /// Points in the coarse grid of every supremum search.
    pub sup_grid: usize,
    /// Also evaluate with half the radial order and report the difference.
    pub estimate_error: bool,
}

impl Default for NormSettings {
    fn default() -> Self {
        NormSettings {
            radial_order: 16,
            radial_depth: 40,
            sphere_degree: None,
            zonal_order: 16,
            zonal_depth: 40,
            sup_grid: 96,
            estimate_error: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleInfo {
    pub radial: RuleDescriptor,
    pub sphere: RuleDescriptor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    #[serde(with = "float")]
    pub value: f64,
    #[serde(with = "float")]
    pub est_error: f64,
    pub rule: RuleInfo,
}

/// Values of a function on one sphere `|x| = r`, with quadrature weights.
enum Sampler<'a> {
    Zonal { f: &'a dyn BallFunction, pts: Vec<(f64, f64, f64, f64)>, weights: Vec<f64>, desc: RuleDescriptor },
    Profile { f: &'a HarmonicFunction, prof: SphereProfile, rule: SphereRule },
    Nodes { f: &'a dyn BallFunction, rule: SphereRule },
}

impl<'a> Sampler<'a> {
    fn new(f: &'a dyn BallFunction, harmonic: Option<&'a HarmonicFunction>, settings: &NormSettings) -> Result<Self> {
        let n = f.dimension();
        if f.zonal_axis().is_some() {
            let rule = ZonalRule::new(n, settings.zonal_order, settings.zonal_depth)?;
            let pts = rule.points();
            let weights = pts.iter().map(|p| p.3).collect();
            return Ok(Sampler::Zonal { f, pts, weights, desc: rule.descriptor() });
        }
        if let Some(h) = harmonic {
            let degree = settings.sphere_degree.unwrap_or(4 * h.degree() + 24);
            let rule = SphereRule::new(n, degree)?;
            return Ok(Sampler::Profile { f: h, prof: h.profile(&rule)?, rule });
        }
        let rule = SphereRule::new(n, settings.sphere_degree.unwrap_or(48))?;
        Ok(Sampler::Nodes { f, rule })
    }

    fn descriptor(&self) -> RuleDescriptor {
        match self {
            Sampler::Zonal { desc, .. } => *desc,
            Sampler::Profile { rule, .. } | Sampler::Nodes { rule, .. } => rule.descriptor(),
        }
    }

    fn weights(&self) -> &[f64] {
        match self {
            Sampler::Zonal { weights, .. } => weights,
            Sampler::Profile { prof, .. } => prof.weights(),
            Sampler::Nodes { rule, .. } => rule.weights(),
        }
    }

    fn values(&self, r: f64, gap: f64) -> Vec<f64> {
        match self {
            Sampler::Zonal { f, pts, .. } => pts.iter().map(|(u, v, _, _)| f.zonal_value(r, gap, *u, *v)).collect(),
            Sampler::Profile { prof, .. } => prof.values(r),
            Sampler::Nodes { f, rule } => {
                let n = f.dimension();
                rule.nodes()
                    .iter()
                    .map(|d| match BallPoint::with_gap(n, gap, &d[..n]) {
                        Ok(x) => f.value(&x),
                        Err(_) => f64::NAN,
                    })
                    .collect()
            }
        }
    }

    /// Value at an arbitrary direction, given as angles.
    fn value_at(&self, r: f64, gap: f64, angles: &[f64]) -> f64 {
        match self {
            Sampler::Zonal { f, .. } => {
                let th = angles[0];
                let half = (0.5 * th).sin();
                f.zonal_value(r, gap, th.cos(), 2.0 * half * half)
            }
            Sampler::Profile { f, rule, .. } => f.eval_polar(r, &direction(rule.dimension(), angles)),
            Sampler::Nodes { f, rule } => {
                let n = rule.dimension();
                let d = direction(n, angles);
                match BallPoint::with_gap(n, gap, &d[..n]) {
                    Ok(x) => f.value(&x),
                    Err(_) => f64::NAN,
                }
            }
        }
    }

    /// Angles of the `i`-th sample and the local grid spacing.
    fn angles_of(&self, i: usize) -> (Vec<f64>, f64) {
        match self {
            Sampler::Zonal { pts, .. } => {
                let (u, _, s, _) = pts[i];
                let th = s.atan2(u);
                // neighbouring nodes are within one panel width of θ
                (vec![th], (0.5 * th).max(1e-12))
            }
            Sampler::Profile { rule, .. } | Sampler::Nodes { rule, .. } => {
                let x = rule.nodes()[i];
                let step = std::f64::consts::PI / (rule.degree() as f64 + 1.0);
                if rule.dimension() == 2 {
                    (vec![x[1].atan2(x[0])], step)
                } else {
                    (vec![x[2].clamp(-1.0, 1.0).acos(), x[1].atan2(x[0])], step)
                }
            }
        }
    }

    fn mean(&self, p: f64, r: f64, gap: f64) -> f64 {
        let vals = self.values(r, gap);
        if p.is_infinite() {
            return self.sup_refined(r, gap, &vals);
        }
        let s: f64 = vals.iter().zip(self.weights()).map(|(v, w)| w * v.abs().powf(p)).sum();
        s.powf(1.0 / p)
    }

    fn sup_refined(&self, r: f64, gap: f64, vals: &[f64]) -> f64 {
        let mut best = 0;
        for (i, v) in vals.iter().enumerate() {
            if v.abs() > vals[best].abs() || vals[best].is_nan() {
                best = i;
            }
        }
        let mut top = vals[best].abs();
        if let Sampler::Zonal { .. } = self {
            // the axis itself is never a node
            top = top.max(self.value_at(r, gap, &[0.0]).abs());
            top = top.max(self.value_at(r, gap, &[std::f64::consts::PI]).abs());
        }
        let (start, step) = self.angles_of(best);
        let refined = pattern_search(|a| self.value_at(r, gap, a).abs(), start, step);
        top.max(refined)
    }
}

fn direction(n: usize, angles: &[f64]) -> [f64; 3] {
    if n == 2 {
        [angles[0].cos(), angles[0].sin(), 0.0]
    } else {
        let (st, ct) = angles[0].sin_cos();
        let (sp, cp) = angles[1].sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Coordinate pattern search for a local maximum; returns the best value.
fn pattern_search<F: Fn(&[f64]) -> f64>(f: F, start: Vec<f64>, step: f64) -> f64 {
    let mut x = start;
    let mut fx = f(&x);
    let mut h = step;
    let mut iters = 0;
    while h > 1e-12 * step.max(1e-300) && h > 1e-15 && iters < 400 {
        iters += 1;
        let mut moved = false;
        for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += sign * h;
                let fy = f(&y);
                if fy > fx {
                    x = y;
                    fx = fy;
                    moved = true;
                }
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    if fx.is_nan() {
        0.0
    } else {
        fx
    }
}

/// Golden-section maximization of `f` on `[a, b]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `M_p(f, r)`; `p = ∞` is the supremum over the rule nodes followed by a
/// local pattern-search refinement.
pub fn radial_mean(f: &dyn BallFunction, p: f64, r: f64, settings: &NormSettings) -> Result<f64> {
    radial_mean_harmonic(f, None, p, r, settings)
}

/// [`radial_mean`] for a finite expansion, using precomputed degree sums.
pub fn radial_mean_of(f: &HarmonicFunction, p: f64, r: f64, settings: &NormSettings) -> Result<f64> {
    radial_mean_harmonic(f, Some(f), p, r, settings)
}

fn radial_mean_harmonic(
    f: &dyn BallFunction,
    h: Option<&HarmonicFunction>,
    p: f64,
    r: f64,
    settings: &NormSettings,
) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return domain(format!("integral means need 0 <= r < 1, got {r}"));
    }
    if !(p > 0.0) {
        return domain(format!("exponent p must be positive, got {p}"));
    }
    let s = Sampler::new(f, h, settings)?;
    Ok(s.mean(p, r, 1.0 - r))
}

/// Norm of a ball function in `spec`; finite expansions should go through
/// [`space_norm_of`] for speed.
pub fn space_norm(f: &dyn BallFunction, spec: &SpaceSpec, settings: &NormSettings) -> Result<NormResult> {
    norm_impl(f, None, spec, settings)
}

pub fn space_norm_of(f: &HarmonicFunction, spec: &SpaceSpec, settings: &NormSettings) -> Result<NormResult> {
    norm_impl(f, Some(f), spec, settings)
}

fn norm_impl(
    f: &dyn BallFunction,
    h: Option<&HarmonicFunction>,
    spec: &SpaceSpec,
    settings: &NormSettings,
) -> Result<NormResult> {
    spec.validate()?;
    let n = f.dimension();
    let sampler = Sampler::new(f, h, settings)?;
    // finite expansions and zonal kernels extend continuously to r = 1
    let closed = h.is_some() || f.zonal_axis().is_some();
    let rule = RadialRule::new(settings.radial_order, settings.radial_depth)?;
    let info = RuleInfo { radial: rule.descriptor(), sphere: sampler.descriptor() };
    let (p, q, alpha) = (spec.p, spec.q, spec.alpha);
    let integral = |weight_exp: f64, extra: &(dyn Fn(f64) -> f64 + Sync), mean_p: f64, power: f64, rule: &RadialRule| -> Result<f64> {
        let pts = rule.weighted_points(weight_exp)?;
        let vals: Vec<f64> = pts
            .par_iter()
            .map(|pt| sampler.mean(mean_p, pt.r, pt.gap).powf(power) * extra(pt.r) * pt.r.powi(n as i32 - 1))
            .collect();
        let mut total = 0.0;
        for (pt, v) in pts.iter().zip(&vals) {
            total += pt.weight * v;
        }
        if total.is_finite() {
            Ok(total.powf(1.0 / power))
        } else {
            Ok(f64::INFINITY)
        }
    };
    let with_error = |compute: &dyn Fn(&RadialRule) -> Result<f64>| -> Result<NormResult> {
        let value = compute(&rule)?;
        let est_error = if settings.estimate_error {
            let coarse = RadialRule::new((settings.radial_order / 2).max(2), settings.radial_depth)?;
            (compute(&coarse)? - value).abs()
        } else {
            0.0
        };
        Ok(NormResult { value, est_error, rule: info })
    };
    match spec.family {
        Family::A if p.is_finite() => with_error(&|rr| integral(alpha, &|_| 1.0, p, p, rr)),
        Family::B if p.is_finite() => {
            let a = alpha * p - 1.0;
            with_error(&|rr| integral(a, &|r: f64| (1.0 + r).powf(a), q, p, rr))
        }
        Family::A | Family::AInf => {
            let value = sup_ray_first(&sampler, alpha, closed, settings);
            Ok(NormResult { value, est_error: 0.0, rule: info })
        }
        Family::H => {
            let value = sup_over_radius(&sampler, p, alpha, closed, settings);
            Ok(NormResult { value, est_error: 0.0, rule: info })
        }
        Family::B => {
            // B^{∞,q}_α is read as sup_r (1 − r)^α M_q(f, r)
            let value = sup_over_radius(&sampler, q, alpha, closed, settings);
            Ok(NormResult { value, est_error: 0.0, rule: info })
        }
        Family::HalfA | Family::HalfAInf => Err(Error::Unsupported(
            "half-space families apply to half-space functions; use halfspace_norm".into(),
        )),
    }
}

fn weighted(gap: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        gap.powf(alpha)
    }
}

fn gap_grid(settings: &NormSettings, alpha: f64, closed: bool) -> Vec<f64> {
    let m = settings.sup_grid.max(8);
    let mut gaps: Vec<f64> = (0..m).map(|i| 10f64.powf(-14.0 * i as f64 / (m - 1) as f64)).collect();
    if closed && alpha == 0.0 {
        gaps.push(0.0);
    }
    gaps
}

/// `sup_r (1 − r)^α M_p(f, r)`.
fn sup_over_radius(s: &Sampler, p: f64, alpha: f64, closed: bool, settings: &NormSettings) -> f64 {
    let gaps = gap_grid(settings, alpha, closed);
    let phi = |gap: f64| weighted(gap, alpha) * s.mean(p, 1.0 - gap, gap);
    let vals: Vec<f64> = gaps.par_iter().map(|&g| phi(g)).collect();
    refine_on_gaps(&gaps, &vals, phi)
}

fn refine_on_gaps<F: Fn(f64) -> f64>(gaps: &[f64], vals: &[f64], phi: F) -> f64 {
    let mut best = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[best] {
            best = i;
        }
    }
    let top = vals[best];
    if gaps[best] == 0.0 {
        return top;
    }
    let lo = if best + 1 < gaps.len() && gaps[best + 1] > 0.0 { gaps[best + 1] } else { gaps[best] * 0.5 };
    let hi = if best > 0 { gaps[best - 1] } else { gaps[best] };
    if hi <= lo {
        return top;
    }
    let (_, v) = golden_max(|lg| phi(lg.exp()), lo.ln(), hi.ln(), 60);
    top.max(v)
}

/// `sup_x (1 − |x|)^α |f(x)|`, maximizing along each ray first.
fn sup_ray_first(s: &Sampler, alpha: f64, closed: bool, settings: &NormSettings) -> f64 {
    let gaps = gap_grid(settings, alpha, closed);
    let count = s.weights().len();
    let per_gap: Vec<Vec<f64>> = gaps.par_iter().map(|&g| s.values(1.0 - g, g)).collect();
    let (mut best_i, mut best_g, mut top) = (0, 0, f64::NEG_INFINITY);
    for i in 0..count {
        for (gi, &g) in gaps.iter().enumerate() {
            let v = weighted(g, alpha) * per_gap[gi][i].abs();
            if v > top {
                top = v;
                best_i = i;
                best_g = gi;
            }
        }
    }
    let (angles, step) = s.angles_of(best_i);
    let g0 = gaps[best_g];
    let mut start = angles;
    let log_g = if g0 > 0.0 { g0.ln() } else { f64::NEG_INFINITY };
    if log_g.is_finite() {
        start.push(log_g);
    }
    let dims = start.len();
    let refined = pattern_search(
        |a| {
            if log_g.is_finite() {
                let g = a[dims - 1].exp().min(1.0);
                weighted(g, alpha) * s.value_at(1.0 - g, g, &a[..dims - 1]).abs()
            } else {
                s.value_at(1.0, 0.0, a).abs()
            }
        },
        start,
        step,
    );
    let mut out = top.max(refined);
    if let Sampler::Zonal { .. } = s {
        // the pole direction and its antipode are not nodes
        let axis_best = sup_over_radius_axis(s, alpha, closed, settings);
        out = out.max(axis_best);
    }
    out
}

fn sup_over_radius_axis(s: &Sampler, alpha: f64, closed: bool, settings: &NormSettings) -> f64 {
    let gaps = gap_grid(settings, alpha, closed);
    let mut top: f64 = 0.0;
    for th in [0.0, std::f64::consts::PI] {
        let phi = |g: f64| weighted(g, alpha) * s.value_at(1.0 - g, g, &[th]).abs();
        let vals: Vec<f64> = gaps.iter().map(|&g| phi(g)).collect();
        top = top.max(refine_on_gaps(&gaps, &vals, phi));
    }
    top
}

/// A function on the upper half-space `R^{n+1}_+`.
pub trait HalfSpaceFunction: Sync {
    fn dimension(&self) -> usize;
    fn value(&self, x: &[f64; 3], t: f64) -> f64;

    /// Whether the value depends on `x` only through `|x|`.
    fn radial(&self) -> bool {
        false
    }
}

/// `(x, t) ↦ P(λx, λt + shift)`, a positive harmonic function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftedPoisson {
    pub n: usize,
    pub shift: f64,
    pub scale: f64,
}

impl HalfSpaceFunction for ShiftedPoisson {
    fn dimension(&self) -> usize {
        self.n
    }

    fn value(&self, x: &[f64; 3], t: f64) -> f64 {
        let x2: f64 = x.iter().map(|c| c * c).sum::<f64>() * self.scale * self.scale;
        poisson_halfspace_r2(self.n, x2, self.scale * t + self.shift).unwrap_or(f64::NAN)
    }

    fn radial(&self) -> bool {
        true
    }
}

/// Quadrature for half-space integrals: half-line rules in `|x|` and `t`,
/// and a direction rule on `S^{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceSettings {
    pub order: usize,
    pub scale: f64,
    pub levels_down: usize,
    pub levels_up: usize,
    pub sphere_degree: usize,
    pub sup_grid: usize,
}

impl Default for HalfSpaceSettings {
    fn default() -> Self {
        HalfSpaceSettings { order: 16, scale: 1.0, levels_down: 30, levels_up: 30, sphere_degree: 16, sup_grid: 120 }
    }
}

impl HalfSpaceSettings {
    /// Cut radii doubled and one more level toward zero.
    pub fn extended(&self) -> Self {
        HalfSpaceSettings { levels_down: self.levels_down + 1, levels_up: self.levels_up + 1, ..*self }
    }
}

pub(crate) fn directions(n: usize, degree: usize) -> Result<(Vec<[f64; 3]>, Vec<f64>)> {
    match n {
        1 => Ok((vec![[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]], vec![0.5, 0.5])),
        2 | 3 => {
            let rule = SphereRule::new(n, degree)?;
            Ok((rule.nodes().to_vec(), rule.weights().to_vec()))
        }
        _ => domain(format!("half-space functions are supported for n in 1..=3, got {n}")),
    }
}

/// `‖f‖` in `Ã^p_α` or `Ã^∞_α`. `decay` declares `|f(z)| ≲ |z|^{-decay}` at
/// infinity; `f` must be bounded near `t = 0`.
pub fn halfspace_norm(
    f: &dyn HalfSpaceFunction,
    spec: &SpaceSpec,
    decay: f64,
    settings: &HalfSpaceSettings,
) -> Result<NormResult> {
    spec.validate()?;
    let n = f.dimension();
    let (dirs, dw) = directions(n, settings.sphere_degree)?;
    let desc = RuleInfo {
        radial: RuleDescriptor { dimension: 1, order: settings.order, depth: settings.levels_down + settings.levels_up },
        sphere: RuleDescriptor { dimension: n, order: settings.sphere_degree, depth: 0 },
    };
    let (p, alpha) = (spec.p, spec.alpha);
    match spec.family {
        Family::HalfA => {
            if decay * p - alpha <= n as f64 + 1.0 {
                return domain(format!(
                    "declared decay {decay} does not make |f|^{p} t^{alpha} integrable on the half-space"
                ));
            }
            let compute = |s: &HalfSpaceSettings| -> Result<f64> {
                let rule = HalfLineRule::new(s.order, s.scale, s.levels_down, s.levels_up)?;
                let area = if n == 1 { 2.0 } else { sphere_area(n) };
                let inner = |t: f64| -> f64 {
                    let g = |rho: f64| -> f64 {
                        dirs.iter()
                            .zip(&dw)
                            .map(|(d, w)| w * f.value(&d.map(|c| c * rho), t).abs().powf(p))
                            .sum()
                    };
                    area * integrate_half_line(g, n as f64 - 1.0, decay * p, &rule).unwrap_or(f64::NAN)
                };
                // evaluate the outer integrand in parallel, then sum in order
                let pts = rule.points();
                let mut ts: Vec<f64> = pts.iter().map(|(t, _)| *t).collect();
                let h = rule.inner_cap();
                ts.push(0.5 * h);
                ts.push(rule.cut());
                let vals: Vec<f64> = ts.par_iter().map(|&t| inner(t)).collect();
                let table: std::collections::HashMap<u64, f64> =
                    ts.iter().zip(&vals).map(|(t, v)| (t.to_bits(), *v)).collect();
                let v = integrate_half_line(|t| table[&t.to_bits()], alpha, decay * p - n as f64, &rule)?;
                Ok(v.powf(1.0 / p))
            };
            let value = compute(settings)?;
            let est_error = (compute(&settings.extended())? - value).abs();
            Ok(NormResult { value, est_error, rule: desc })
        }
        Family::HalfAInf => {
            let m = settings.sup_grid.max(8);
            let ts: Vec<f64> = (0..m).map(|i| 10f64.powf(-8.0 + 16.0 * i as f64 / (m - 1) as f64)).collect();
            let mut rhos = vec![0.0];
            rhos.extend((0..m).map(|i| 10f64.powf(-8.0 + 16.0 * i as f64 / (m - 1) as f64)));
            let phi = |t: f64, rho: f64, d: &[f64; 3]| t.powf(alpha) * f.value(&d.map(|c| c * rho), t).abs();
            let rows: Vec<(f64, usize, usize, usize)> = ts
                .par_iter()
                .enumerate()
                .map(|(ti, &t)| {
                    let mut best = (f64::NEG_INFINITY, ti, 0, 0);
                    for (ri, &rho) in rhos.iter().enumerate() {
                        for (di, d) in dirs.iter().enumerate() {
                            let v = phi(t, rho, d);
                            if v > best.0 {
                                best = (v, ti, ri, di);
                            }
                        }
                    }
                    best
                })
                .collect();
            let best = rows.iter().fold(rows[0], |a, b| if b.0 > a.0 { *b } else { a });
            let d = dirs[best.3];
            let start = vec![ts[best.1].ln(), rhos[best.2]];
            let refined = pattern_search(|a| phi(a[0].exp(), a[1].abs(), &d), start, 0.1);
            let value = best.0.max(refined);
            Ok(NormResult { value, est_error: 0.0, rule: desc })
        }
        _ => Err(Error::Unsupported("halfspace_norm handles the half-space families only".into())),
    }
}

/// `sup_x |f(x)| (1 − |x|)^{(α+n)/p}` against `‖f‖_{A^p_α}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRatio {
    pub sup: f64,
    pub norm: f64,
    pub ratio: f64,
}

pub fn embedding_ratio(
    f: &dyn BallFunction,
    harmonic: Option<&HarmonicFunction>,
    p: f64,
    alpha: f64,
    settings: &NormSettings,
) -> Result<EmbeddingRatio> {
    if alpha <= -1.0 || !(p > 0.0 && p.is_finite()) {
        return domain("embedding needs alpha > -1 and 0 < p < inf");
    }
    let n = f.dimension() as f64;
    let sup = norm_impl(f, harmonic, &SpaceSpec::bergman_sup((alpha + n) / p), settings)?.value;
    let norm = norm_impl(f, harmonic, &SpaceSpec::bergman(p, alpha), settings)?.value;
    Ok(EmbeddingRatio { sup, norm, ratio: sup / norm })
}

/// Embedding ratios for a named family; each ratio must be finite, and
/// the largest one is recorded against `bound`.
pub fn embedding_check(
    family: &[(String, &dyn BallFunction, Option<&HarmonicFunction>)],
    p: f64,
    alpha: f64,
    bound: f64,
    settings: &NormSettings,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("embedding", "pointwise bound by the weighted Bergman norm", 0);
    let mut largest: f64 = 0.0;
    for (name, f, h) in family {
        let e = embedding_ratio(*f, *h, p, alpha, settings)?;
        largest = largest.max(e.ratio);
        report.push(
            CaseResult::new(name.clone(), e.ratio, bound, 0.0, Comparison::Finite)
                .with_input("sup", e.sup)
                .with_input("norm", e.norm),
        );
    }
    report.push(CaseResult::at_most("max_ratio", largest, bound));
    Ok(report)
}
