//! Sublevel sets `U_{ε,t}` and `V_{ε,λ}`, the distance functionals `t₂`
//! (ball) and `s₂` (half-space), and the decomposition `f = f₁ + f₂`
//! obtained by splitting the reproducing integral of `f` over `U_{ε,t}`.
//!
//! Two kinds of quadrature are used. The decomposition cuts every ray
//! from the origin exactly at the boundary of `U`, so `f₁` and `f₂` are
//! accurate. The `t₂` and `s₂` integrals compose the indicator of the set
//! with a fixed product rule, which makes them exactly non-increasing in `ε`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};
use crate::harmonic_fn::BallFunction;
use crate::kernels::{BallPoint, BergmanKernelBall, BergmanKernelHalfSpace, HalfSpacePoint};
use crate::norms::{directions, space_norm, HalfSpaceFunction, HalfSpaceSettings, NormSettings, SpaceSpec};
use crate::quadrature::{
    fit_decay_exponent, fit_samples, geometric_gaps, integrate_half_line, GaussPanel, HalfLineRule, RadialRule,
    SphereRule,
};
use crate::report::{float, CaseResult, Comparison, VerificationReport};
use crate::special::sphere_area;

/// `U_{ε,t} = {x : |f(x)| (1 − |x|)^t ≥ ε}`.
pub struct SublevelSet<'a> {
    f: &'a dyn BallFunction,
    eps: f64,
    t: f64,
}

/// Part of a ray `{r x' : 0 ≤ r < 1}` in gap coordinates `1 − r`:
/// `r` runs over `[1 − outer, 1 − inner]`, with `inner = 0` when the
/// piece reaches the sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPiece {
    pub outer: f64,
    pub inner: f64,
}

impl<'a> SublevelSet<'a> {
    pub fn new(f: &'a dyn BallFunction, eps: f64, t: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) || !(t >= 0.0 && t.is_finite()) {
            return domain(format!("sublevel set needs eps > 0 and t >= 0, got eps = {eps}, t = {t}"));
        }
        Ok(SublevelSet { f, eps, t })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `|f(x)| (1 − |x|)^t`.
    pub fn weighted(&self, x: &BallPoint) -> f64 {
        self.f.value(x).abs() * x.gap().powf(self.t)
    }

    pub fn contains(&self, x: &BallPoint) -> bool {
        self.weighted(x) >= self.eps
    }

    fn excess(&self, n: usize, gap: f64, dir: &[f64; 3]) -> f64 {
        match BallPoint::with_gap(n, gap, &dir[..n]) {
            Ok(x) => self.weighted(&x) - self.eps,
            Err(_) => f64::NAN,
        }
    }

    /// Pieces of the ray through `dir` inside the set, ordered from the
    /// origin outward. Sign changes are located on `scan` and bisected.
    pub fn ray_pieces(&self, dir: &[f64; 3], scan: &[f64]) -> Vec<RayPiece> {
        let n = self.f.dimension();
        let vals: Vec<f64> = scan.iter().map(|&g| self.excess(n, g, dir)).collect();
        let mut pieces = Vec::new();
        let mut open: Option<f64> = if vals[0] >= 0.0 { Some(scan[0]) } else { None };
        for i in 1..scan.len() {
            let (a, b) = (vals[i - 1] >= 0.0, vals[i] >= 0.0);
            if a == b {
                continue;
            }
            let g = bisect(|g| self.excess(n, g, dir) >= 0.0, scan[i - 1], scan[i], a);
            match open.take() {
                Some(outer) => pieces.push(RayPiece { outer, inner: g }),
                None => open = Some(g),
            }
        }
        if let Some(outer) = open {
            pieces.push(RayPiece { outer, inner: 0.0 });
        }
        pieces
    }

    fn ray_max(&self, dir: &[f64; 3], scan: &[f64]) -> f64 {
        let n = self.f.dimension();
        scan.iter().map(|&g| self.excess(n, g, dir)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Point where `inside` flips between `a` and `b`; `at_a` is its value at `a`.
fn bisect<F: Fn(f64) -> bool>(inside: F, mut a: f64, mut b: f64, at_a: bool) -> f64 {
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if inside(m) == at_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `{x : |f(x, t)| t^λ ≥ ε}` on the half-space.
pub struct HalfSpaceSublevel<'a> {
    f: &'a dyn HalfSpaceFunction,
    eps: f64,
    lambda: f64,
}

impl<'a> HalfSpaceSublevel<'a> {
    pub fn new(f: &'a dyn HalfSpaceFunction, eps: f64, lambda: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) || !(lambda > 0.0 && lambda.is_finite()) {
            return domain(format!("sublevel set needs eps > 0 and lambda > 0, got {eps}, {lambda}"));
        }
        Ok(HalfSpaceSublevel { f, eps, lambda })
    }

    pub fn weighted(&self, x: &[f64; 3], t: f64) -> f64 {
        self.f.value(x, t).abs() * t.powf(self.lambda)
    }

    pub fn contains(&self, x: &[f64; 3], t: f64) -> bool {
        self.weighted(x, t) >= self.eps
    }
}

/// Quadrature parameters of the distance computations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceSettings {
    /// Directions sampled when locating the angular edges of `U`.
    pub angle_samples: usize,
    pub angle_order: usize,
    pub angle_depth: usize,
    /// Widest angular panel away from the graded ends.
    pub angle_width: f64,
    /// Azimuthal points for `n = 3`.
    pub azimuths: usize,
    /// Scan points per halving of `1 − r` along each ray.
    pub scan_per_level: usize,
    pub scan_levels: usize,
    pub radial_order: usize,
    pub radial_depth: usize,
    /// Dyadic levels toward the sphere on pieces that reach it.
    pub boundary_depth: usize,
    /// Product rule of [`bergman_projection`].
    pub projection_depth: usize,
    pub projection_sphere_degree: usize,
    /// Fixed product rule of the `t₂` integral.
    pub t2_radial_order: usize,
    pub t2_inner_depth: usize,
    pub t2_outer_depth: usize,
    pub t2_sphere_degree: usize,
    /// Range of `1 − |x|` over which the inner-integral growth is fitted.
    pub fit_largest: f64,
    pub fit_smallest: f64,
    /// Rules of the `A^∞_t` norm of `f₁`.
    pub norms: NormSettings,
    /// Rules of the `A^p_α` norm of `f₂`, where only finiteness is asserted.
    pub f2_norms: NormSettings,
    /// Allowed `|f₁ + f₂ − f|` relative to `max(1, |f|)`.
    pub additivity_tol: f64,
    /// Allowed deviation of the `‖f₁‖` slope from 1.
    pub slope_tol: f64,
}

impl Default for DistanceSettings {
    fn default() -> Self {
        DistanceSettings {
            angle_samples: 256,
            angle_order: 6,
            angle_depth: 10,
            angle_width: std::f64::consts::PI / 16.0,
            azimuths: 16,
            scan_per_level: 3,
            scan_levels: 40,
            radial_order: 8,
            radial_depth: 8,
            boundary_depth: 40,
            projection_depth: 16,
            projection_sphere_degree: 64,
            t2_radial_order: 8,
            t2_inner_depth: 30,
            t2_outer_depth: 16,
            t2_sphere_degree: 32,
            fit_largest: 1e-1,
            fit_smallest: 5e-4,
            norms: NormSettings {
                radial_order: 8,
                radial_depth: 20,
                sphere_degree: Some(32),
                zonal_order: 6,
                zonal_depth: 10,
                sup_grid: 48,
                estimate_error: false,
            },
            f2_norms: NormSettings {
                radial_order: 6,
                radial_depth: 12,
                sphere_degree: Some(16),
                zonal_order: 6,
                zonal_depth: 12,
                sup_grid: 48,
                estimate_error: false,
            },
            additivity_tol: 1e-6,
            slope_tol: 0.1,
        }
    }
}

impl DistanceSettings {
    fn scan(&self) -> Vec<f64> {
        let mut gaps: Vec<f64> = (0..8).map(|i| 1.0 - i as f64 / 16.0).collect();
        let per = self.scan_per_level.max(1);
        gaps.extend((0..=per * self.scan_levels).map(|j| 0.5 * (-(j as f64) / per as f64).exp2()));
        gaps
    }
}

/// Orthonormal frame `e, a, b` with directions `cos θ e + sin θ (cos φ a + sin φ b)`.
#[derive(Debug, Clone, Copy)]
struct Frame {
    n: usize,
    e: [f64; 3],
    a: [f64; 3],
    b: [f64; 3],
}

impl Frame {
    fn new(n: usize, axis: Option<[f64; 3]>) -> Self {
        let e = axis.unwrap_or(if n == 2 { [1.0, 0.0, 0.0] } else { [0.0, 0.0, 1.0] });
        if n == 2 {
            return Frame { n, e, a: [-e[1], e[0], 0.0], b: [0.0; 3] };
        }
        // any unit vector orthogonal to e, then b = e × a
        let pick = if e[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let d = pick[0] * e[0] + pick[1] * e[1] + pick[2] * e[2];
        let mut a = [pick[0] - d * e[0], pick[1] - d * e[1], pick[2] - d * e[2]];
        let na = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        a.iter_mut().for_each(|c| *c /= na);
        let b = [e[1] * a[2] - e[2] * a[1], e[2] * a[0] - e[0] * a[2], e[0] * a[1] - e[1] * a[0]];
        Frame { n, e, a, b }
    }

    fn dir(&self, theta: f64, phi: f64) -> [f64; 3] {
        let (s, c) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let mut d = [0.0; 3];
        for i in 0..3 {
            d[i] = c * self.e[i] + s * (cp * self.a[i] + sp * self.b[i]);
        }
        if self.n == 2 {
            d[2] = 0.0;
        }
        d
    }

    fn theta_range(&self) -> (f64, f64) {
        use std::f64::consts::PI;
        if self.n == 2 {
            (-PI, PI)
        } else {
            (0.0, PI)
        }
    }

    /// Surface weight of `dθ` (normalized sphere measure), per azimuth.
    fn theta_density(&self, theta: f64, azimuths: usize) -> f64 {
        use std::f64::consts::PI;
        if self.n == 2 {
            1.0 / (2.0 * PI)
        } else {
            0.5 * theta.sin() / azimuths as f64
        }
    }
}

/// Angular layout of `U`: per azimuth, the polar angles where rays start
/// or stop meeting the set, and the rays that reach the sphere.
struct Layout {
    frame: Frame,
    slices: Vec<Slice>,
}

struct Slice {
    phi: f64,
    edges: Vec<f64>,
    touching: Vec<(f64, f64)>,
}

fn layout(set: &SublevelSet<'_>, settings: &DistanceSettings, scan: &[f64]) -> Layout {
    let n = set.f.dimension();
    let axis = set.f.zonal_axis();
    let frame = Frame::new(n, axis);
    let phis: Vec<f64> = if n == 2 {
        vec![0.0]
    } else {
        (0..settings.azimuths).map(|i| 2.0 * std::f64::consts::PI * i as f64 / settings.azimuths as f64).collect()
    };
    let build = |phi: f64| -> Slice {
        let (lo, hi) = frame.theta_range();
        let m = settings.angle_samples.max(8);
        let thetas: Vec<f64> = (0..=m).map(|i| lo + (hi - lo) * i as f64 / m as f64).collect();
        let maxes: Vec<f64> = thetas.par_iter().map(|&th| set.ray_max(&frame.dir(th, phi), scan)).collect();
        let mut edges = Vec::new();
        for i in 1..thetas.len() {
            let (a, b) = (maxes[i - 1] >= 0.0, maxes[i] >= 0.0);
            if a != b {
                edges.push(bisect(|th| set.ray_max(&frame.dir(th, phi), scan) >= 0.0, thetas[i - 1], thetas[i], a));
            }
        }
        let last = *scan.last().unwrap_or(&0.0);
        let mut touching: Vec<(f64, f64)> = thetas
            .iter()
            .filter_map(|&th| {
                let v = set.excess(n, last, &frame.dir(th, phi));
                (v >= 0.0).then_some((th, v))
            })
            .collect();
        touching.sort_by(|a, b| b.1.total_cmp(&a.1));
        Slice { phi, edges, touching }
    };
    let slices = if n == 3 && axis.is_some() {
        // zonal: one layout serves every azimuth
        let s = build(0.0);
        phis.iter().map(|&phi| Slice { phi, edges: s.edges.clone(), touching: s.touching.clone() }).collect()
    } else {
        phis.iter().map(|&phi| build(phi)).collect()
    };
    Layout { frame, slices }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    Inside,
    Outside,
}

/// Gauss nodes on `[a, b]`: panels no wider than `width`, the two end
/// panels graded geometrically toward `a` and `b`.
fn graded_both(panel: &GaussPanel, a: f64, b: f64, depth: usize, width: f64) -> Vec<(f64, f64)> {
    let k = ((b - a) / width).ceil().max(2.0) as usize;
    let h0 = (b - a) / k as f64;
    let mut panels: Vec<(f64, f64)> = (1..k - 1).map(|i| (a + i as f64 * h0, a + (i + 1) as f64 * h0)).collect();
    let mut h = h0;
    for _ in 0..depth {
        panels.push((a + 0.5 * h, a + h));
        panels.push((b - h, b - 0.5 * h));
        h *= 0.5;
    }
    panels.push((a, a + h));
    panels.push((b - h, b));
    let mut out = Vec::new();
    for (lo, hi) in panels {
        if hi > lo {
            out.extend(panel.mapped(lo, hi));
        }
    }
    out
}

/// Gauss nodes on the gap interval `[inner, outer]`, graded toward `inner`.
/// A piece reaching the sphere (`inner = 0`) gets `boundary` levels and a
/// midpoint node for the final cap.
fn gap_nodes(panel: &GaussPanel, inner: f64, outer: f64, depth: usize, boundary: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let len = outer - inner;
    if len <= 0.0 {
        return out;
    }
    let levels = if inner == 0.0 { boundary } else { depth };
    let mut h = len;
    for _ in 0..levels {
        out.extend(panel.mapped(inner + 0.5 * h, inner + h));
        h *= 0.5;
    }
    if inner == 0.0 {
        out.push((0.5 * h, h));
    } else {
        out.extend(panel.mapped(inner, inner + h));
    }
    out
}

/// Quadrature nodes `(y, w)` for `∫ g(y) dy` over `U` or its complement,
/// `dy = r^{n−1} dr dσ`.
fn region_nodes(
    set: &SublevelSet<'_>,
    lay: &Layout,
    region: Region,
    breaks: &[f64],
    settings: &DistanceSettings,
    scan: &[f64],
) -> Result<Vec<(BallPoint, f64)>> {
    let n = set.f.dimension();
    let frame = &lay.frame;
    let angle_panel = GaussPanel::new(settings.angle_order)?;
    let radial_panel = GaussPanel::new(settings.radial_order)?;
    let mut thetas: Vec<(f64, f64, f64)> = Vec::new();
    for slice in &lay.slices {
        let (lo, hi) = frame.theta_range();
        // θ = 0 is the axis of a zonal function, where its peak sits
        let mut cuts = vec![lo, hi, 0.0];
        cuts.extend(slice.edges.iter().copied());
        cuts.extend(breaks.iter().copied().filter(|b| *b > lo && *b < hi));
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a <= 0.0 {
                continue;
            }
            if region == Region::Inside && set.ray_max(&frame.dir(0.5 * (a + b), slice.phi), scan) < 0.0 {
                continue;
            }
            for (th, wt) in graded_both(&angle_panel, a, b, settings.angle_depth, settings.angle_width) {
                thetas.push((th, slice.phi, wt * frame.theta_density(th, lay.slices.len())));
            }
        }
    }
    let per_ray: Vec<Vec<(BallPoint, f64)>> = thetas
        .par_iter()
        .map(|&(th, phi, wt)| -> Result<Vec<(BallPoint, f64)>> {
            let dir = frame.dir(th, phi);
            let pieces = set.ray_pieces(&dir, scan);
            let spans: Vec<(f64, f64)> = match region {
                Region::Inside => pieces.iter().map(|p| (p.inner, p.outer)).collect(),
                Region::Outside => {
                    // complement in gap coordinates, from the sphere inward
                    let mut out = Vec::new();
                    let mut inner = 0.0;
                    for p in pieces.iter().rev() {
                        if p.inner > inner {
                            out.push((inner, p.inner));
                        }
                        inner = p.outer;
                    }
                    if inner < 1.0 {
                        out.push((inner, 1.0));
                    }
                    out
                }
            };
            let mut nodes = Vec::new();
            for (inner, outer) in spans {
                for (g, w) in gap_nodes(&radial_panel, inner, outer, settings.radial_depth, settings.boundary_depth) {
                    let y = BallPoint::with_gap(n, g, &dir[..n])?;
                    let jac = y.r().powi(n as i32 - 1);
                    nodes.push((y, w * wt * jac));
                }
            }
            Ok(nodes)
        })
        .collect::<Result<_>>()?;
    Ok(per_ray.into_iter().flatten().collect())
}

/// `x ↦ Σ_i c_i Q_β(x, y_i)`: a quadrature-backed kernel integral.
pub struct KernelIntegral {
    n: usize,
    /// Axis `e` and a unit `a ⊥ e` when the nodes are symmetric about `e`.
    axis: Option<([f64; 3], [f64; 3])>,
    kernel: BergmanKernelBall,
    nodes: Vec<BallPoint>,
    coefs: Vec<f64>,
}

impl KernelIntegral {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl BallFunction for KernelIntegral {
    fn dimension(&self) -> usize {
        self.n
    }

    fn value(&self, x: &BallPoint) -> f64 {
        self.nodes
            .iter()
            .zip(&self.coefs)
            .map(|(y, c)| c * self.kernel.eval(x, y).unwrap_or(f64::NAN))
            .sum()
    }

    fn zonal_axis(&self) -> Option<[f64; 3]> {
        self.axis.map(|(e, _)| e)
    }

    fn zonal_value(&self, _r: f64, gap: f64, u: f64, v: f64) -> f64 {
        let Some((e, a)) = self.axis else { return f64::NAN };
        // sin θ = sqrt(1 − u²) = sqrt(v (2 − v))
        let s = (v * (2.0 - v)).max(0.0).sqrt();
        let d = [u * e[0] + s * a[0], u * e[1] + s * a[1], u * e[2] + s * a[2]];
        match BallPoint::with_gap(self.n, gap.max(f64::MIN_POSITIVE), &d[..self.n]) {
            Ok(x) => self.value(&x),
            Err(_) => f64::NAN,
        }
    }
}

/// `f − f₂`.
pub struct Remainder<'a> {
    f: &'a dyn BallFunction,
    f2: &'a KernelIntegral,
}

impl BallFunction for Remainder<'_> {
    fn dimension(&self) -> usize {
        self.f.dimension()
    }

    fn value(&self, x: &BallPoint) -> f64 {
        self.f.value(x) - self.f2.value(x)
    }

    fn zonal_axis(&self) -> Option<[f64; 3]> {
        self.f2.zonal_axis().and(self.f.zonal_axis())
    }

    fn zonal_value(&self, r: f64, gap: f64, u: f64, v: f64) -> f64 {
        self.f.zonal_value(r, gap, u, v) - self.f2.zonal_value(r, gap, u, v)
    }
}

/// `f₂ = ∫_U Q_β(·, y) f(y) (1 − |y|²)^β dy` and, computed independently,
/// the same integral over `B ∖ U`.
pub struct Decomposition<'a> {
    pub f: &'a dyn BallFunction,
    pub f2: KernelIntegral,
    pub complement: KernelIntegral,
}

impl<'a> Decomposition<'a> {
    /// `f₁ = f − f₂`.
    pub fn f1(&self) -> Remainder<'_> {
        Remainder { f: self.f, f2: &self.f2 }
    }

    /// `max |f₁ + f₂ − f| / max(1, |f|)` with `f₁` from the complement integral.
    pub fn additivity_error(&self, points: &[BallPoint]) -> f64 {
        points
            .par_iter()
            .map(|x| {
                let fx = self.f.value(x);
                (self.complement.value(x) + self.f2.value(x) - fx).abs() / fx.abs().max(1.0)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(0.0, f64::max)
    }
}

fn kernel_integral(
    f: &dyn BallFunction,
    kernel: &BergmanKernelBall,
    nodes: Vec<(BallPoint, f64)>,
    weight: impl Fn(&BallPoint) -> f64 + Sync,
    axis: Option<([f64; 3], [f64; 3])>,
) -> Result<KernelIntegral> {
    let coefs: Vec<f64> = nodes.par_iter().map(|(y, w)| w * weight(y) * f.value(y)).collect();
    if let Some((i, c)) = coefs.iter().enumerate().find(|(_, c)| !c.is_finite()) {
        return Err(Error::Evaluation { node: nodes[i].0.r(), value: *c });
    }
    Ok(KernelIntegral {
        n: f.dimension(),
        axis,
        kernel: kernel.clone(),
        nodes: nodes.into_iter().map(|(y, _)| y).collect(),
        coefs,
    })
}

/// Splits the reproducing integral of `f` over `U_{ε,t}` and its complement.
pub fn decompose<'a>(
    f: &'a dyn BallFunction,
    eps: f64,
    t: f64,
    beta: f64,
    settings: &DistanceSettings,
) -> Result<Decomposition<'a>> {
    if !(beta > (t - 1.0).max(0.0)) {
        return domain(format!("decomposition needs beta > max(t - 1, 0), got beta = {beta}, t = {t}"));
    }
    let n = f.dimension();
    let set = SublevelSet::new(f, eps, t)?;
    let scan = settings.scan();
    let lay = layout(&set, settings, &scan);
    let kernel = BergmanKernelBall::new(n, beta, 64)?;
    // (1 − |y|²)^β = gap^β (1 + r)^β
    let weight = |y: &BallPoint| (y.gap() * (1.0 + y.r())).powf(beta);
    let inside = region_nodes(&set, &lay, Region::Inside, &[], settings, &scan)?;
    let outside = region_nodes(&set, &lay, Region::Outside, &[], settings, &scan)?;
    // a zonal f has a rotation-invariant U, so both pieces are zonal
    let axis = f.zonal_axis().map(|e| (e, lay.frame.a));
    Ok(Decomposition {
        f,
        f2: kernel_integral(f, &kernel, inside, weight, axis)?,
        complement: kernel_integral(f, &kernel, outside, weight, axis)?,
    })
}

/// `x ↦ ∫_B Q_β(x, y) f(y) (1 − |y|²)^β dy`, the weighted Bergman
/// projection, on a radial × sphere product rule over the whole ball.
pub fn bergman_projection(f: &dyn BallFunction, beta: f64, settings: &DistanceSettings) -> Result<KernelIntegral> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return domain(format!("projection needs beta >= 0, got {beta}"));
    }
    let n = f.dimension();
    let kernel = BergmanKernelBall::new(n, beta, 64)?;
    let radial = RadialRule::new(settings.radial_order, settings.projection_depth)?;
    let sphere = SphereRule::new(n, settings.projection_sphere_degree)?;
    let mut nodes = Vec::new();
    for p in radial.weighted_points(beta)? {
        for (d, w) in sphere.nodes().iter().zip(sphere.weights()) {
            nodes.push((BallPoint::with_gap(n, p.gap, &d[..n])?, p.weight * w * p.r.powi(n as i32 - 1)));
        }
    }
    // (1 − |y|²)^β = gap^β (1 + r)^β, the gap power already in the weights
    kernel_integral(f, &kernel, nodes, |y| (1.0 + y.r()).powf(beta), None)
}

/// One evaluation of the `t₂` double integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct T2Value {
    pub eps: f64,
    /// `+inf` when declared divergent.
    #[serde(with = "float")]
    pub value: f64,
    pub infinite: bool,
    /// Fitted exponent of the inner integral in `1 − |x|`.
    pub e_inner: f64,
    /// `p · e_inner + α`; divergent when `≤ −1`.
    pub exponent: f64,
    /// Fixed-rule nodes inside `U`.
    pub nodes: usize,
}

fn check_t2_params(n: usize, p: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) || !(alpha > -1.0) {
        return domain(format!("t2 needs p > 1 and alpha > -1, got p = {p}, alpha = {alpha}"));
    }
    let t = (alpha + n as f64) / p;
    if beta.fract() != 0.0 || !(beta > (t - 1.0).max(alpha / p)) || beta < 0.0 {
        return domain(format!(
            "t2 needs an integer beta > max((alpha + n)/p - 1, alpha/p) = {}, got {beta}",
            (t - 1.0).max(alpha / p)
        ));
    }
    Ok(t)
}

/// Smallest admissible integer `β` for the decomposition with exponent `t`.
pub fn default_beta(p: f64, alpha: f64, t: f64) -> f64 {
    ((t - 1.0).max(alpha / p).max(0.0)).floor() + 1.0
}

/// `∫_B (∫_U |Q_β(x, y)| (1 − |y|)^{β−t} dy)^p (1 − |x|)^α dx` for fixed `ε`.
pub fn t2_integral(
    f: &dyn BallFunction,
    eps: f64,
    p: f64,
    alpha: f64,
    beta: f64,
    settings: &DistanceSettings,
) -> Result<T2Value> {
    let n = f.dimension();
    let t = check_t2_params(n, p, alpha, beta)?;
    let set = SublevelSet::new(f, eps, t)?;
    let kernel = BergmanKernelBall::new(n, beta, 64)?;
    let sphere = SphereRule::new(n, settings.t2_sphere_degree)?;

    // fixed inner rule with the indicator of U composed in
    let inner_rule = RadialRule::new(settings.t2_radial_order, settings.t2_inner_depth)?;
    let inner_pts = inner_rule.weighted_points(beta - t)?;
    let cand: Vec<(BallPoint, f64)> = inner_pts
        .iter()
        .flat_map(|p| sphere.nodes().iter().zip(sphere.weights()).map(move |(d, w)| (p, d, w)))
        .map(|(p, d, w)| Ok((BallPoint::with_gap(n, p.gap, &d[..n])?, p.weight * w * p.r.powi(n as i32 - 1))))
        .collect::<Result<_>>()?;
    let keep: Vec<bool> = cand.par_iter().map(|(y, _)| set.contains(y)).collect();
    let inner: Vec<(BallPoint, f64)> = cand.into_iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
    let inner_at = |x: &BallPoint, nodes: &[(BallPoint, f64)]| -> f64 {
        nodes.iter().map(|(y, w)| w * kernel.eval(x, y).unwrap_or(f64::NAN).abs()).sum()
    };

    let outer_rule = RadialRule::new(settings.t2_radial_order, settings.t2_outer_depth)?;
    let outer_pts = outer_rule.weighted_points(alpha)?;
    let value = if inner.is_empty() {
        0.0
    } else {
        let outer: Vec<(BallPoint, f64)> = outer_pts
            .iter()
            .flat_map(|p| sphere.nodes().iter().zip(sphere.weights()).map(move |(d, w)| (p, d, w)))
            .map(|(p, d, w)| Ok((BallPoint::with_gap(n, p.gap, &d[..n])?, p.weight * w * p.r.powi(n as i32 - 1))))
            .collect::<Result<_>>()?;
        let terms: Vec<f64> = outer.par_iter().map(|(x, w)| w * inner_at(x, &inner).powf(p)).collect();
        terms.iter().sum()
    };

    // growth of the inner integral toward the sphere, on ray-split rules
    let scan = settings.scan();
    let lay = layout(&set, settings, &scan);
    let frame = lay.frame;
    // U away from the sphere keeps the inner integral bounded
    let candidates: Vec<(f64, f64)> =
        lay.slices.iter().flat_map(|s| s.touching.iter().take(3).map(move |(th, _)| (*th, s.phi))).collect();
    let touching = !candidates.is_empty();
    let gaps = geometric_gaps(settings.fit_largest, settings.fit_smallest, 8);
    let mut e_inner = if touching { f64::INFINITY } else { 0.0 };
    for (th, phi) in candidates.iter().take(3) {
        let nodes = region_nodes(&set, &lay, Region::Inside, &[*th], settings, &scan)?;
        let weighted: Vec<(BallPoint, f64)> = nodes.into_iter().map(|(y, w)| (y, w * y.gap().powf(beta - t))).collect();
        let dir = frame.dir(*th, *phi);
        let samples: Vec<f64> = gaps
            .par_iter()
            .map(|&g| BallPoint::with_gap(n, g, &dir[..n]).map(|x| inner_at(&x, &weighted)))
            .collect::<Result<_>>()?;
        let mut it = samples.iter();
        let fit = fit_decay_exponent(|_| it.next().copied().unwrap_or(f64::NAN), &gaps)?;
        e_inner = e_inner.min(fit.slope);
    }
    let exponent = p * e_inner + alpha;
    let infinite = touching && exponent <= -1.0;
    Ok(T2Value {
        eps,
        value: if infinite { f64::INFINITY } else { value },
        infinite,
        e_inner,
        exponent,
        nodes: inner.len(),
    })
}

/// One `ε` of a [`DistanceEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceRow {
    pub eps: f64,
    #[serde(with = "float")]
    pub value: f64,
    pub infinite: bool,
    pub e_inner: f64,
    /// `‖f − f₂‖_{A^∞_t}`.
    #[serde(with = "float")]
    pub f1_norm: f64,
    /// `‖f₂‖_{A^p_α}`.
    #[serde(with = "float")]
    pub f2_norm: f64,
    pub additivity: f64,
    /// Quadrature nodes of `f₂`.
    pub u_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceEstimate {
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub t: f64,
    pub beta: f64,
    /// Ordered by increasing `ε`.
    pub rows: Vec<DistanceRow>,
    /// Midpoint of the divergent/convergent `ε` bracket; zero when every
    /// `ε` gives a finite integral.
    pub t2: f64,
    pub bracket: (f64, f64),
    /// Fitted exponent of `‖f₁‖_{A^∞_t}` in `ε` over rows with nonempty `U`.
    pub f1_slope: Option<f64>,
    /// `max ‖f₁‖_{A^∞_t} / ε` over rows with a finite integral.
    #[serde(with = "float")]
    pub f1_constant: f64,
    pub cases: Vec<CaseResult>,
    pub verdict: bool,
}

impl DistanceEstimate {
    pub fn to_report(&self, suite: &str) -> VerificationReport {
        let mut r = VerificationReport::new(suite, "constructive distance bound on the ball", 0);
        r.note("t2", self.t2);
        r.note("bracket", self.bracket);
        r.note("rows", &self.rows);
        r.extend(self.cases.iter().cloned());
        r
    }
}

fn check_points(n: usize) -> Result<Vec<BallPoint>> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let dirs: Vec<[f64; 3]> = if n == 2 {
        vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [s, s, 0.0], [-1.0, 0.0, 0.0], [0.6, -0.8, 0.0]]
    } else {
        vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, s, s], [0.0, 0.0, -1.0], [0.6, 0.0, -0.8]]
    };
    let mut pts = vec![BallPoint::new(n, 0.0, &dirs[0][..n])?];
    for r in [0.35, 0.7] {
        for d in &dirs {
            pts.push(BallPoint::new(n, r, &d[..n])?);
        }
    }
    Ok(pts)
}

/// Runs `t₂`, the decomposition and the norms of both pieces on an `ε` grid.
pub fn distance_bound_check(
    f: &dyn BallFunction,
    p: f64,
    alpha: f64,
    eps_grid: &[f64],
    settings: &DistanceSettings,
) -> Result<DistanceEstimate> {
    let n = f.dimension();
    let t = (alpha + n as f64) / p;
    let beta = default_beta(p, alpha, t);
    check_t2_params(n, p, alpha, beta)?;
    if eps_grid.is_empty() {
        return domain("empty eps grid");
    }
    let mut eps: Vec<f64> = eps_grid.to_vec();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    let points = check_points(n)?;
    let mut rows = Vec::with_capacity(eps.len());
    for &e in &eps {
        let t2 = t2_integral(f, e, p, alpha, beta, settings)?;
        let dec = decompose(f, e, t, beta, settings)?;
        let f1_norm = space_norm(&dec.f1(), &SpaceSpec::bergman_sup(t), &settings.norms)?.value;
        let f2_norm = if dec.f2.is_empty() {
            0.0
        } else {
            space_norm(&dec.f2, &SpaceSpec::bergman(p, alpha), &settings.f2_norms)?.value
        };
        rows.push(DistanceRow {
            eps: e,
            value: t2.value,
            infinite: t2.infinite,
            e_inner: t2.e_inner,
            f1_norm,
            f2_norm,
            additivity: dec.additivity_error(&points),
            u_nodes: dec.f2.len(),
        });
    }
    Ok(assemble(n, p, alpha, t, beta, rows, settings))
}

fn assemble(n: usize, p: f64, alpha: f64, t: f64, beta: f64, rows: Vec<DistanceRow>, s: &DistanceSettings) -> DistanceEstimate {
    let mut cases = Vec::new();
    let monotone = rows.windows(2).all(|w| w[1].value <= w[0].value);
    cases.push(CaseResult::new("monotone_in_eps", monotone as u8 as f64, 1.0, 0.0, Comparison::AtLeast));
    let last_infinite = rows.iter().rposition(|r| r.infinite);
    let consistent = match last_infinite {
        Some(i) => rows[..=i].iter().all(|r| r.infinite),
        None => true,
    };
    cases.push(CaseResult::new("flags_consistent", consistent as u8 as f64, 1.0, 0.0, Comparison::AtLeast));
    for r in rows.iter().filter(|r| !r.infinite) {
        cases.push(
            CaseResult::new(format!("f2_finite/eps={}", r.eps), r.f2_norm, 0.0, 0.0, Comparison::Finite)
                .with_input("t2_value", r.value),
        );
    }
    let worst_add = rows.iter().fold(0.0, |a: f64, r| a.max(r.additivity));
    cases.push(CaseResult::at_most("additivity", worst_add, s.additivity_tol));
    let finite: Vec<&DistanceRow> = rows.iter().filter(|r| !r.infinite && r.u_nodes > 0 && r.f1_norm > 0.0).collect();
    let f1_constant = rows.iter().filter(|r| !r.infinite).fold(0.0, |a: f64, r| a.max(r.f1_norm / r.eps));
    let f1_slope = (finite.len() >= 3).then(|| fit_samples(finite.iter().map(|r| (r.eps, r.f1_norm)).collect()).slope);
    if let Some(slope) = f1_slope {
        cases.push(CaseResult::absolute("f1_slope", slope, 1.0, s.slope_tol));
    }
    let (lo, hi) = match last_infinite {
        Some(i) => (rows[i].eps, rows.get(i + 1).map_or(f64::INFINITY, |r| r.eps)),
        None => (0.0, rows[0].eps),
    };
    let t2 = if last_infinite.is_some() { 0.5 * (lo + hi) } else { 0.0 };
    let verdict = cases.iter().all(|c| c.pass);
    DistanceEstimate { n, p, alpha, t, beta, rows, t2, bracket: (lo, hi), f1_slope, f1_constant, cases, verdict }
}

/// Recomputes the checks of an estimate from its rows.
pub fn recheck(est: &DistanceEstimate, settings: &DistanceSettings) -> DistanceEstimate {
    assemble(est.n, est.p, est.alpha, est.t, est.beta, est.rows.clone(), settings)
}

/// `f(z) ≈ ∫ f(w) Q_m(z, w) s^m dy ds` on the half-space. `decay` declares
/// `|f(w)| ≲ |w|^{-decay}`; the tails beyond the rule's cut are closed
/// with that power law.
pub fn halfspace_reproduce(
    f: &dyn HalfSpaceFunction,
    z: &HalfSpacePoint,
    m: usize,
    decay: f64,
    settings: &HalfSpaceSettings,
) -> Result<f64> {
    let n = f.dimension();
    let kernel = BergmanKernelHalfSpace::new(n, m)?;
    let (dirs, dw) = directions(n, settings.sphere_degree)?;
    let area = if n == 1 { 2.0 } else { sphere_area(n) };
    let rule = HalfLineRule::new(settings.order, settings.scale, settings.levels_down, settings.levels_up)?;
    let (nf, mf) = (n as f64, m as f64);
    // polar coordinates about z's base point, where the kernel is radial
    let inner = |s: f64| -> f64 {
        let g = |rho: f64| -> f64 {
            dirs.iter()
                .zip(&dw)
                .map(|(d, w)| {
                    let y = [z.x[0] + rho * d[0], z.x[1] + rho * d[1], z.x[2] + rho * d[2]];
                    w * f.value(&y, s) * kernel.eval_r2(rho * rho, z.t + s)
                })
                .sum()
        };
        area * integrate_half_line(g, nf - 1.0, decay + nf + mf + 1.0, &rule).unwrap_or(f64::NAN)
    };
    let pts = rule.points();
    let mut ss: Vec<f64> = pts.iter().map(|(s, _)| *s).collect();
    ss.push(0.5 * rule.inner_cap());
    ss.push(rule.cut());
    let vals: Vec<f64> = ss.par_iter().map(|&s| inner(s)).collect();
    let table: std::collections::HashMap<u64, f64> = ss.iter().zip(&vals).map(|(s, v)| (s.to_bits(), *v)).collect();
    integrate_half_line(|s| table[&s.to_bits()], mf, decay + mf + 1.0, &rule)
}

/// Fixed product rule on the truncated half-space for the `s₂` integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S2Settings {
    pub order: usize,
    pub levels_down: usize,
    pub levels_up: usize,
    pub sphere_degree: usize,
    pub fit_points: usize,
}

impl Default for S2Settings {
    fn default() -> Self {
        S2Settings { order: 4, levels_down: 8, levels_up: 8, sphere_degree: 8, fit_points: 8 }
    }
}

impl S2Settings {
    /// Cut doubled, one more level toward `t = 0`.
    pub fn doubled(&self) -> Self {
        S2Settings { levels_down: self.levels_down + 1, levels_up: self.levels_up + 1, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S2Value {
    pub eps: f64,
    #[serde(with = "float")]
    pub value: f64,
    pub infinite: bool,
    /// Decay exponent of the inner integral at infinity.
    pub e_far: f64,
    /// Exponent of the inner integral as `t → 0`.
    pub e_near: f64,
    /// Analytic tail beyond the cut.
    #[serde(with = "float")]
    pub tail: f64,
    pub cut: f64,
    pub nodes: usize,
}

/// Result at the given rule and at the doubled truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S2Check {
    pub base: S2Value,
    pub doubled: S2Value,
    pub consistent: bool,
}

/// `∫ (∫_V |Q_m(z, w)| s^{m−λ} dy ds)^p t^α dx dt`, `λ = (α + n + 1)/p`,
/// on a truncated domain, with the verdict from fitted exponents of the
/// inner integral at infinity and near `t = 0`.
pub fn s2_integral(
    f: &dyn HalfSpaceFunction,
    eps: f64,
    p: f64,
    alpha: f64,
    m: usize,
    settings: &S2Settings,
) -> Result<S2Value> {
    let n = f.dimension();
    if !(p > 1.0 && p.is_finite()) || !(alpha > -1.0) {
        return domain(format!("s2 needs p > 1 and alpha > -1, got p = {p}, alpha = {alpha}"));
    }
    let nf = n as f64;
    let lambda = (alpha + nf + 1.0) / p;
    if !(m as f64 > (lambda - 1.0).max(alpha / p)) {
        return domain(format!("s2 needs an integer m > max(lambda - 1, alpha/p) = {}", (lambda - 1.0).max(alpha / p)));
    }
    let set = HalfSpaceSublevel::new(f, eps, lambda)?;
    let kernel = BergmanKernelHalfSpace::new(n, m)?;
    let rule = HalfLineRule::new(settings.order, 1.0, settings.levels_down, settings.levels_up)?;
    let (dirs, dw) = directions(n, settings.sphere_degree)?;
    let area = if n == 1 { 2.0 } else { sphere_area(n) };
    let line = rule.points();

    let mut cand = Vec::new();
    for &(rho, wr) in &line {
        for (d, w) in dirs.iter().zip(&dw) {
            for &(s, ws) in &line {
                cand.push((d.map(|c| c * rho), s, wr * ws * w * area * rho.powi(n as i32 - 1)));
            }
        }
    }
    let keep: Vec<bool> = cand.par_iter().map(|(y, s, _)| set.contains(y, *s)).collect();
    let inner: Vec<([f64; 3], f64, f64)> = cand
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|((y, s, w), _)| (y, s, w * s.powf(m as f64 - lambda)))
        .collect();
    let cut = rule.cut();
    if inner.is_empty() {
        return Ok(S2Value { eps, value: 0.0, infinite: false, e_far: 0.0, e_near: 0.0, tail: 0.0, cut, nodes: 0 });
    }
    let inner_at = |x: &[f64; 3], t: f64| -> f64 {
        inner
            .iter()
            .map(|(y, s, w)| {
                let xi2: f64 = (0..3).map(|i| (x[i] - y[i]).powi(2)).sum();
                w * kernel.eval_r2(xi2, t + s).abs()
            })
            .sum()
    };

    let outer_dirs: Vec<([f64; 3], f64)> = if f.radial() {
        vec![([1.0, 0.0, 0.0], area)]
    } else {
        dirs.iter().zip(&dw).map(|(d, w)| (*d, w * area)).collect()
    };
    let mut outer = Vec::new();
    for &(rho, wr) in &line {
        for (d, wd) in &outer_dirs {
            for &(t, wt) in &line {
                outer.push((d.map(|c| c * rho), t, wr * wt * wd * rho.powi(n as i32 - 1) * t.powf(alpha)));
            }
        }
    }
    let terms: Vec<f64> = outer.par_iter().map(|(x, t, w)| w * inner_at(x, *t).powf(p)).collect();
    let grid: f64 = terms.iter().sum();

    // decay at infinity along the t axis and the diagonal; gap = 1/|z|
    let far_gaps = geometric_gaps(1.0 / cut, 1.0 / (1000.0 * cut), settings.fit_points.max(8));
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut e_far = f64::INFINITY;
    let mut amp: f64 = 0.0;
    for (dx, dt) in [(0.0, 1.0), (s2, s2)] {
        let fit = fit_decay_exponent(|g| inner_at(&[dx / g, 0.0, 0.0], dt / g), &far_gaps)?;
        e_far = e_far.min(fit.slope);
        amp = amp.max(fit.intercept.exp());
    }
    let near_gaps = geometric_gaps(1e-1, 5e-4, settings.fit_points.max(8));
    let near = fit_decay_exponent(|g| inner_at(&[0.0; 3], g), &near_gaps)?;
    let e_near = near.slope;
    let infinite = !(p * e_far > nf + 1.0 + alpha) || !(p * e_near + alpha > -1.0);
    let tail = if infinite {
        f64::INFINITY
    } else {
        // ∫_{|z| > cut} (A |z|^{-e})^p t^α dz
        let h = 0.5 * nf * std::f64::consts::PI.ln() + ln_gamma(0.5 * (alpha + 1.0)) - ln_gamma(0.5 * (alpha + nf + 1.0));
        let k = p * e_far - nf - 1.0 - alpha;
        amp.powf(p) * h.exp() * cut.powf(-k) / k
    };
    Ok(S2Value {
        eps,
        value: if infinite { f64::INFINITY } else { grid + tail },
        infinite,
        e_far,
        e_near,
        tail,
        cut,
        nodes: inner.len(),
    })
}

/// [`s2_integral`] at the given truncation and with the cut doubled.
pub fn s2_check(
    f: &dyn HalfSpaceFunction,
    eps: f64,
    p: f64,
    alpha: f64,
    m: usize,
    settings: &S2Settings,
) -> Result<S2Check> {
    let base = s2_integral(f, eps, p, alpha, m, settings)?;
    let doubled = s2_integral(f, eps, p, alpha, m, &settings.doubled())?;
    Ok(S2Check { base, doubled, consistent: base.infinite == doubled.infinite })
}
