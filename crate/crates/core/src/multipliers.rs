//! Coefficient multipliers: the functionals `N_s(g)` and `M_t(g)`, the
//! operator `M_c f = c ∗ f`, and bounded-ratio experiments for the four
//! multiplier characterizations.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::harmonic_fn::{convolve, lambda_factor, CoefficientField, HarmonicFunction};
use crate::kernels::{extremal_fmy, BallPoint, ExtremalFunction};
use crate::norms::{space_norm, space_norm_of, Family, NormSettings, SpaceSpec};
use crate::quadrature::{fit_samples, SphereRule};
use crate::report::{float, CaseResult, Comparison, VerificationReport};
use crate::spharm::HarmonicBasis;

/// `g_c(r x') = Σ r^k Σ_j c_k^j Y_j^{(k)}(x')`.
pub fn associated_g(c: &CoefficientField) -> Result<HarmonicFunction> {
    HarmonicFunction::new(c.clone())
}

/// Radii `ρ` at which the suprema are sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoGrid {
    pub rho: Vec<f64>,
}

impl RhoGrid {
    /// `ρ = 1 − 2^{−j/steps}` for `0 ≤ j ≤ levels · steps`.
    pub fn dyadic(levels: usize, steps: usize) -> Self {
        let rho = (0..=levels * steps).map(|j| 1.0 - (-(j as f64) / steps as f64).exp2()).collect();
        RhoGrid { rho }
    }

    /// Twice as many points on the same range.
    pub fn refined(&self) -> Self {
        let mut rho = Vec::with_capacity(2 * self.rho.len());
        for w in self.rho.windows(2) {
            rho.push(w[0]);
            // geometric midpoint in 1 − ρ
            rho.push(1.0 - ((1.0 - w[0]) * (1.0 - w[1])).sqrt());
        }
        rho.extend(self.rho.last());
        RhoGrid { rho }
    }
}

impl Default for RhoGrid {
    fn default() -> Self {
        Self::dyadic(10, 1)
    }
}

/// Sphere rules for the `x'` integral and the `y'` supremum; `None`
/// picks `4K + 24` and `2K + 4` from the degree `K` of `g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalGrid {
    pub rho: RhoGrid,
    pub x_degree: Option<usize>,
    pub y_degree: Option<usize>,
}

impl Default for FunctionalGrid {
    fn default() -> Self {
        FunctionalGrid { rho: RhoGrid::default(), x_degree: None, y_degree: None }
    }
}

impl FunctionalGrid {
    pub fn refined(&self) -> Self {
        FunctionalGrid { rho: self.rho.refined(), ..self.clone() }
    }
}

/// A grid supremum with the point where it is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    #[serde(with = "float")]
    pub value: f64,
    pub rho: f64,
    pub y: [f64; 3],
    pub rho_points: usize,
    pub y_points: usize,
    pub x_points: usize,
}

/// `Λ_{m+1}(g ∗ P_{x'})(ρ y') = Σ_k ρ^k λ_k Σ_j c_k^j Y_j^{(k)}(x') Y_j^{(k)}(y')`
/// tabulated on the `x'` nodes of a sphere rule.
struct LambdaTable {
    basis: HarmonicBasis,
    degrees: Vec<usize>,
    coeffs: Vec<f64>,
    x_rule: SphereRule,
    x_basis: Vec<Vec<f64>>,
}

impl LambdaTable {
    fn new(g: &HarmonicFunction, m: f64, x_degree: usize) -> Result<Self> {
        let n = g.coefficients().dimension();
        let basis = g.basis().clone();
        let mut degrees = Vec::with_capacity(basis.len());
        let mut coeffs = Vec::with_capacity(basis.len());
        for (k, row) in g.coefficients().rows().iter().enumerate() {
            let lam = lambda_factor(n, k, m + 1.0);
            for c in row {
                degrees.push(k);
                coeffs.push(lam * c);
            }
        }
        let x_rule = SphereRule::new(n, x_degree)?;
        let x_basis = x_rule.nodes().iter().map(|x| basis.eval(x)).collect::<Result<_>>()?;
        Ok(LambdaTable { basis, degrees, coeffs, x_rule, x_basis })
    }

    /// Values at every `x'` node.
    fn slice(&self, rho: f64, y: &[f64; 3]) -> Vec<f64> {
        let mut w = self.basis.eval(y).unwrap_or_else(|_| vec![0.0; self.coeffs.len()]);
        let mut powers = Vec::with_capacity(self.degrees.last().map_or(1, |k| k + 1));
        let mut t = 1.0;
        for _ in 0..=self.degrees.last().copied().unwrap_or(0) {
            powers.push(t);
            t *= rho;
        }
        for ((wi, c), k) in w.iter_mut().zip(&self.coeffs).zip(&self.degrees) {
            *wi *= c * powers[*k];
        }
        self.x_basis.iter().map(|yx| yx.iter().zip(&w).map(|(a, b)| a * b).sum()).collect()
    }

    /// `(∫_S |·|^s dx')^{1/s}`, or the node maximum for `s = ∞`.
    fn mean(&self, rho: f64, y: &[f64; 3], s: f64) -> f64 {
        let vals = self.slice(rho, y);
        if s.is_infinite() {
            return vals.iter().fold(0.0, |a: f64, v| a.max(v.abs()));
        }
        let sum: f64 = vals.iter().zip(self.x_rule.weights()).map(|(v, w)| w * v.abs().powf(s)).sum();
        sum.powf(1.0 / s)
    }
}

fn grid_sup(g: &HarmonicFunction, m: f64, s: f64, exponent: f64, grid: &FunctionalGrid) -> Result<FunctionalValue> {
    let n = g.coefficients().dimension();
    let k = g.degree();
    let table = LambdaTable::new(g, m, grid.x_degree.unwrap_or(4 * k + 24))?;
    let y_rule = SphereRule::new(n, grid.y_degree.unwrap_or(2 * k + 4))?;
    let tasks: Vec<(f64, usize)> =
        grid.rho.rho.iter().flat_map(|&r| (0..y_rule.len()).map(move |i| (r, i))).collect();
    let values: Vec<f64> = tasks
        .par_iter()
        .map(|&(rho, i)| (1.0 - rho).powf(exponent) * table.mean(rho, &y_rule.nodes()[i], s))
        .collect();
    let mut best = (0.0, grid.rho.rho.first().copied().unwrap_or(0.0), y_rule.nodes()[0]);
    for (v, &(rho, i)) in values.iter().zip(&tasks) {
        if !v.is_finite() {
            return Err(Error::Evaluation { node: rho, value: *v });
        }
        if *v > best.0 {
            best = (*v, rho, y_rule.nodes()[i]);
        }
    }
    Ok(FunctionalValue {
        value: best.0,
        rho: best.1,
        y: best.2,
        rho_points: grid.rho.rho.len(),
        y_points: y_rule.len(),
        x_points: table.x_rule.len(),
    })
}

/// `N_s(g) = sup_ρ sup_{y'} (1 − ρ)^{m+1−α+β} ‖Λ_{m+1}(g ∗ P_{x'})(ρ y')‖_{L^s(dx')}`
/// over the grid.
pub fn ns_functional(
    g: &HarmonicFunction,
    s: f64,
    m: f64,
    alpha: f64,
    beta: f64,
    grid: &FunctionalGrid,
) -> Result<FunctionalValue> {
    if !(s >= 1.0) {
        return domain(format!("N_s needs s in [1, inf], got {s}"));
    }
    if !(m > alpha - 1.0) {
        return domain(format!("N_s needs m > alpha - 1, got m = {m}, alpha = {alpha}"));
    }
    grid_sup(g, m, s, m + 1.0 - alpha + beta, grid)
}

/// `M_t(g) = sup (1 − ρ)^t |Λ_{m+1}(g ∗ P_{x'})(ρ y')|` over ρ, `x'`, `y'`.
pub fn mt_functional(g: &HarmonicFunction, m: f64, t: f64, grid: &FunctionalGrid) -> Result<FunctionalValue> {
    if m.fract() != 0.0 || m < 0.0 {
        return domain(format!("M_t needs a non-negative integer m, got {m}"));
    }
    grid_sup(g, m, f64::INFINITY, t, grid)
}

/// Source and target spaces of a multiplier, the sequence and the
/// derivative order `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierProblem {
    pub source: SpaceSpec,
    pub target: SpaceSpec,
    pub c: CoefficientField,
    pub m: f64,
}

/// Which characterization a problem falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremShape {
    /// `B^{p,1}_α → B^{q,1}_β`, `1 < p ≤ q ≤ ∞`, by `N_1`.
    MixedLarge,
    /// `B^{p,1}_α → B^{q,1}_β`, `0 < p ≤ 1`, `p ≤ q ≤ ∞`, by `N_1`.
    MixedSmall,
    /// `B^{p,1}_α → H^s_β`, `0 < p ≤ 1`, `s ≥ 1`, `β ≥ 0`, by `N_s`.
    MixedToHardy,
    /// `H^1_α → H^p_β`, `α ≥ 0`, `β > 0`, `1 ≤ p ≤ ∞`, by `N_p`.
    HardyToHardy,
}

impl MultiplierProblem {
    pub fn shape(&self) -> Result<TheoremShape> {
        self.source.validate()?;
        self.target.validate()?;
        if !(self.m > self.source.alpha - 1.0) {
            return domain(format!("need m > alpha - 1, got m = {}, alpha = {}", self.m, self.source.alpha));
        }
        let (s, t) = (&self.source, &self.target);
        let unsupported = || Error::Unsupported(format!("no multiplier characterization for {s:?} -> {t:?}"));
        match (s.family, t.family) {
            (Family::B, Family::B) if s.q == 1.0 && t.q == 1.0 && s.p <= t.p => {
                Ok(if s.p > 1.0 { TheoremShape::MixedLarge } else { TheoremShape::MixedSmall })
            }
            (Family::B, Family::H) if s.q == 1.0 && s.p <= 1.0 && t.p >= 1.0 => Ok(TheoremShape::MixedToHardy),
            (Family::H, Family::H) if s.p == 1.0 && t.p >= 1.0 && t.alpha > 0.0 => Ok(TheoremShape::HardyToHardy),
            _ => Err(unsupported()),
        }
    }

    /// Exponent `s` of the characterizing functional.
    pub fn functional_exponent(&self) -> Result<f64> {
        Ok(match self.shape()? {
            TheoremShape::MixedLarge | TheoremShape::MixedSmall => 1.0,
            TheoremShape::MixedToHardy | TheoremShape::HardyToHardy => self.target.p,
        })
    }
}

/// `M_c f = c ∗ f`.
pub fn apply_multiplier(prob: &MultiplierProblem, f: &HarmonicFunction) -> Result<HarmonicFunction> {
    convolve(&prob.c, f)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSettings {
    pub grid: FunctionalGrid,
    pub norms: NormSettings,
    /// Allowed ratio between operator norms and the functional.
    pub c_tol: f64,
    /// `|y|` for the probes `f_{m,y}`.
    pub probe_radii: Vec<f64>,
    /// Largest admissible growth exponent of the probe sequence.
    pub slope_tol: f64,
}

impl Default for MultiplierSettings {
    fn default() -> Self {
        MultiplierSettings {
            grid: FunctionalGrid::default(),
            norms: NormSettings { estimate_error: false, ..NormSettings::default() },
            c_tol: 10.0,
            probe_radii: vec![0.5, 0.7, 0.9, 0.95],
            slope_tol: 0.05,
        }
    }
}

/// One probe `f_{m,y}` with `y = |y| y'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub radius: f64,
    /// `(1 − |y|)^{m+1−α+β} ‖Λ_{m+1}(g ∗ P_{x'})(|y|² y')‖_{L^s(dx')}`.
    #[serde(with = "float")]
    pub probe: f64,
    /// `‖M_c f_y‖_Y / ‖f_y‖_X`.
    #[serde(with = "float")]
    pub operator_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierCertificate {
    pub shape: TheoremShape,
    pub s: f64,
    pub functional: FunctionalValue,
    pub rho_grid: Vec<f64>,
    /// The functional on the refined ρ grid.
    pub functional_refined: FunctionalValue,
    /// `‖c ∗ f‖_Y / ‖f‖_X` per family member.
    #[serde(with = "float_vec")]
    pub ratios: Vec<f64>,
    #[serde(with = "float")]
    pub ratio_max: f64,
    /// `ratio_max / N`, zero when both vanish.
    #[serde(with = "float")]
    pub constant: f64,
    pub probes: Vec<ProbeSample>,
    pub probe_slope: f64,
    pub ratio_slope: f64,
    /// `N / max probe`.
    #[serde(with = "float")]
    pub tracking: f64,
    pub c_tol: f64,
    pub slope_tol: f64,
    pub sufficiency: bool,
    pub necessity: bool,
    pub verdict: bool,
}

impl MultiplierCertificate {
    /// Recomputes both checks from the recorded numbers.
    pub fn recomputed_verdict(&self) -> bool {
        let (suff, nec) = checks(self);
        suff && nec
    }

    pub fn to_cases(&self, prefix: &str) -> Vec<CaseResult> {
        let n = self.functional.value;
        vec![
            CaseResult::at_most(format!("{prefix}/sufficiency"), self.ratio_max, self.c_tol * n)
                .with_input("functional", n)
                .with_input("c_tol", self.c_tol),
            CaseResult::new(format!("{prefix}/probe_slope"), self.probe_slope, -self.slope_tol, 0.0, Comparison::AtLeast)
                .with_input("ratio_slope", self.ratio_slope),
            CaseResult::at_most(format!("{prefix}/tracking"), self.tracking, self.c_tol),
        ]
    }
}

fn checks(c: &MultiplierCertificate) -> (bool, bool) {
    let sufficiency = c.ratio_max <= c.c_tol * c.functional.value;
    // bounded operator ratios must come with bounded probes
    let ratios_bounded = c.ratio_slope >= -c.slope_tol;
    let probes_bounded = c.probe_slope >= -c.slope_tol;
    let necessity = (!ratios_bounded || probes_bounded) && c.tracking <= c.c_tol;
    (sufficiency, necessity)
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 && den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Slope of `log v` against `log(1 − |y|)`; zero for identically zero data.
fn probe_slope(points: &[(f64, f64)]) -> f64 {
    if points.iter().all(|(_, v)| *v == 0.0) {
        return 0.0;
    }
    fit_samples(points.iter().map(|&(r, v)| (1.0 - r, v.max(f64::MIN_POSITIVE))).collect()).slope
}

/// Runs the sufficiency and necessity experiments for one problem and one
/// test family.
pub fn verify_multiplier_theorem(
    prob: &MultiplierProblem,
    family: &[HarmonicFunction],
    settings: &MultiplierSettings,
) -> Result<MultiplierCertificate> {
    let shape = prob.shape()?;
    if family.is_empty() {
        return domain("test family is empty");
    }
    let n = prob.c.dimension();
    if family.iter().any(|f| f.coefficients().dimension() != n) {
        return domain("family and multiplier live in different dimensions");
    }
    let s = prob.functional_exponent()?;
    let (alpha, beta, m) = (prob.source.alpha, prob.target.alpha, prob.m);
    let g = associated_g(&prob.c)?;
    let functional = ns_functional(&g, s, m, alpha, beta, &settings.grid)?;
    let functional_refined = ns_functional(&g, s, m, alpha, beta, &settings.grid.refined())?;

    let ratios: Vec<f64> = family
        .par_iter()
        .map(|f| -> Result<f64> {
            let h = apply_multiplier(prob, f)?;
            let num = space_norm_of(&h, &prob.target, &settings.norms)?.value;
            let den = space_norm_of(f, &prob.source, &settings.norms)?.value;
            Ok(ratio(num, den))
        })
        .collect::<Result<_>>()?;
    let ratio_max = ratios.iter().fold(0.0, |a: f64, &r| a.max(r));

    let exponent = m + 1.0 - alpha + beta;
    let table = LambdaTable::new(&g, m, settings.grid.x_degree.unwrap_or(4 * g.degree() + 24))?;
    let dir = functional.y;
    let probes: Vec<ProbeSample> = settings
        .probe_radii
        .par_iter()
        .map(|&radius| -> Result<ProbeSample> {
            let probe = (1.0 - radius).powf(exponent) * table.mean(radius * radius, &dir, s);
            let y = BallPoint::new(n, radius, &dir[..n])?;
            let h = apply_multiplier(prob, &extremal_fmy(m, &y, prob.c.degree())?)?;
            let num = space_norm_of(&h, &prob.target, &settings.norms)?.value;
            let den = space_norm(&ExtremalFunction::new(m, y)?, &prob.source, &settings.norms)?.value;
            Ok(ProbeSample { radius, probe, operator_ratio: ratio(num, den) })
        })
        .collect::<Result<_>>()?;
    let probe_max = probes.iter().fold(0.0, |a: f64, p| a.max(p.probe));
    let mut cert = MultiplierCertificate {
        shape,
        s,
        rho_grid: settings.grid.rho.rho.clone(),
        constant: ratio(ratio_max, functional.value),
        functional,
        functional_refined,
        ratios,
        ratio_max,
        probe_slope: probe_slope(&probes.iter().map(|p| (p.radius, p.probe)).collect::<Vec<_>>()),
        ratio_slope: probe_slope(&probes.iter().map(|p| (p.radius, p.operator_ratio)).collect::<Vec<_>>()),
        tracking: 0.0,
        probes,
        c_tol: settings.c_tol,
        slope_tol: settings.slope_tol,
        sufficiency: false,
        necessity: false,
        verdict: false,
    };
    cert.tracking = ratio(cert.functional.value, probe_max);
    let (sufficiency, necessity) = checks(&cert);
    cert.sufficiency = sufficiency;
    cert.necessity = necessity;
    cert.verdict = sufficiency && necessity;
    Ok(cert)
}

/// Empirical constants `R / N` over several families and the refined grid;
/// they must agree within `spread` (a factor).
pub fn multiplier_stability(
    prob: &MultiplierProblem,
    families: &[Vec<HarmonicFunction>],
    settings: &MultiplierSettings,
    spread: f64,
    id: &str,
) -> Result<(Vec<MultiplierCertificate>, Vec<CaseResult>)> {
    let certs = families
        .iter()
        .map(|f| verify_multiplier_theorem(prob, f, settings))
        .collect::<Result<Vec<_>>>()?;
    let mut cases = Vec::new();
    for (i, c) in certs.iter().enumerate() {
        cases.extend(c.to_cases(&format!("{id}/family{i}")));
    }
    let constants: Vec<f64> = certs.iter().map(|c| c.constant).collect();
    let (lo, hi) = constants.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
    let family_spread = if hi == 0.0 { 1.0 } else { hi / lo };
    cases.push(
        CaseResult::at_most(format!("{id}/family_spread"), family_spread, spread).with_input("constants", &constants),
    );
    let c0 = &certs[0];
    let refined = ratio(c0.ratio_max, c0.functional_refined.value);
    let grid_spread = if c0.constant == 0.0 && refined == 0.0 { 1.0 } else { (c0.constant / refined).max(refined / c0.constant) };
    cases.push(
        CaseResult::at_most(format!("{id}/grid_spread"), grid_spread, spread)
            .with_input("functional", c0.functional.value)
            .with_input("functional_refined", c0.functional_refined.value),
    );
    Ok((certs, cases))
}

/// Young-type bound `‖c ∗ f‖_{H^r_β} ≤ C ‖g‖_{H^p_γ} ‖f‖_{H^q_α}` over a
/// family; every ratio must be finite and the largest at most `bound`.
#[allow(clippy::too_many_arguments)]
pub fn verify_young_proposition(
    g: &HarmonicFunction,
    exponents: (f64, f64, f64),
    weights: (f64, f64, f64),
    family: &[HarmonicFunction],
    bound: f64,
    settings: &NormSettings,
) -> Result<VerificationReport> {
    let (p, q, r) = exponents;
    let (alpha, beta, gamma) = weights;
    let inv = |e: f64| if e.is_infinite() { 0.0 } else { 1.0 / e };
    if [p, q, r].iter().any(|e| !(*e >= 1.0)) {
        return domain("Young exponents must lie in [1, inf]");
    }
    if (inv(q) + inv(p) - 1.0 - inv(r)).abs() > 1e-12 {
        return domain(format!("need 1/q + 1/p = 1 + 1/r, got p = {p}, q = {q}, r = {r}"));
    }
    if [alpha, beta, gamma].iter().any(|w| *w < 0.0) || (alpha + gamma - beta).abs() > 1e-12 {
        return domain(format!("need alpha + gamma = beta with non-negative weights, got {alpha}, {beta}, {gamma}"));
    }
    let gn = space_norm_of(g, &SpaceSpec::hardy(p, gamma), settings)?.value;
    let mut report = VerificationReport::new("young", "convolution bound between weighted Hardy spaces", 0);
    let rows: Vec<(f64, f64, f64)> = family
        .par_iter()
        .map(|f| -> Result<(f64, f64, f64)> {
            let h = convolve(g.coefficients(), f)?;
            let lhs = space_norm_of(&h, &SpaceSpec::hardy(r, beta), settings)?.value;
            let fn_ = space_norm_of(f, &SpaceSpec::hardy(q, alpha), settings)?.value;
            Ok((lhs, fn_, ratio(lhs, gn * fn_)))
        })
        .collect::<Result<_>>()?;
    let mut largest: f64 = 0.0;
    for (i, (lhs, fnorm, rt)) in rows.iter().enumerate() {
        largest = largest.max(*rt);
        report.push(
            CaseResult::new(format!("member{i}"), *rt, bound, 0.0, Comparison::Finite)
                .with_input("lhs", lhs)
                .with_input("g_norm", gn)
                .with_input("f_norm", fnorm),
        );
    }
    report.push(CaseResult::at_most("max_ratio", largest, bound));
    Ok(report)
}

/// Decay profile `φ(k)` of random coefficient fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayProfile {
    /// `(k + 1)^{−a}`.
    Power { a: f64 },
    /// `e^{−b k}`.
    Exponential { b: f64 },
}

impl DecayProfile {
    pub fn weight(&self, k: usize) -> f64 {
        match *self {
            DecayProfile::Power { a } => (k as f64 + 1.0).powf(-a),
            DecayProfile::Exponential { b } => (-b * k as f64).exp(),
        }
    }
}

/// `c_k^j = φ(k) u_k^j` with `u` uniform on `[−1, 1]`.
pub fn random_field(n: usize, degree: usize, profile: DecayProfile, seed: u64) -> Result<CoefficientField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CoefficientField::from_fn(n, degree, |k, _| profile.weight(k) * rng.random_range(-1.0..=1.0))
}

/// `count` random harmonic functions; member `i` uses seed `seed + i`.
pub fn random_family(
    n: usize,
    degree: usize,
    count: usize,
    profile: DecayProfile,
    seed: u64,
) -> Result<Vec<HarmonicFunction>> {
    (0..count as u64).map(|i| HarmonicFunction::new(random_field(n, degree, profile, seed.wrapping_add(i))?)).collect()
}

mod float_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct F(#[serde(with = "crate::report::float")] f64);

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| F(*x)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Ok(Vec::<F>::deserialize(d)?.into_iter().map(|F(x)| x).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma_ratio;
    use approx::assert_relative_eq;

    #[test]
    fn constant_g_functional() {
        let g = HarmonicFunction::constant(2, -3.0).unwrap();
        let v = ns_functional(&g, 1.0, 1.0, 1.0, 1.0, &FunctionalGrid::default()).unwrap();
        assert_relative_eq!(v.value, 3.0 * gamma_ratio(1.0, 2.0), max_relative = 1e-13);
        assert_eq!(v.rho, 0.0);
        let t = mt_functional(&g, 1.0, 0.5, &FunctionalGrid::default()).unwrap();
        assert_relative_eq!(t.value, 3.0 * gamma_ratio(1.0, 2.0), max_relative = 1e-13);
    }

    #[test]
    fn shapes() {
        let c = CoefficientField::constant(2, 3, 1.0).unwrap();
        let prob = |source, target| MultiplierProblem { source, target, c: c.clone(), m: 1.0 };
        let b = |p| SpaceSpec::mixed(p, 1.0, 1.0);
        assert_eq!(prob(b(2.0), b(3.0)).shape().unwrap(), TheoremShape::MixedLarge);
        assert_eq!(prob(b(0.5), b(1.0)).shape().unwrap(), TheoremShape::MixedSmall);
        assert_eq!(prob(b(1.0), SpaceSpec::hardy(2.0, 0.0)).shape().unwrap(), TheoremShape::MixedToHardy);
        let hh = prob(SpaceSpec::hardy(1.0, 0.5), SpaceSpec::hardy(f64::INFINITY, 1.0));
        assert_eq!(hh.shape().unwrap(), TheoremShape::HardyToHardy);
        assert!(matches!(prob(b(3.0), b(2.0)).shape(), Err(Error::Unsupported(_))));
        assert!(matches!(prob(SpaceSpec::bergman(2.0, 0.0), b(2.0)).shape(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn grids() {
        let g = RhoGrid::default();
        assert_eq!(g.rho.len(), 11);
        assert_eq!(g.rho[10], 1.0 - 1.0 / 1024.0);
        let r = g.refined();
        assert_eq!(r.rho.len(), 21);
        for (a, b) in r.rho.iter().zip(&RhoGrid::dyadic(10, 2).rho) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn random_fields_are_seeded() {
        let p = DecayProfile::Power { a: 2.0 };
        assert_eq!(random_field(3, 4, p, 9).unwrap(), random_field(3, 4, p, 9).unwrap());
        assert_ne!(random_field(3, 4, p, 9).unwrap(), random_field(3, 4, p, 10).unwrap());
    }
}
