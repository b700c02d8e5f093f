//! Regular curves on the unit sphere: construction (helices, imported
//! samples), arclength reparametrization, Frenet data, Bishop (relatively
//! parallel) frames by ODE integration, and period / antiperiod detection.

use std::sync::Arc;

use nalgebra::DVector;

use crate::ambient::{mgs, unit, wedge_raw};
use crate::config::Tolerances;
use crate::numerics::{golden_min, Jet, UniformSpline};
use crate::{Error, Result};

/// Resolution floor for sampled curves.
pub const MIN_SAMPLES: usize = 64;

/// Step used by the position-only differentiation stencils in [`frenet_at`].
/// Chosen so the O(h⁴) third-derivative truncation and the rounding term
/// balance near 1e-8 for trigonometric-scale curves.
const FRENET_STEP: f64 = 5e-3;

/// Provides coordinate jets (value + four derivatives) at any parameter.
pub trait CurveSource: Send + Sync {
    fn dim(&self) -> usize;
    fn jet(&self, s: f64) -> Vec<Jet>;
    /// Whether the source is defined for every real parameter (analytic or
    /// periodic data) rather than only on its sampled range.
    fn extendable(&self) -> bool;
    /// For reparametrized sources: the underlying parameter at `s`.
    fn base_param(&self, _s: f64) -> Option<f64> {
        None
    }
}

/// Closed-form curve given by a jet-valued closure.
pub struct AnalyticSource {
    pub dim: usize,
    pub f: Box<dyn Fn(f64) -> Vec<Jet> + Send + Sync>,
}

impl CurveSource for AnalyticSource {
    fn dim(&self) -> usize {
        self.dim
    }
    fn jet(&self, s: f64) -> Vec<Jet> {
        (self.f)(s)
    }
    fn extendable(&self) -> bool {
        true
    }
}

/// Curve interpolated from uniform samples, one cubic spline per coordinate.
pub struct SplineSource {
    splines: Vec<UniformSpline>,
    periodic: bool,
}

impl CurveSource for SplineSource {
    fn dim(&self) -> usize {
        self.splines.len()
    }
    fn jet(&self, s: f64) -> Vec<Jet> {
        self.splines.iter().map(|sp| sp.jet(s)).collect()
    }
    fn extendable(&self) -> bool {
        self.periodic
    }
}

/// Arclength reparametrization of another source.
struct ArclengthSource {
    base: Arc<dyn CurveSource>,
    /// Cumulative arclength at `t_i = i·dt` over the base domain.
    table: Vec<f64>,
    dt: f64,
    total: f64,
    base_domain: f64,
    extend: bool,
}

impl ArclengthSource {
    fn t_of_s(&self, s: f64) -> f64 {
        // Open sources extrapolate past the table (the Newton target keeps
        // the raw s); periodic sources wrap.
        let s_local = if self.extend { s.rem_euclid(self.total) } else { s };
        let wraps = if self.extend { ((s - s_local) / self.total).round() } else { 0.0 };
        // Binary search on the monotone table, then Newton on ∫|γ'| = s.
        let lookup = s_local.clamp(0.0, self.total);
        let idx = self
            .table
            .partition_point(|&a| a < lookup)
            .clamp(1, self.table.len() - 1);
        let frac = (lookup - self.table[idx - 1])
            / (self.table[idx] - self.table[idx - 1]).max(1e-300);
        let mut t = (idx as f64 - 1.0 + frac) * self.dt;
        let mut acc = self.table[idx - 1]
            + segment_len(&*self.base, (idx - 1) as f64 * self.dt, t);
        for _ in 0..8 {
            let v = speed(&*self.base, t);
            let err = acc - s_local;
            if err.abs() < 1e-14 {
                break;
            }
            let dtn = -err / v;
            acc += segment_len(&*self.base, t, t + dtn);
            t += dtn;
        }
        t + wraps * self.base_domain
    }
}

fn speed(src: &dyn CurveSource, t: f64) -> f64 {
    src.jet(t).iter().map(|j| j.d[1] * j.d[1]).sum::<f64>().sqrt()
}

/// Arclength of the base curve between nearby parameters (3-point Gauss).
fn segment_len(src: &dyn CurveSource, a: f64, b: f64) -> f64 {
    const X: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const W: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * X.iter().zip(W).map(|(x, w)| w * speed(src, mid + half * x)).sum::<f64>()
}

impl CurveSource for ArclengthSource {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn jet(&self, s: f64) -> Vec<Jet> {
        let t = self.t_of_s(s);
        let base = self.base.jet(t);
        // Speed and its first three t-derivatives from the base jets.
        let shifted: Vec<Jet> = base
            .iter()
            .map(|j| Jet { d: [j.d[1], j.d[2], j.d[3], j.d[4], 0.0] })
            .collect();
        let mut sq = Jet::constant(0.0);
        for g in &shifted {
            sq = sq + *g * *g;
        }
        let v = sq.sqrt();
        let t_jet = Jet::invert_speed(t, [v.d[0], v.d[1], v.d[2], v.d[3]]);
        base.iter()
            .map(|j| crate::numerics::rebase_jet(j, t_jet))
            .collect()
    }
    fn extendable(&self) -> bool {
        self.extend
    }
    fn base_param(&self, s: f64) -> Option<f64> {
        Some(self.t_of_s(s))
    }
}

/// Unit tangent indicatrix of an arclength-parametrized curve; derivative
/// order drops by one (the top jet slot is not meaningful).
struct TangentSource {
    base: Arc<dyn CurveSource>,
}

impl CurveSource for TangentSource {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn jet(&self, s: f64) -> Vec<Jet> {
        self.base
            .jet(s)
            .iter()
            .map(|j| Jet { d: [j.d[1], j.d[2], j.d[3], j.d[4], 0.0] })
            .collect()
    }
    fn extendable(&self) -> bool {
        self.base.extendable()
    }
}

// ---------------------------------------------------------------------------
// Period metadata
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PeriodKind {
    Periodic,
    Antiperiodic,
    Open,
}

/// Detected closure behaviour. An antiperiodic curve (γ(s + L/2) = −γ(s))
/// is stored with its period equal to twice the antiperiod.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PeriodInfo {
    pub kind: PeriodKind,
    pub period: Option<f64>,
    pub antiperiod: Option<f64>,
}

impl PeriodInfo {
    pub fn open() -> Self {
        PeriodInfo { kind: PeriodKind::Open, period: None, antiperiod: None }
    }
    pub fn is_closed(&self) -> bool {
        self.kind != PeriodKind::Open
    }
}

// ---------------------------------------------------------------------------
// SphericalCurve
// ---------------------------------------------------------------------------

/// An arclength-flagged sampled curve on `S^{n+1}` with closure metadata.
#[derive(Clone)]
pub struct SphericalCurve {
    source: Arc<dyn CurveSource>,
    /// Sampled parameter range `[0, domain)`.
    pub domain: f64,
    pub samples: usize,
    pub is_arclength: bool,
    pub period_info: Option<PeriodInfo>,
}

impl std::fmt::Debug for SphericalCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SphericalCurve")
            .field("dim", &self.dim())
            .field("domain", &self.domain)
            .field("samples", &self.samples)
            .field("is_arclength", &self.is_arclength)
            .field("period_info", &self.period_info)
            .finish()
    }
}

impl SphericalCurve {
    pub fn from_analytic(
        dim: usize,
        domain: f64,
        samples: usize,
        is_arclength: bool,
        f: impl Fn(f64) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        SphericalCurve {
            source: Arc::new(AnalyticSource { dim, f: Box::new(f) }),
            domain,
            samples: samples.max(MIN_SAMPLES),
            is_arclength,
            period_info: None,
        }
    }

    /// Interpolate uniform samples over `[0, domain)`; `closed` selects the
    /// periodic spline closure.
    pub fn from_samples(points: &[DVector<f64>], domain: f64, closed: bool) -> Result<Self> {
        if points.len() < MIN_SAMPLES {
            return Err(Error::ResolutionTooLow { got: points.len(), floor: MIN_SAMPLES });
        }
        let dim = points[0].len();
        let h = domain / points.len() as f64;
        let mut splines = Vec::with_capacity(dim);
        for k in 0..dim {
            let y: Vec<f64> = points.iter().map(|p| p[k]).collect();
            splines.push(if closed {
                UniformSpline::periodic(0.0, h, y)
            } else {
                UniformSpline::open(0.0, h, y)
            });
        }
        Ok(SphericalCurve {
            source: Arc::new(SplineSource { splines, periodic: closed }),
            domain,
            samples: points.len(),
            is_arclength: false,
            period_info: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    pub fn jets(&self, s: f64) -> Vec<Jet> {
        self.source.jet(s)
    }

    pub fn position(&self, s: f64) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.jets(s).iter().map(|j| j.d[0]))
    }

    pub fn velocity(&self, s: f64) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.jets(s).iter().map(|j| j.d[1]))
    }

    pub fn acceleration(&self, s: f64) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.jets(s).iter().map(|j| j.d[2]))
    }

    pub fn sample_grid(&self) -> Vec<f64> {
        let h = self.domain / self.samples as f64;
        (0..self.samples).map(|i| i as f64 * h).collect()
    }

    pub fn sample_positions(&self) -> Vec<DVector<f64>> {
        self.sample_grid().iter().map(|&s| self.position(s)).collect()
    }

    pub fn extendable(&self) -> bool {
        self.source.extendable()
    }

    /// For arclength-reparametrized curves, the original parameter at `s`.
    pub fn base_param(&self, s: f64) -> Option<f64> {
        self.source.base_param(s)
    }

    /// Largest deviation of `|γ|` from 1 over the samples.
    pub fn sphere_defect(&self) -> f64 {
        self.sample_positions()
            .iter()
            .map(|p| (p.norm_squared() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest deviation of `|γ'|` from 1 over the samples.
    pub fn speed_defect(&self) -> f64 {
        self.sample_grid()
            .iter()
            .map(|&s| (self.velocity(s).norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Run period detection and snap the sampled domain to one full period
    /// for closed curves.
    pub fn classified(mut self, tol: &Tolerances) -> Self {
        let info = classify_period(&self, tol);
        if let Some(period) = info.period {
            self.domain = period;
        }
        self.period_info = Some(info);
        self
    }

    /// The unit tangent indicatrix `e = γ'` as a curve (generally not
    /// arclength-parametrized). Requires an arclength base curve.
    pub fn tangent_indicatrix(&self) -> Result<SphericalCurve> {
        if !self.is_arclength {
            return Err(Error::NotArclength);
        }
        Ok(SphericalCurve {
            source: Arc::new(TangentSource { base: self.source.clone() }),
            domain: self.domain,
            samples: self.samples,
            is_arclength: false,
            period_info: None,
        })
    }
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

/// Helix on `S^3` with frequency pair `(a, b)`:
/// `(cos φ cos as, cos φ sin as, sin φ cos bs, sin φ sin bs)` where φ solves
/// `a² cos²φ + b² sin²φ = 1`, making the parametrization arclength. The
/// curvature/torsion pair is `(√((a²−1)(1−b²)), ab)`; `a = b = 1` is the
/// great circle.
pub fn make_helix(a: f64, b: f64) -> Result<SphericalCurve> {
    if (a - 1.0).abs() < 1e-14 && (b - 1.0).abs() < 1e-14 {
        return Ok(great_circle(4));
    }
    if !(b * b < 1.0 && 1.0 < a * a) {
        return Err(Error::HelixParameters { a, b });
    }
    let cos2 = (1.0 - b * b) / (a * a - b * b);
    let (cphi, sphi) = (cos2.sqrt(), (1.0 - cos2).sqrt());
    let curve = SphericalCurve::from_analytic(4, std::f64::consts::TAU, 1024, true, move |s| {
        let sa = Jet::variable(s).scale(a);
        let sb = Jet::variable(s).scale(b);
        vec![
            sa.cos().scale(cphi),
            sa.sin().scale(cphi),
            sb.cos().scale(sphi),
            sb.sin().scale(sphi),
        ]
    });
    Ok(curve)
}

/// Frequency pair realizing a target `(κ, τ)` with κ > 0: the roots of
/// `z² − (τ² + κ² + 1)z + τ²` give `(a², b²)` with `b² < 1 < a²`.
pub fn helix_frequencies(kappa: f64, tau: f64) -> Result<(f64, f64)> {
    if kappa <= 0.0 {
        return Err(Error::HelixParameters { a: 1.0, b: 1.0 });
    }
    let s = tau * tau + kappa * kappa + 1.0;
    let disc = (s * s - 4.0 * tau * tau).sqrt();
    let a2 = 0.5 * (s + disc);
    let b2 = 0.5 * (s - disc);
    Ok((a2.sqrt(), b2.sqrt()))
}

pub fn make_helix_kappa_tau(kappa: f64, tau: f64) -> Result<SphericalCurve> {
    let (a, b) = helix_frequencies(kappa, tau)?;
    make_helix(a, b)
}

/// Great circle `(cos s, sin s, 0, …)` in `R^dim`.
pub fn great_circle(dim: usize) -> SphericalCurve {
    SphericalCurve::from_analytic(dim, std::f64::consts::TAU, 1024, true, move |s| {
        let t = Jet::variable(s);
        let mut out = vec![t.cos(), t.sin()];
        out.resize(dim, Jet::constant(0.0));
        out
    })
}

// ---------------------------------------------------------------------------
// Arclength reparametrization
// ---------------------------------------------------------------------------

/// Reparametrize by arclength using a cumulative-trapezoid table inverted by
/// monotone lookup plus Newton refinement. Errors at irregular points
/// (`|γ'|` below 1e-6).
pub fn reparametrize_arclength(curve: &SphericalCurve) -> Result<SphericalCurve> {
    let n_table = (8 * curve.samples).max(4096);
    let dt = curve.domain / n_table as f64;
    let mut table = Vec::with_capacity(n_table + 1);
    table.push(0.0);
    let mut prev = speed(&*curve.source, 0.0);
    let mut acc = 0.0;
    let mut min_speed = prev;
    for i in 1..=n_table {
        let v = speed(&*curve.source, i as f64 * dt);
        min_speed = min_speed.min(v);
        acc += 0.5 * (prev + v) * dt;
        table.push(acc);
        prev = v;
    }
    if min_speed <= 1e-6 {
        let at = (0..=n_table)
            .map(|i| i as f64 * dt)
            .min_by(|x, y| {
                speed(&*curve.source, *x)
                    .partial_cmp(&speed(&*curve.source, *y))
                    .unwrap()
            })
            .unwrap();
        return Err(Error::IrregularCurve { s: at, speed: min_speed });
    }
    let total = acc;
    let source = Arc::new(ArclengthSource {
        base: curve.source.clone(),
        table,
        dt,
        total,
        base_domain: curve.domain,
        extend: curve.source.extendable(),
    });
    Ok(SphericalCurve {
        source,
        domain: total,
        samples: curve.samples,
        is_arclength: true,
        period_info: None,
    })
}

// ---------------------------------------------------------------------------
// Frenet data
// ---------------------------------------------------------------------------

/// Frenet frame and invariants at one parameter. `normal`, `binormal`, and
/// `torsion` are absent where the curvature falls below κ_min.
#[derive(Debug, Clone)]
pub struct FrenetPoint {
    pub gamma: DVector<f64>,
    pub e: DVector<f64>,
    pub kappa: f64,
    pub normal: Option<DVector<f64>>,
    pub binormal: Option<DVector<f64>>,
    pub tau: Option<f64>,
}

/// Per-sample Frenet data over the curve's grid.
#[derive(Debug, Clone)]
pub struct FrenetData {
    pub s: Vec<f64>,
    pub points: Vec<FrenetPoint>,
}

impl FrenetData {
    pub fn kappa_range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in &self.points {
            lo = lo.min(p.kappa);
            hi = hi.max(p.kappa);
        }
        (lo, hi)
    }

    pub fn tau_defined_everywhere(&self) -> bool {
        self.points.iter().all(|p| p.tau.is_some())
    }
}

/// Frenet data at a single parameter, from centered stencils applied to
/// position evaluations only. This route is independent of the analytic
/// derivative path, so it doubles as a cross-check on jet-based code.
///
/// On `S^3` (dim 4) the binormal is oriented so that the `(a, b)` helix
/// family has torsion `+ab`.
pub fn frenet_at(curve: &SphericalCurve, s: f64, kappa_min: f64) -> FrenetPoint {
    let dim = curve.dim();
    let h = FRENET_STEP;
    let pts: Vec<DVector<f64>> = (-3..=3)
        .map(|k| curve.position(s + k as f64 * h))
        .collect();
    let d1 = (-&pts[0] + &pts[1] * 9.0 - &pts[2] * 45.0 + &pts[4] * 45.0 - &pts[5] * 9.0
        + &pts[6])
        / (60.0 * h);
    let d2 = (&pts[0] * 2.0 - &pts[1] * 27.0 + &pts[2] * 270.0 - &pts[3] * 490.0
        + &pts[4] * 270.0
        - &pts[5] * 27.0
        + &pts[6] * 2.0)
        / (180.0 * h * h);
    let d3 = (&pts[0] - &pts[1] * 8.0 + &pts[2] * 13.0 - &pts[4] * 13.0 + &pts[5] * 8.0
        - &pts[6])
        / (8.0 * h * h * h);
    let gamma = pts[3].clone();
    let kvec = &d2 + &gamma;
    let kappa = kvec.norm();
    if kappa <= kappa_min || dim != 4 {
        return FrenetPoint { gamma, e: d1, kappa, normal: None, binormal: None, tau: None };
    }
    let normal = &kvec / kappa;
    let e = d1.clone();
    let binormal = -wedge_raw(&[&gamma, &e, &normal]);
    let tau = d3.dot(&binormal) / kappa;
    FrenetPoint {
        gamma,
        e,
        kappa,
        normal: Some(normal),
        binormal: Some(binormal),
        tau: Some(tau),
    }
}

/// Frenet data over the sample grid. Requires arclength parametrization.
pub fn frenet(curve: &SphericalCurve, tol: &Tolerances) -> Result<FrenetData> {
    if !curve.is_arclength {
        return Err(Error::NotArclength);
    }
    let s = curve.sample_grid();
    let points = s.iter().map(|&si| frenet_at(curve, si, tol.kappa_min)).collect();
    Ok(FrenetData { s, points })
}

// ---------------------------------------------------------------------------
// Bishop frame
// ---------------------------------------------------------------------------

/// Relatively parallel normal frame `{γ, e, e_1, …, e_n}` along a curve:
/// the normals satisfy `e_j' = −μ_j e`, which lets the frame continue
/// smoothly through curvature zeros.
///
/// Nodes cover `[-pad·h, domain + pad·h]` so downstream finite differences
/// never wrap across the (generally holonomy-twisted) seam.
#[derive(Debug, Clone)]
pub struct BishopFrame {
    pub h: f64,
    /// Index of the node at s = 0.
    pub pad: usize,
    /// Number of nodes inside `[0, domain)` (every `oversample`-th node is a
    /// grid node of downstream tube grids).
    pub steps: usize,
    pub s: Vec<f64>,
    pub gamma: Vec<DVector<f64>>,
    pub e: Vec<DVector<f64>>,
    /// `normals[j][i]` is `e_{j+1}` at node i.
    pub normals: Vec<Vec<DVector<f64>>>,
    /// `mu[j][i] = ⟨e'(s_i), e_{j+1}(s_i)⟩`.
    pub mu: Vec<Vec<f64>>,
    /// Normal-fiber transport over one period, for closed curves.
    pub holonomy: Option<nalgebra::DMatrix<f64>>,
}

impl BishopFrame {
    pub fn node_count(&self) -> usize {
        self.s.len()
    }

    /// Curvature of the center curve at node i via `κ = |μ|`.
    pub fn kappa(&self, i: usize) -> f64 {
        self.mu.iter().map(|m| m[i] * m[i]).sum::<f64>().sqrt()
    }

    pub fn max_mu(&self) -> f64 {
        self.mu
            .iter()
            .flat_map(|m| m.iter())
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }
}

/// Default initial basis: orthonormal completion of `{γ(0), e(0)}` by
/// Gram–Schmidt over the canonical ambient basis.
pub fn default_normal_basis(curve: &SphericalCurve) -> Vec<DVector<f64>> {
    let dim = curve.dim();
    let gamma0 = curve.position(0.0);
    let e0 = unit(&curve.velocity(0.0));
    let mut chain = vec![gamma0, e0];
    for k in 0..dim {
        if chain.len() == dim {
            break;
        }
        let cand = crate::ambient::basis(dim, k);
        let mut w = cand.clone();
        let ortho = mgs(&chain);
        for u in &ortho {
            let c = w.dot(u);
            w.axpy(-c, u, 1.0);
        }
        if w.norm() > 0.3 {
            chain.push(cand);
        }
    }
    let ortho = mgs(&chain);
    ortho[2..].to_vec()
}

/// Integrate the Bishop frame ODE `e_j' = −⟨e', e_j⟩ e` with classic RK4 at
/// `oversample × samples` steps per domain, re-orthonormalizing every step.
/// Records `μ_j(s)` and, for closed curves, the holonomy of the normal
/// fiber over one period.
pub fn bishop(
    curve: &SphericalCurve,
    initial_basis: Option<Vec<DVector<f64>>>,
    tol: &Tolerances,
) -> Result<BishopFrame> {
    if !curve.is_arclength {
        return Err(Error::NotArclength);
    }
    let dim = curve.dim();
    let n = dim - 2;
    let basis = initial_basis.unwrap_or_else(|| default_normal_basis(curve));
    if basis.len() != n {
        return Err(Error::BadInitialBasis);
    }
    // Validate: orthonormal among themselves and orthogonal to {γ(0), e(0)}.
    let gamma0 = curve.position(0.0);
    let e0 = curve.velocity(0.0);
    for (j, bj) in basis.iter().enumerate() {
        if (bj.norm() - 1.0).abs() > 1e-8
            || bj.dot(&gamma0).abs() > 1e-8
            || bj.dot(&e0).abs() > 1e-8
        {
            return Err(Error::BadInitialBasis);
        }
        for bk in &basis[..j] {
            if bj.dot(bk).abs() > 1e-8 {
                return Err(Error::BadInitialBasis);
            }
        }
    }
    let oversample = (1024 + curve.samples - 1) / curve.samples;
    let steps = curve.samples * oversample;
    let h = curve.domain / steps as f64;
    let pad = 4 * oversample;
    let total = steps + 2 * pad + 1;

    let mut s_nodes = Vec::with_capacity(total);
    for i in 0..total {
        s_nodes.push((i as isize - pad as isize) as f64 * h);
    }
    let mut gamma = vec![DVector::zeros(dim); total];
    let mut e = vec![DVector::zeros(dim); total];
    let mut normals = vec![vec![DVector::zeros(dim); total]; n];
    let mut mu = vec![vec![0.0; total]; n];

    // RK4 right-hand side at parameter s for the stacked normals.
    let rhs = |s: f64, ns: &[DVector<f64>]| -> Vec<DVector<f64>> {
        let ep = curve.acceleration(s);
        let ev = unit(&curve.velocity(s));
        ns.iter().map(|nj| &ev * (-ep.dot(nj))).collect()
    };
    let step = |s: f64, hh: f64, ns: &Vec<DVector<f64>>| -> Vec<DVector<f64>> {
        let k1 = rhs(s, ns);
        let mid1: Vec<_> = ns.iter().zip(&k1).map(|(v, k)| v + k * (hh / 2.0)).collect();
        let k2 = rhs(s + hh / 2.0, &mid1);
        let mid2: Vec<_> = ns.iter().zip(&k2).map(|(v, k)| v + k * (hh / 2.0)).collect();
        let k3 = rhs(s + hh / 2.0, &mid2);
        let end: Vec<_> = ns.iter().zip(&k3).map(|(v, k)| v + k * hh).collect();
        let k4 = rhs(s + hh, &end);
        ns.iter()
            .enumerate()
            .map(|(j, v)| v + (&k1[j] + &k2[j] * 2.0 + &k3[j] * 2.0 + &k4[j]) * (hh / 6.0))
            .collect()
    };
    // Re-orthonormalize the normals against the exact {γ, e} at each node.
    let cleanup = |s: f64, ns: Vec<DVector<f64>>| -> Vec<DVector<f64>> {
        let g = curve.position(s);
        let ev = unit(&curve.velocity(s));
        let mut chain = vec![g, ev];
        chain.extend(ns);
        let ortho = mgs(&chain);
        ortho[2..].to_vec()
    };

    // Store the fully orthonormalized frame: spline-backed curves drift off
    // the sphere between knots, and the tube inherits whatever defect the
    // stored frame carries.
    let fill = |i: usize,
                ns: &[DVector<f64>],
                gamma: &mut Vec<DVector<f64>>,
                e: &mut Vec<DVector<f64>>,
                normals: &mut Vec<Vec<DVector<f64>>>,
                mu: &mut Vec<Vec<f64>>| {
        let s = (i as isize - pad as isize) as f64 * h;
        let base = mgs(&[curve.position(s), curve.velocity(s)]);
        gamma[i] = base[0].clone();
        e[i] = base[1].clone();
        let ep = curve.acceleration(s);
        for j in 0..n {
            normals[j][i] = ns[j].clone();
            mu[j][i] = ep.dot(&ns[j]);
        }
    };

    // Forward sweep from s = 0.
    let mut state = basis.clone();
    fill(pad, &state, &mut gamma, &mut e, &mut normals, &mut mu);
    let mut holonomy_state: Option<Vec<DVector<f64>>> = None;
    for i in pad..total - 1 {
        let s = (i as isize - pad as isize) as f64 * h;
        state = cleanup(s + h, step(s, h, &state));
        fill(i + 1, &state, &mut gamma, &mut e, &mut normals, &mut mu);
        if i + 1 == pad + steps {
            holonomy_state = Some(state.clone());
        }
    }
    // Backward sweep from s = 0.
    let mut state = basis.clone();
    for i in (0..pad).rev() {
        let s = (i as isize + 1 - pad as isize) as f64 * h;
        state = cleanup(s - h, step(s, -h, &state));
        fill(i, &state, &mut gamma, &mut e, &mut normals, &mut mu);
    }

    let closed = curve
        .period_info
        .map(|p| p.is_closed() && (p.period.unwrap_or(0.0) - curve.domain).abs() < 1e-9)
        .unwrap_or(false);
    let holonomy = if closed {
        holonomy_state.map(|at_l| {
            let mut m = nalgebra::DMatrix::zeros(n, n);
            for j in 0..n {
                for k in 0..n {
                    m[(j, k)] = at_l[j].dot(&basis[k]);
                }
            }
            m
        })
    } else {
        None
    };

    let frame = BishopFrame {
        h,
        pad,
        steps,
        s: s_nodes,
        gamma,
        e,
        normals,
        mu,
        holonomy,
    };
    let defect = bishop_gram_defect(&frame);
    if !(defect <= tol.gram.max(1e-8)) {
        return Err(Error::DegenerateFrame(defect));
    }
    Ok(frame)
}

/// Max Gram defect of the full frame over all nodes.
pub fn bishop_gram_defect(frame: &BishopFrame) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..frame.node_count() {
        let mut vs: Vec<&DVector<f64>> = vec![&frame.gamma[i], &frame.e[i]];
        for nj in &frame.normals {
            vs.push(&nj[i]);
        }
        for (a, u) in vs.iter().enumerate() {
            for (b, v) in vs.iter().enumerate() {
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((u.dot(v) - target).abs());
            }
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// Period detection
// ---------------------------------------------------------------------------

/// Scan for the smallest `L` with `γ(s + L) = sign·γ(s)`, refining grid
/// minima by golden section and validating densely. `F(L)` is 1-Lipschitz
/// for unit-speed curves, so a 0.004 grid cannot skip a zero.
fn closure_scan(curve: &SphericalCurve, sign: f64, l_max: f64, tol: f64) -> Option<f64> {
    const PROBE_COUNT: usize = 48;
    const STRIDE: f64 = 0.562_761_8;
    const GRID: f64 = 0.004;
    const FLOOR: f64 = 0.5;

    let effective_max = if curve.extendable() {
        l_max
    } else {
        // Non-extendable sources can only be compared inside their own range.
        (curve.domain * 0.5).min(l_max)
    };
    if effective_max <= FLOOR {
        return None;
    }
    let probe_span = if curve.extendable() {
        PROBE_COUNT as f64 * STRIDE
    } else {
        curve.domain - effective_max
    };
    let probes: Vec<(f64, DVector<f64>)> = (0..PROBE_COUNT)
        .map(|k| {
            let s = k as f64 * probe_span / PROBE_COUNT as f64;
            (s, curve.position(s))
        })
        .collect();
    let f = |l: f64| -> f64 {
        probes
            .iter()
            .map(|(s, p)| (curve.position(s + l) - p * sign).norm())
            .fold(0.0, f64::max)
    };
    let validate = |l: f64| -> bool {
        let m = 512;
        (0..m).all(|k| {
            let s = k as f64 * l / m as f64;
            (curve.position(s + l) - curve.position(s) * sign).norm() <= tol
        })
    };

    let count = ((effective_max - FLOOR) / GRID) as usize;
    let mut prev2 = f(FLOOR);
    let mut prev = f(FLOOR + GRID);
    for i in 2..=count {
        let l = FLOOR + i as f64 * GRID;
        let cur = f(l);
        if prev < 0.02 && prev <= prev2 && prev <= cur {
            let center = l - GRID;
            let refined = golden_min(&f, center - GRID, center + GRID, 1e-12);
            if f(refined) <= tol && validate(refined) {
                return Some(refined);
            }
        }
        prev2 = prev;
        prev = cur;
    }
    None
}

/// Detect closure: antiperiodicity is checked first, and an antiperiodic
/// curve stores `period = 2·antiperiod` (which is provably its minimal
/// period). Returns `Open` when nothing closes below `period_lmax`.
pub fn classify_period(curve: &SphericalCurve, tol: &Tolerances) -> PeriodInfo {
    if let Some(t) = closure_scan(curve, -1.0, tol.period_lmax / 2.0, tol.period) {
        return PeriodInfo {
            kind: PeriodKind::Antiperiodic,
            period: Some(2.0 * t),
            antiperiod: Some(t),
        };
    }
    if let Some(l) = closure_scan(curve, 1.0, tol.period_lmax, tol.period) {
        return PeriodInfo { kind: PeriodKind::Periodic, period: Some(l), antiperiod: None };
    }
    PeriodInfo::open()
}
