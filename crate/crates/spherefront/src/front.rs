//! Developable tube fronts over framed curves: grid evaluation, singular
//! locus extraction and stratification, principal-curvature data, parallel
//! fronts, the lift metric, and co-orientability.

use nalgebra::{DMatrix, DVector};

use crate::ambient::Signature;
use crate::config::Tolerances;
use crate::curve::{bishop, BishopFrame, PeriodKind, SphericalCurve};
use crate::numerics::{bisect, CENTRAL5_D1};
use crate::{Error, Result};

/// Ghost rows kept on each side of the s-range so finite differences never
/// cross the (holonomy-twisted) seam of a closed tube.
pub const PAD_ROWS: usize = 4;

/// Dense row-major storage for per-node grid data.
#[derive(Debug, Clone)]
pub struct Grid2<T> {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<T>,
}

impl<T: Clone> Grid2<T> {
    pub fn fill(nx: usize, ny: usize, value: T) -> Self {
        Grid2 { nx, ny, data: vec![value; nx * ny] }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Grid2<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.ny + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Grid2<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.ny + j]
    }
}

/// A developable tube: a framed center curve plus the `(s, t)` evaluation
/// grid. `t` is the angle coordinate on the normal circle (surface case).
#[derive(Debug, Clone)]
pub struct TubeFront {
    pub curve: SphericalCurve,
    pub frame: BishopFrame,
    pub oversample: usize,
    pub m_s: usize,
    pub m_x: usize,
    /// Grid values `s_i = i·h_s` over one domain (closed: one full period).
    pub s: Vec<f64>,
    /// Angles `t_j = j·h_t` over `[0, 2π)`.
    pub t: Vec<f64>,
    pub h_s: f64,
    pub h_t: f64,
}

/// Build the tube over a curve: classifies the curve if needed, integrates
/// a Bishop frame aligned with the requested grid, and fixes resolutions.
pub fn build_tube(
    curve: &SphericalCurve,
    m_s: usize,
    m_x: usize,
    tol: &Tolerances,
) -> Result<TubeFront> {
    if m_s < 32 || m_x < 32 {
        return Err(Error::ResolutionTooLow { got: m_s.min(m_x), floor: 32 });
    }
    if curve.dim() != 4 {
        return Err(Error::NeedsSurfaceCase(curve.dim() - 2));
    }
    let mut c = curve.clone();
    if c.period_info.is_none() {
        c = c.classified(tol);
    }
    c.samples = m_s;
    let frame = bishop(&c, None, tol)?;
    let oversample = frame.steps / m_s;
    let h_s = c.domain / m_s as f64;
    let h_t = std::f64::consts::TAU / m_x as f64;
    Ok(TubeFront {
        curve: c,
        frame,
        oversample,
        m_s,
        m_x,
        s: (0..m_s).map(|i| i as f64 * h_s).collect(),
        t: (0..m_x).map(|j| j as f64 * h_t).collect(),
        h_s,
        h_t,
    })
}

impl TubeFront {
    /// Frame node backing grid row `gi` (may be negative or past `m_s`;
    /// ghost rows are covered by the frame padding).
    pub fn frame_node(&self, gi: isize) -> usize {
        (self.frame.pad as isize + gi * self.oversample as isize) as usize
    }

    pub fn mu_at(&self, gi: isize) -> (f64, f64) {
        let k = self.frame_node(gi);
        (self.frame.mu[0][k], self.frame.mu[1][k])
    }

    pub fn kappa_at(&self, gi: isize) -> f64 {
        self.frame.kappa(self.frame_node(gi))
    }

    /// Tube position `f(s_gi, t) = cos t · e₁ + sin t · e₂`.
    pub fn position(&self, gi: isize, t: f64) -> DVector<f64> {
        let k = self.frame_node(gi);
        &self.frame.normals[0][k] * t.cos() + &self.frame.normals[1][k] * t.sin()
    }

    pub fn center(&self, gi: isize) -> DVector<f64> {
        self.frame.gamma[self.frame_node(gi)].clone()
    }

    pub fn center_tangent(&self, gi: isize) -> DVector<f64> {
        self.frame.e[self.frame_node(gi)].clone()
    }

    /// Finite-difference differential at `(s_gi, t)`: columns are the 5-point
    /// O(h⁴) s-derivative and the O(h²) central t-derivative.
    pub fn df_fd(&self, gi: isize, t: f64) -> DMatrix<f64> {
        let dim = 4;
        let mut m = DMatrix::zeros(dim, 2);
        let mut col_s = DVector::zeros(dim);
        for (k, w) in CENTRAL5_D1.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            col_s += self.position(gi + k as isize - 2, t) * (*w / self.h_s);
        }
        let col_t =
            (self.position(gi, t + self.h_t) - self.position(gi, t - self.h_t)) / (2.0 * self.h_t);
        for r in 0..dim {
            m[(r, 0)] = col_s[r];
            m[(r, 1)] = col_t[r];
        }
        m
    }

    /// Rotation angle of the normal fiber over one period, for closed curves.
    pub fn holonomy_angle(&self) -> Option<f64> {
        self.frame
            .holonomy
            .as_ref()
            .map(|m| f64::atan2(m[(0, 1)], m[(0, 0)]))
    }
}

// ---------------------------------------------------------------------------
// Evaluated grids
// ---------------------------------------------------------------------------

/// Stratification of a singular node: `InflectionalSlice` nodes sit over a
/// curvature zero of the center curve (the whole s-slice is singular),
/// `NonInflectional` nodes are the isolated ruling zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Stratum {
    Regular,
    InflectionalSlice,
    NonInflectional,
}

/// Point of the real projective line `Λ = [cos θ : sin θ]`, stored as an
/// angle in `[0, π)` so the value stays continuous across ρ → ∞.
/// `θ ≈ 0` marks a singular node, `θ ≈ π/2` an umbilic.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PrincipalCurvatureValue {
    pub theta: f64,
}

impl PrincipalCurvatureValue {
    pub fn from_jets(c_f: f64, c_nu: f64) -> Self {
        let theta = f64::atan2(c_f, -c_nu).rem_euclid(std::f64::consts::PI);
        PrincipalCurvatureValue { theta }
    }

    /// Distance of the angle from `target` in the projective metric.
    pub fn dist(&self, target: f64) -> f64 {
        let d = (self.theta - target).rem_euclid(std::f64::consts::PI);
        d.min(std::f64::consts::PI - d)
    }

    pub fn is_singular(&self, tol: f64) -> bool {
        self.dist(0.0) <= tol
    }

    pub fn is_umbilic(&self, tol: f64) -> bool {
        self.dist(std::f64::consts::FRAC_PI_2) <= tol
    }
}

/// Evaluated front data on an `(s, t)` grid, including `PAD_ROWS` ghost rows
/// on each side of the s-range. Rows `pad .. pad + m_s` are the exported
/// surface.
///
/// Per node the grid stores the position `f`, the unit normal `ν`, and the
/// coefficient pairs of the s- and t-derivatives along the frame directions:
/// `f_s = c_f·e`, `ν_s = c_ν·e`, `f_t = d_f·w`, `ν_t = d_ν·w` (with `w` the
/// unit ruling direction). Parallel fronts rotate these pairs, so the whole
/// parallel family evaluates without re-differencing.
#[derive(Debug, Clone)]
pub struct FrontGrid {
    pub m_s: usize,
    pub m_x: usize,
    pub pad: usize,
    pub h_s: f64,
    pub h_t: f64,
    /// `s` for every stored row (ghosts included).
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub f: Grid2<DVector<f64>>,
    pub nu: Grid2<DVector<f64>>,
    pub c_f: Grid2<f64>,
    pub c_nu: Grid2<f64>,
    pub d_f: Grid2<f64>,
    pub d_nu: Grid2<f64>,
    pub lambda: Grid2<PrincipalCurvatureValue>,
    pub rho: Grid2<f64>,
    pub singular: Grid2<bool>,
    pub stratum: Grid2<Stratum>,
    /// Center-curve curvature per stored row.
    pub kappa_center: Vec<f64>,
    /// Scale used by the singular threshold: `max(1, max |μ|)`.
    pub mu_scale: f64,
    pub curve_closed: bool,
}

impl FrontGrid {
    pub fn rows(&self) -> usize {
        self.m_s + 2 * self.pad
    }

    pub fn interior_rows(&self) -> std::ops::Range<usize> {
        self.pad..self.pad + self.m_s
    }

    /// First-fundamental-form coefficients `(E, F, G)` at a node.
    pub fn fff(&self, i: usize, j: usize) -> (f64, f64, f64) {
        let cf = self.c_f[(i, j)];
        let df = self.d_f[(i, j)];
        (cf * cf, 0.0, df * df)
    }
}

/// Fill a [`FrontGrid`] from the tube's frame data. The normal is the
/// center curve itself; the curvature radius along the ruling circle is
/// `ρ(s, t) = μ₁ cos t + μ₂ sin t`.
pub fn evaluate(front: &TubeFront, tol: &Tolerances) -> FrontGrid {
    let rows = front.m_s + 2 * PAD_ROWS;
    let cols = front.m_x;
    let zero = DVector::zeros(4);
    let mut g = FrontGrid {
        m_s: front.m_s,
        m_x: front.m_x,
        pad: PAD_ROWS,
        h_s: front.h_s,
        h_t: front.h_t,
        s: (0..rows)
            .map(|i| (i as isize - PAD_ROWS as isize) as f64 * front.h_s)
            .collect(),
        t: front.t.clone(),
        f: Grid2::fill(rows, cols, zero.clone()),
        nu: Grid2::fill(rows, cols, zero),
        c_f: Grid2::fill(rows, cols, 0.0),
        c_nu: Grid2::fill(rows, cols, 0.0),
        d_f: Grid2::fill(rows, cols, 0.0),
        d_nu: Grid2::fill(rows, cols, 0.0),
        lambda: Grid2::fill(rows, cols, PrincipalCurvatureValue { theta: 0.0 }),
        rho: Grid2::fill(rows, cols, 0.0),
        singular: Grid2::fill(rows, cols, false),
        stratum: Grid2::fill(rows, cols, Stratum::Regular),
        kappa_center: (0..rows)
            .map(|i| front.kappa_at(i as isize - PAD_ROWS as isize))
            .collect(),
        mu_scale: front.frame.max_mu().max(1.0),
        curve_closed: front
            .curve
            .period_info
            .map(|p| p.is_closed())
            .unwrap_or(false),
    };
    let sing_tol = tol.singular * g.mu_scale;
    for i in 0..rows {
        let gi = i as isize - PAD_ROWS as isize;
        let (mu1, mu2) = front.mu_at(gi);
        let kappa = g.kappa_center[i];
        for j in 0..cols {
            let t = front.t[j];
            let rho = mu1 * t.cos() + mu2 * t.sin();
            g.f[(i, j)] = front.position(gi, t);
            g.nu[(i, j)] = front.center(gi);
            g.c_f[(i, j)] = -rho;
            g.c_nu[(i, j)] = 1.0;
            g.d_f[(i, j)] = 1.0;
            g.d_nu[(i, j)] = 0.0;
            let lam = PrincipalCurvatureValue::from_jets(-rho, 1.0);
            g.lambda[(i, j)] = lam;
            g.rho[(i, j)] = rho;
            let singular = rho.abs() <= sing_tol;
            g.singular[(i, j)] = singular;
            g.stratum[(i, j)] = if !singular {
                Stratum::Regular
            } else if kappa <= tol.kappa_min {
                Stratum::InflectionalSlice
            } else {
                Stratum::NonInflectional
            };
        }
    }
    g
}

/// Nodes whose principal-curvature angle sits at the umbilic point of the
/// projective line. Developable tubes have none; parallels can acquire them
/// where the rotated angle crosses π/2.
pub fn umbilic_scan(grid: &FrontGrid, tol: &Tolerances) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in grid.interior_rows() {
        for j in 0..grid.m_x {
            if grid.lambda[(i, j)].is_umbilic(tol.umbilic_angle) {
                out.push((i, j));
            }
        }
    }
    out
}

/// The singular parameters of one s-slice.
#[derive(Debug, Clone)]
pub struct SliceRoots {
    /// Grid row (interior indexing: 0 .. m_s).
    pub slice: usize,
    pub s: f64,
    /// Whole slice singular (curvature zero of the center curve).
    pub whole_slice: bool,
    /// Ruling angles where `μ₁ cos t + μ₂ sin t = 0`, refined by bisection.
    pub roots: Vec<f64>,
}

/// Extract the singular curve by root-finding per slice instead of node
/// thresholding: the zero set has codimension one and grids miss it.
pub fn singular_slices(front: &TubeFront, tol: &Tolerances) -> Vec<SliceRoots> {
    singular_slices_level(front, 0.0, tol)
}

/// Roots of `μ₁ cos t + μ₂ sin t = level` per slice. Level 0 is the tube's
/// own singular set; level tan δ is the singular set of its δ-parallel.
pub fn singular_slices_level(front: &TubeFront, level: f64, tol: &Tolerances) -> Vec<SliceRoots> {
    let mut out = Vec::with_capacity(front.m_s);
    for i in 0..front.m_s {
        let (mu1, mu2) = front.mu_at(i as isize);
        let kappa = front.kappa_at(i as isize);
        if level == 0.0 && kappa <= tol.kappa_min * front.frame.max_mu().max(1.0) {
            out.push(SliceRoots {
                slice: i,
                s: front.s[i],
                whole_slice: true,
                roots: front.t.clone(),
            });
            continue;
        }
        let psi = |t: f64| mu1 * t.cos() + mu2 * t.sin() - level;
        let mut roots = Vec::new();
        for j in 0..front.m_x {
            let t0 = front.t[j];
            let t1 = t0 + front.h_t;
            let (p0, p1) = (psi(t0), psi(t1));
            if p0 == 0.0 {
                roots.push(t0);
            } else if p0 * p1 < 0.0 {
                roots.push(bisect(&psi, t0, t1, 1e-12));
            }
        }
        out.push(SliceRoots { slice: i, s: front.s[i], whole_slice: false, roots });
    }
    out
}

/// Parallel front at distance δ: `(f, ν) ↦ (cos δ f + sin δ ν,
/// −sin δ f + cos δ ν)`. All node data rotates accordingly and the
/// principal-curvature angle shifts by exactly δ; singular flags and strata
/// are recomputed from the rotated data.
pub fn parallel_front(grid: &FrontGrid, delta: f64, tol: &Tolerances) -> FrontGrid {
    let (cd, sd) = (delta.cos(), delta.sin());
    let mut out = grid.clone();
    let rows = grid.rows();
    for i in 0..rows {
        for j in 0..grid.m_x {
            let f = &grid.f[(i, j)];
            let nu = &grid.nu[(i, j)];
            out.f[(i, j)] = f * cd + nu * sd;
            out.nu[(i, j)] = f * (-sd) + nu * cd;
            let (cf, cn) = (grid.c_f[(i, j)], grid.c_nu[(i, j)]);
            out.c_f[(i, j)] = cd * cf + sd * cn;
            out.c_nu[(i, j)] = -sd * cf + cd * cn;
            let (df, dn) = (grid.d_f[(i, j)], grid.d_nu[(i, j)]);
            out.d_f[(i, j)] = cd * df + sd * dn;
            out.d_nu[(i, j)] = -sd * df + cd * dn;
            let lam = PrincipalCurvatureValue::from_jets(out.c_f[(i, j)], out.c_nu[(i, j)]);
            out.lambda[(i, j)] = lam;
            out.rho[(i, j)] = lam.theta.tan();
        }
    }
    let sing_tol = tol.singular * grid.mu_scale;
    for i in 0..rows {
        let kappa = out.kappa_center[i];
        for j in 0..grid.m_x {
            // df = c_f e ds + d_f w dt with orthogonal unit directions, so
            // the rank drops exactly when one coefficient vanishes.
            let singular = out.c_f[(i, j)].abs().min(out.d_f[(i, j)].abs()) <= sing_tol;
            out.singular[(i, j)] = singular;
            out.stratum[(i, j)] = if !singular {
                Stratum::Regular
            } else if kappa <= tol.kappa_min {
                Stratum::InflectionalSlice
            } else {
                Stratum::NonInflectional
            };
        }
    }
    out
}

/// Coefficients of the lift metric `⟨df,df⟩ + ⟨dν,dν⟩` in the `(s, t)`
/// directions, with the lower-bound witness against `ds² + dt²`.
#[derive(Debug, Clone)]
pub struct LiftMetricField {
    pub coeff_s: Grid2<f64>,
    pub coeff_t: Grid2<f64>,
    pub lower_bound_ok: bool,
    pub min_coeff_s: f64,
    pub min_coeff_t: f64,
}

pub fn lift_metric(grid: &FrontGrid) -> LiftMetricField {
    let rows = grid.rows();
    let mut coeff_s = Grid2::fill(rows, grid.m_x, 0.0);
    let mut coeff_t = Grid2::fill(rows, grid.m_x, 0.0);
    let mut min_s = f64::INFINITY;
    let mut min_t = f64::INFINITY;
    for i in 0..rows {
        for j in 0..grid.m_x {
            let cs = grid.c_f[(i, j)].powi(2) + grid.c_nu[(i, j)].powi(2);
            let ct = grid.d_f[(i, j)].powi(2) + grid.d_nu[(i, j)].powi(2);
            coeff_s[(i, j)] = cs;
            coeff_t[(i, j)] = ct;
            min_s = min_s.min(cs);
            min_t = min_t.min(ct);
        }
    }
    LiftMetricField {
        coeff_s,
        coeff_t,
        lower_bound_ok: min_s >= 1.0 - 1e-10 && min_t >= 1.0 - 1e-10,
        min_coeff_s: min_s,
        min_coeff_t: min_t,
    }
}

/// Whether the tube's unit normal (the center curve) is globally
/// well-defined: it fails exactly when the center curve is antiperiodic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum CoOrientability {
    CoOrientable,
    NonCoOrientable,
    OpenCurve,
}

pub fn coorientability(front: &TubeFront) -> CoOrientability {
    match front.curve.period_info.map(|p| p.kind) {
        Some(PeriodKind::Antiperiodic) => CoOrientability::NonCoOrientable,
        Some(PeriodKind::Periodic) => CoOrientability::CoOrientable,
        _ => CoOrientability::OpenCurve,
    }
}

/// Completeness report for a tube: the front is complete exactly when the
/// center curve closes (the tube is then compact); weak completeness is
/// witnessed by the lift-metric lower bound.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Completeness {
    pub weakly_complete: bool,
    pub complete: bool,
}

pub fn completeness(front: &TubeFront, lift: &LiftMetricField) -> Completeness {
    Completeness {
        weakly_complete: lift.lower_bound_ok,
        complete: front.curve.period_info.map(|p| p.is_closed()).unwrap_or(false),
    }
}

// ---------------------------------------------------------------------------
// Generic sampled frontals (input to the verification module)
// ---------------------------------------------------------------------------

/// Which space the frontal maps into; fixes the inner product and the
/// curvature constant of the ambient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientKind {
    /// Flat ambient `R^d`, c = 0.
    EuclideanSpace,
    /// Unit sphere in `R^d`, c = 1.
    Sphere,
    /// Hyperboloid model in Lorentzian `R^d`, c = −1.
    Hyperbolic,
}

impl AmbientKind {
    pub fn c(&self) -> f64 {
        match self {
            AmbientKind::EuclideanSpace => 0.0,
            AmbientKind::Sphere => 1.0,
            AmbientKind::Hyperbolic => -1.0,
        }
    }

    pub fn signature(&self) -> Signature {
        match self {
            AmbientKind::Hyperbolic => Signature::Lorentzian,
            _ => Signature::Euclidean,
        }
    }
}

/// A map with unit normal sampled on a structured parameter grid; the
/// shared input format of the verification checks.
#[derive(Debug, Clone)]
pub struct SampledFrontal {
    pub ambient: AmbientKind,
    pub nx: usize,
    pub ny: usize,
    pub h1: f64,
    pub h2: f64,
    pub f: Grid2<DVector<f64>>,
    pub nu: Grid2<DVector<f64>>,
    /// Second direction wraps (angle coordinates).
    pub wrap2: bool,
    /// Rows usable as stencil centers: `[lo, hi)` with enough margin that
    /// nested differences stay in storage.
    pub interior1: (usize, usize),
}

impl SampledFrontal {
    pub fn wrap_j(&self, j: isize) -> usize {
        if self.wrap2 {
            j.rem_euclid(self.ny as isize) as usize
        } else {
            j.clamp(0, self.ny as isize - 1) as usize
        }
    }

    /// Central-difference derivative of a node field along direction 1 or 2.
    pub fn central(&self, field: &Grid2<DVector<f64>>, i: usize, j: usize, dir: usize) -> DVector<f64> {
        if dir == 0 {
            (&field[(i + 1, j)] - &field[(i - 1, j)]) / (2.0 * self.h1)
        } else {
            let jp = self.wrap_j(j as isize + 1);
            let jm = self.wrap_j(j as isize - 1);
            (&field[(i, jp)] - &field[(i, jm)]) / (2.0 * self.h2)
        }
    }

    /// Interior columns usable as stencil centers.
    pub fn interior2(&self) -> std::ops::Range<usize> {
        if self.wrap2 {
            0..self.ny
        } else {
            2..self.ny.saturating_sub(2)
        }
    }
}

impl FrontGrid {
    /// View the grid as a generic sampled frontal on the unit sphere.
    pub fn as_frontal(&self) -> SampledFrontal {
        SampledFrontal {
            ambient: AmbientKind::Sphere,
            nx: self.rows(),
            ny: self.m_x,
            h1: self.h_s,
            h2: self.h_t,
            f: self.f.clone(),
            nu: self.nu.clone(),
            wrap2: true,
            interior1: (self.pad, self.pad + self.m_s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{great_circle, make_helix};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn helix_tube(m_s: usize, m_x: usize) -> TubeFront {
        let c = make_helix(2.0, 0.5).unwrap();
        build_tube(&c, m_s, m_x, &tols()).unwrap()
    }

    #[test]
    fn node_invariants_hold() {
        let tube = helix_tube(64, 48);
        let g = evaluate(&tube, &tols());
        for i in 0..g.rows() {
            for j in 0..g.m_x {
                let f = &g.f[(i, j)];
                let nu = &g.nu[(i, j)];
                assert!((f.norm_squared() - 1.0).abs() <= 1e-10);
                assert!((nu.norm_squared() - 1.0).abs() <= 1e-10);
                assert!(f.dot(nu).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn tube_positions_orthogonal_to_center() {
        let tube = helix_tube(64, 48);
        for i in 0..tube.m_s {
            for &t in &[0.0, 1.0, 2.5] {
                let f = tube.position(i as isize, t);
                assert!(f.dot(&tube.center(i as isize)).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn great_circle_tube_fully_singular() {
        let c = great_circle(4);
        let tube = build_tube(&c, 64, 48, &tols()).unwrap();
        let g = evaluate(&tube, &tols());
        for i in g.interior_rows() {
            for j in 0..g.m_x {
                assert!(g.singular[(i, j)]);
                assert_eq!(g.stratum[(i, j)], Stratum::InflectionalSlice);
            }
        }
        // The ruling directions are constant in s where μ ≡ 0.
        let f0 = tube.position(0, 0.0);
        let f1 = tube.position(20, 0.0);
        assert!((f0 - f1).norm() <= 1e-9);
        assert_eq!(coorientability(&tube), CoOrientability::NonCoOrientable);
    }

    #[test]
    fn singular_set_two_antipodal_roots_per_slice() {
        let tube = helix_tube(96, 64);
        let slices = singular_slices(&tube, &tols());
        assert_eq!(slices.len(), 96);
        for sl in &slices {
            assert!(!sl.whole_slice);
            assert_eq!(sl.roots.len(), 2, "slice {}", sl.slice);
            let d = (sl.roots[1] - sl.roots[0] - PI).abs();
            assert!(d <= 1e-9, "roots not antipodal: {:?}", sl.roots);
            // Closed form: tan t = -μ1/μ2.
            let (mu1, mu2) = tube.mu_at(sl.slice as isize);
            for r in &sl.roots {
                assert!((mu1 * r.cos() + mu2 * r.sin()).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn corank_one_at_singular_roots() {
        let tube = helix_tube(256, 64);
        let slices = singular_slices(&tube, &tols());
        for sl in slices.iter().step_by(17) {
            for &r in &sl.roots {
                let df = tube.df_fd(sl.slice as isize, r);
                let sv = df.svd(false, false).singular_values;
                assert!(sv[0] > 0.1);
                assert!(sv[1] / sv[0] < 1e-4, "ratio {}", sv[1] / sv[0]);
            }
        }
    }

    #[test]
    fn frontal_identity_converges() {
        // ⟨df(∂s), ν⟩ from finite differences is O(h²) at interior nodes.
        let mut hs = Vec::new();
        let mut rs = Vec::new();
        for m in [64usize, 128, 256] {
            let tube = helix_tube(m, 32);
            let g = evaluate(&tube, &tols());
            let mut worst = 0.0_f64;
            for i in g.interior_rows() {
                for j in 0..g.m_x {
                    let fs = (&g.f[(i + 1, j)] - &g.f[(i - 1, j)]) / (2.0 * g.h_s);
                    worst = worst.max(fs.dot(&g.nu[(i, j)]).abs());
                }
            }
            hs.push(tube.h_s);
            rs.push(worst);
        }
        let order = crate::numerics::convergence_order(&hs, &rs);
        assert!(order >= 1.8, "order {order}, residuals {rs:?}");
    }

    #[test]
    fn lambda_angle_classification() {
        let v = PrincipalCurvatureValue::from_jets(0.0, 1.0); // ρ = 0
        assert!(v.is_singular(1e-12));
        let v = PrincipalCurvatureValue::from_jets(1.0, 0.0); // ρ = ∞
        assert!(v.is_umbilic(1e-12));
        let v = PrincipalCurvatureValue::from_jets(-1.0, 1.0); // ρ = 1
        assert_relative_eq!(v.theta, std::f64::consts::FRAC_PI_4, epsilon = 1e-12);
    }

    #[test]
    fn tubes_have_no_umbilics() {
        let tube = helix_tube(64, 48);
        let g = evaluate(&tube, &tols());
        assert!(umbilic_scan(&g, &tols()).is_empty());
    }

    #[test]
    fn parallel_identity_at_zero() {
        let tube = helix_tube(64, 48);
        let g = evaluate(&tube, &tols());
        let p = parallel_front(&g, 0.0, &tols());
        for i in 0..g.rows() {
            for j in 0..g.m_x {
                assert_eq!(g.f[(i, j)], p.f[(i, j)]);
                assert_eq!(g.nu[(i, j)], p.nu[(i, j)]);
                assert_eq!(g.singular[(i, j)], p.singular[(i, j)]);
            }
        }
    }

    #[test]
    fn parallel_quarter_turn_collapses_to_center() {
        let tube = helix_tube(64, 48);
        let g = evaluate(&tube, &tols());
        let p = parallel_front(&g, FRAC_PI_2, &tols());
        for i in p.interior_rows() {
            for j in 0..p.m_x {
                assert!((&p.f[(i, j)] - &g.nu[(i, j)]).norm() <= 1e-12);
                assert!(p.singular[(i, j)]);
            }
        }
    }

    #[test]
    fn parallel_angle_shift_is_exact() {
        let tube = helix_tube(64, 48);
        let g = evaluate(&tube, &tols());
        let delta = 0.37;
        let p = parallel_front(&g, delta, &tols());
        for i in (0..g.rows()).step_by(11) {
            for j in (0..g.m_x).step_by(7) {
                let expect = (g.lambda[(i, j)].theta - delta).rem_euclid(PI);
                assert_relative_eq!(p.lambda[(i, j)].theta, expect, epsilon = 1e-12);
            }
        }
        // Parallels can acquire umbilic nodes where θ crosses π/2.
        let hits = umbilic_scan(&parallel_front(&g, -FRAC_PI_2 + 1e-14, &tols()), &tols());
        let _ = hits; // existence depends on ρ range; the synthetic case below pins it
        // Synthetic: rotate a node with ρ = tan(0.3) by δ = 0.3 + π/2.
        let v = PrincipalCurvatureValue::from_jets(-(0.3f64.tan()), 1.0);
        let rotated = PrincipalCurvatureValue { theta: (v.theta - (0.3 + FRAC_PI_2)).rem_euclid(PI) };
        assert!(rotated.is_umbilic(1e-10));
    }

    #[test]
    fn lift_metric_bounds() {
        let tube = helix_tube(64, 48);
        let g = evaluate(&tube, &tols());
        let lift = lift_metric(&g);
        assert!(lift.lower_bound_ok);
        assert!(lift.min_coeff_s >= 1.0 - 1e-12);
        // Great-circle tube: the lift metric equals the product metric.
        let gc = build_tube(&great_circle(4), 64, 48, &tols()).unwrap();
        let lgc = lift_metric(&evaluate(&gc, &tols()));
        assert_relative_eq!(lgc.min_coeff_s, 1.0, epsilon = 1e-12);
        assert_relative_eq!(lgc.min_coeff_t, 1.0, epsilon = 1e-12);
        // Lift metric is invariant under the parallel rotation.
        let lp = lift_metric(&parallel_front(&g, 0.9, &tols()));
        assert_relative_eq!(lp.min_coeff_s, lift.min_coeff_s, epsilon = 1e-12);
    }

    #[test]
    fn completeness_and_coorientability_of_helix_tubes() {
        let co = build_tube(
            &make_helix((5.0f64 / 2.0).sqrt(), (5.0f64 / 8.0).sqrt()).unwrap(),
            64,
            32,
            &tols(),
        )
        .unwrap();
        assert_eq!(coorientability(&co), CoOrientability::CoOrientable);
        let lift = lift_metric(&evaluate(&co, &tols()));
        let comp = completeness(&co, &lift);
        assert!(comp.complete && comp.weakly_complete);

        let non = build_tube(
            &make_helix(5.0f64.sqrt(), 5.0f64.sqrt() / 3.0).unwrap(),
            64,
            32,
            &tols(),
        )
        .unwrap();
        assert_eq!(coorientability(&non), CoOrientability::NonCoOrientable);
    }

    #[test]
    fn bishop_gauge_does_not_move_ruling_planes() {
        // Two different initial bases span the same normal plane at every s.
        let c = make_helix(2.0, 0.5).unwrap().classified(&tols());
        let mut c64 = c.clone();
        c64.samples = 64;
        let f1 = crate::curve::bishop(&c64, None, &tols()).unwrap();
        let base = crate::curve::default_normal_basis(&c64);
        let ang: f64 = 0.83;
        let rotated = vec![
            &base[0] * ang.cos() + &base[1] * ang.sin(),
            &base[0] * (-ang.sin()) + &base[1] * ang.cos(),
        ];
        let f2 = crate::curve::bishop(&c64, Some(rotated), &tols()).unwrap();
        for i in (0..f1.node_count()).step_by(53) {
            for v in [&f2.normals[0][i], &f2.normals[1][i]] {
                let p1 = v.dot(&f1.normals[0][i]);
                let p2 = v.dot(&f1.normals[1][i]);
                assert_relative_eq!(p1 * p1 + p2 * p2, 1.0, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn asymptotic_ode_along_rulings() {
        // ρ_tt + ρ = 0 with central differences in t; the sign is pinned by
        // the bounded solution family a cos t + b sin t.
        let mut hs = Vec::new();
        let mut rs = Vec::new();
        for m_x in [48usize, 96, 192] {
            let tube = helix_tube(48, m_x);
            let g = evaluate(&tube, &tols());
            let mut worst = 0.0_f64;
            for i in g.interior_rows() {
                for j in 0..g.m_x {
                    let jp = (j + 1) % g.m_x;
                    let jm = (j + g.m_x - 1) % g.m_x;
                    let rtt = (g.rho[(i, jp)] - 2.0 * g.rho[(i, j)] + g.rho[(i, jm)])
                        / (g.h_t * g.h_t);
                    worst = worst.max((rtt + g.rho[(i, j)]).abs());
                }
            }
            hs.push(g.h_t);
            rs.push(worst);
        }
        let order = crate::numerics::convergence_order(&hs, &rs);
        assert!(order >= 1.8, "order {order}, residuals {rs:?}");
        assert!(rs[2] <= 1.0 * hs[2] * hs[2] * 10.0);
    }

    #[test]
    fn holonomy_angle_matches_torsion_integral() {
        // The normal fiber rotates at rate −τ relative to the closing
        // Frenet pair, so the transport angle over a period is −τL mod 2π.
        let tube = helix_tube(64, 32);
        let alpha = tube.holonomy_angle().unwrap();
        let l = tube.curve.domain;
        let expect = -l; // τ = 1
        let d = (alpha - expect).rem_euclid(TAU);
        assert!(d.min(TAU - d) <= 1e-6, "angle {alpha} vs {expect}");
    }
}
