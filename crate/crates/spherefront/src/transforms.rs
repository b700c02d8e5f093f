//! Transformations of tube fronts: caustics (focal surfaces) and their
//! inverse, duals of ruled surfaces in `S^3`, the self-duality test, and
//! the ambient projections used for visualization.

use nalgebra::{DMatrix, DVector};

use crate::config::Tolerances;
use crate::curve::{
    frenet_at, reparametrize_arclength, PeriodInfo, SphericalCurve,
};
use crate::front::{build_tube, FrontGrid, Grid2, SampledFrontal, TubeFront, PAD_ROWS};
use crate::numerics::golden_min;
use crate::verify::cloud_diameter;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Caustic
// ---------------------------------------------------------------------------

/// Caustic of a tube: structurally, the tube whose center curve is the unit
/// tangent of the original center, reparametrized by its own arclength.
#[derive(Debug)]
pub struct Caustic {
    pub tube: TubeFront,
    /// Closure classification of the caustic's center curve.
    pub center_info: PeriodInfo,
    /// Original-parameter curvature κ_γ at each caustic grid row (ghost rows
    /// included), for the completeness-transfer bound.
    pub kappa_gamma: Vec<f64>,
}

/// Build the caustic tube. The tangent indicatrix has speed
/// `|e'|² = 1 + κ², which is asserted ≥ 1` before reparametrizing.
pub fn caustic(front: &TubeFront, tol: &Tolerances) -> Result<Caustic> {
    let e_curve = front.curve.tangent_indicatrix()?;
    for s in front.s.iter().step_by(7) {
        let sp = e_curve.velocity(*s).norm();
        if sp < 1.0 - 1e-6 {
            return Err(Error::IrregularCurve { s: *s, speed: sp });
        }
    }
    let e_hat = reparametrize_arclength(&e_curve)?;
    let tube = build_tube(&e_hat, front.m_s, front.m_x, tol)?;
    let center_info = tube
        .curve
        .period_info
        .unwrap_or_else(PeriodInfo::open);
    let kappa_gamma = (0..front.m_s + 2 * PAD_ROWS)
        .map(|i| {
            let sigma = (i as isize - PAD_ROWS as isize) as f64 * tube.h_s;
            let s = tube.curve.base_param(sigma).unwrap_or(sigma);
            (e_curve.velocity(s).norm_squared() - 1.0).max(0.0).sqrt()
        })
        .collect();
    Ok(Caustic { tube, center_info, kappa_gamma })
}

/// The pointwise focal map `(f + ρν)/√(1+ρ²)` evaluated on the input grid,
/// with ρ recovered from finite differences of the grid itself. This is
/// the independent cross-route against the structural tube: both must
/// describe the same surface, and the focal points must stay orthogonal to
/// the center tangent.
#[derive(Debug)]
pub struct CausticPointwise {
    pub fc: Grid2<DVector<f64>>,
    /// max |⟨f^C, γ'⟩| over interior nodes.
    pub orth_residual: f64,
    /// max over interior nodes and both directions of |⟨∂f^C, γ'⟩|.
    pub deriv_residual: f64,
}

pub fn caustic_pointwise(front: &TubeFront, grid: &FrontGrid) -> CausticPointwise {
    let rows = grid.rows();
    let mut fc = Grid2::fill(rows, grid.m_x, DVector::zeros(4));
    for i in 1..rows - 1 {
        let gi = i as isize - grid.pad as isize;
        let e = front.center_tangent(gi);
        for j in 0..grid.m_x {
            // ρ from the grid: f_s = −ρ e, so ρ = −⟨f_s, e⟩ with central
            // differences (O(h²), which the convergence audit measures).
            let fs = (&grid.f[(i + 1, j)] - &grid.f[(i - 1, j)]) / (2.0 * grid.h_s);
            let rho = -fs.dot(&e);
            let w = (&grid.f[(i, j)] + &grid.nu[(i, j)] * rho) / (1.0 + rho * rho).sqrt();
            fc[(i, j)] = w;
        }
    }
    let mut orth = 0.0_f64;
    let mut deriv = 0.0_f64;
    for i in grid.interior_rows() {
        let gi = i as isize - grid.pad as isize;
        let e = front.center_tangent(gi);
        for j in 0..grid.m_x {
            orth = orth.max(fc[(i, j)].dot(&e).abs());
            let ds = (&fc[(i + 1, j)] - &fc[(i - 1, j)]) / (2.0 * grid.h_s);
            let jp = (j + 1) % grid.m_x;
            let jm = (j + grid.m_x - 1) % grid.m_x;
            let dt = (&fc[(i, jp)] - &fc[(i, jm)]) / (2.0 * grid.h_t);
            deriv = deriv.max(ds.dot(&e).abs()).max(dt.dot(&e).abs());
        }
    }
    CausticPointwise { fc, orth_residual: orth, deriv_residual: deriv }
}

/// Transfer of global properties to the caustic: closure kind of the new
/// center curve and the lift-metric lower bound `1 + κ_γ² + (x·μ^C)² ≥ 1`
/// expressed in the original curve parameter.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CausticTransfer {
    pub original_kind: crate::curve::PeriodKind,
    pub caustic_kind: crate::curve::PeriodKind,
    pub kind_transferred: bool,
    pub min_lift_coefficient: f64,
    pub lift_bound_ok: bool,
}

pub fn caustic_completeness_transfer(front: &TubeFront, caus: &Caustic) -> CausticTransfer {
    let original_kind = front
        .curve
        .period_info
        .unwrap_or_else(PeriodInfo::open)
        .kind;
    let caustic_kind = caus.center_info.kind;
    let mut min_coeff = f64::INFINITY;
    for i in 0..caus.tube.m_s {
        let row = i + PAD_ROWS;
        let kappa2 = caus.kappa_gamma[row] * caus.kappa_gamma[row];
        let (mu1, mu2) = caus.tube.mu_at(i as isize);
        for &t in &caus.tube.t {
            // μ in the original parameter picks up the speed factor
            // dσ/ds = √(1+κ²).
            let x_mu_sigma = mu1 * t.cos() + mu2 * t.sin();
            let coeff = 1.0 + kappa2 + x_mu_sigma * x_mu_sigma * (1.0 + kappa2);
            min_coeff = min_coeff.min(coeff);
        }
    }
    CausticTransfer {
        original_kind,
        caustic_kind,
        kind_transferred: original_kind == caustic_kind,
        min_lift_coefficient: min_coeff,
        lift_bound_ok: min_coeff >= 1.0 - 1e-10,
    }
}

// ---------------------------------------------------------------------------
// Inverse caustic
// ---------------------------------------------------------------------------

/// Integrate a curve whose unit tangent traces the given tube's center
/// curve `E`: the system `γ' = −⟨γ, E'⟩ E` preserves both `|γ| = 1` and
/// `⟨γ, E⟩ = 0` exactly, so the caustic of the resulting tube has center
/// curve `E` again.
///
/// In the Bishop frame `{E, T, F₁, F₂}` of `E` the integral curve reduces
/// to a 3-dimensional linear flow for `γ = αT + β·F`:
/// `α' = μ·β, β_j' = −α μ_j`, with speed `−α`. Not every start stays
/// regular over a full period, so the start is chosen by maximizing the
/// minimal speed over the hemisphere `α < 0` before the ambient
/// integration runs.
pub fn inverse_caustic(front: &TubeFront, tol: &Tolerances) -> Result<TubeFront> {
    let e_curve = &front.curve;
    if !e_curve.is_arclength {
        return Err(Error::NotArclength);
    }
    let span = e_curve.domain;
    let steps = (8 * front.m_s).max(4096);
    let h = span / steps as f64;

    // Bishop data of E for the reduced flow and the start frame.
    let mut ec = e_curve.clone();
    ec.samples = steps;
    let frame = crate::curve::bishop(&ec, None, tol)?;
    let off = frame.pad;
    debug_assert_eq!(frame.steps, steps);

    // Fundamental solution of the reduced flow at every node (RK4 with
    // midpoint-averaged μ; search accuracy only).
    let mat = |m1: f64, m2: f64, v: &[f64; 3]| -> [f64; 3] {
        [m1 * v[1] + m2 * v[2], -m1 * v[0], -m2 * v[0]]
    };
    let mut phi: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut phis: Vec<[[f64; 3]; 3]> = Vec::with_capacity(steps + 1);
    phis.push(phi);
    for i in 0..steps {
        let (a0, b0) = (frame.mu[0][off + i], frame.mu[1][off + i]);
        let (a1, b1) = (frame.mu[0][off + i + 1], frame.mu[1][off + i + 1]);
        let (am, bm) = (0.5 * (a0 + a1), 0.5 * (b0 + b1));
        for col in &mut phi {
            let k1 = mat(a0, b0, col);
            let half1 = [col[0] + 0.5 * h * k1[0], col[1] + 0.5 * h * k1[1], col[2] + 0.5 * h * k1[2]];
            let k2 = mat(am, bm, &half1);
            let half2 = [col[0] + 0.5 * h * k2[0], col[1] + 0.5 * h * k2[1], col[2] + 0.5 * h * k2[2]];
            let k3 = mat(am, bm, &half2);
            let full = [col[0] + h * k3[0], col[1] + h * k3[1], col[2] + h * k3[2]];
            let k4 = mat(a1, b1, &full);
            for r in 0..3 {
                col[r] += h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
            }
        }
        phis.push(phi);
    }
    // Columns above are transported basis vectors: v(u) = Φ(u)ᵀ… keep the
    // convention explicit via a helper.
    let evolve = |p: &[[f64; 3]; 3], v: &[f64; 3]| -> [f64; 3] {
        [
            p[0][0] * v[0] + p[1][0] * v[1] + p[2][0] * v[2],
            p[0][1] * v[0] + p[1][1] * v[1] + p[2][1] * v[2],
            p[0][2] * v[0] + p[1][2] * v[1] + p[2][2] * v[2],
        ]
    };
    let score = |v: &[f64; 3]| -> f64 {
        phis.iter()
            .step_by(4)
            .map(|p| -evolve(p, v)[0])
            .fold(f64::INFINITY, f64::min)
    };
    let from_angles = |theta: f64, phi_a: f64| -> [f64; 3] {
        [-theta.cos(), theta.sin() * phi_a.cos(), theta.sin() * phi_a.sin()]
    };
    let mut best = (f64::NEG_INFINITY, 0.0_f64, 0.0_f64);
    let scan = |t_lo: f64, t_hi: f64, p_lo: f64, p_hi: f64, nt: usize, np: usize,
                best: &mut (f64, f64, f64)| {
        for it in 0..nt {
            let theta = t_lo + (t_hi - t_lo) * it as f64 / (nt - 1) as f64;
            for ip in 0..np {
                let phi_a = p_lo + (p_hi - p_lo) * ip as f64 / np as f64;
                let s = score(&from_angles(theta, phi_a));
                if s > best.0 {
                    *best = (s, theta, phi_a);
                }
            }
        }
    };
    scan(0.0, 1.5, 0.0, std::f64::consts::TAU, 31, 64, &mut best);
    scan(
        best.1 - 0.05,
        best.1 + 0.05,
        best.2 - 0.1,
        best.2 + 0.1,
        11,
        11,
        &mut best,
    );
    if best.0 <= 0.02 {
        return Err(Error::IrregularCurve { s: 0.0, speed: best.0 });
    }
    let v0 = from_angles(best.1, best.2);
    let mut gamma: DVector<f64> = &frame.e[off] * v0[0]
        + &frame.normals[0][off] * v0[1]
        + &frame.normals[1][off] * v0[2];
    gamma /= gamma.norm();

    // Exact-right-hand-side ambient integration from the selected start.
    let ep_at = |u: f64| e_curve.velocity(u);
    let rhs = |u: f64, g: &DVector<f64>| -> DVector<f64> {
        e_curve.position(u) * (-g.dot(&ep_at(u)))
    };
    let mut samples = Vec::with_capacity(steps);
    samples.push(gamma.clone());
    for i in 0..steps {
        let u = i as f64 * h;
        let k1 = rhs(u, &gamma);
        let k2 = rhs(u + h / 2.0, &(&gamma + &k1 * (h / 2.0)));
        let k3 = rhs(u + h / 2.0, &(&gamma + &k2 * (h / 2.0)));
        let k4 = rhs(u + h, &(&gamma + &k3 * h));
        gamma += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let drift = (gamma.norm() - 1.0).abs();
        if drift > tol.sphere_drift {
            return Err(Error::SphereDrift(drift));
        }
        gamma /= gamma.norm();
        let speed = -gamma.dot(&ep_at(u + h));
        if speed <= 1e-6 {
            return Err(Error::IrregularCurve { s: u + h, speed });
        }
        if i + 1 < steps {
            samples.push(gamma.clone());
        }
    }
    let closed = (samples[0].clone() - &gamma).norm() < 1e-6;
    let curve = SphericalCurve::from_samples(&samples, span, closed)?;
    let curve = reparametrize_arclength(&curve)?;
    build_tube(&curve, front.m_s, front.m_x, tol)
}

// ---------------------------------------------------------------------------
// Dual (surface case)
// ---------------------------------------------------------------------------

/// The dual of a tube over γ: the ruled surface
/// `f^#(s,t) = cos t·γ(s) + sin t·γ'(s)`, whose center curve is the
/// binormal of γ. Duals need not be fronts: the Legendrian stack
/// degenerates on the rulings `sin t = 0` wherever τ = 0.
#[derive(Debug)]
pub struct DualSurface {
    pub frontal: SampledFrontal,
    pub pad: usize,
    pub m_s: usize,
    pub m_x: usize,
    pub h_s: f64,
    pub h_t: f64,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    /// Binormal (the dual's center curve) for every stored row.
    pub center: Vec<DVector<f64>>,
    pub tau: Vec<f64>,
    pub kappa: Vec<f64>,
}

pub fn dual(front: &TubeFront, tol: &Tolerances) -> Result<DualSurface> {
    if front.curve.dim() != 4 {
        return Err(Error::NeedsSurfaceCase(front.curve.dim() - 2));
    }
    let rows = front.m_s + 2 * PAD_ROWS;
    let cols = front.m_x;
    let mut f = Grid2::fill(rows, cols, DVector::zeros(4));
    let mut nu = Grid2::fill(rows, cols, DVector::zeros(4));
    let mut center = Vec::with_capacity(rows);
    let mut tau = Vec::with_capacity(rows);
    let mut kappa = Vec::with_capacity(rows);
    let mut undefined = 0usize;
    let mut s_vals = Vec::with_capacity(rows);
    for i in 0..rows {
        let s = (i as isize - PAD_ROWS as isize) as f64 * front.h_s;
        s_vals.push(s);
        let fp = frenet_at(&front.curve, s, tol.kappa_min);
        let b = match (&fp.binormal, fp.tau) {
            (Some(b), Some(_)) => b.clone(),
            _ => {
                undefined += 1;
                DVector::zeros(4)
            }
        };
        center.push(b.clone());
        tau.push(fp.tau.unwrap_or(f64::NAN));
        kappa.push(fp.kappa);
        for (j, &t) in front.t.iter().enumerate() {
            f[(i, j)] = &fp.gamma * t.cos() + &fp.e * t.sin();
            nu[(i, j)] = b.clone();
        }
    }
    if undefined > 0 {
        return Err(Error::TorsionUndefined(undefined));
    }
    Ok(DualSurface {
        frontal: SampledFrontal {
            ambient: crate::front::AmbientKind::Sphere,
            nx: rows,
            ny: cols,
            h1: front.h_s,
            h2: front.h_t,
            f,
            nu,
            wrap2: true,
            interior1: (PAD_ROWS, PAD_ROWS + front.m_s),
        },
        pad: PAD_ROWS,
        m_s: front.m_s,
        m_x: front.m_x,
        h_s: front.h_s,
        h_t: front.h_t,
        s: s_vals,
        t: front.t.clone(),
        center,
        tau,
        kappa,
    })
}

/// The binormal of the center curve as an arclength curve of its own,
/// sampled densely enough that spline interpolation keeps the off-sphere
/// drift near 1e-9. Errors when the curvature dips below κ_min.
pub fn binormal_curve(front: &TubeFront, tol: &Tolerances) -> Result<SphericalCurve> {
    let m = (4 * front.m_s).max(2048);
    let h = front.curve.domain / m as f64;
    let mut samples = Vec::with_capacity(m);
    for i in 0..m {
        let fp = frenet_at(&front.curve, i as f64 * h, tol.kappa_min);
        match fp.binormal {
            Some(b) => samples.push(b),
            None => return Err(Error::TorsionUndefined(1)),
        }
    }
    let closed = front
        .curve
        .period_info
        .map(|p| p.is_closed())
        .unwrap_or(false);
    let c = SphericalCurve::from_samples(&samples, front.curve.domain, closed)?;
    reparametrize_arclength(&c)
}

/// Max residuals of the orthogonality of the dual to its center curve:
/// `⟨f^#, b⟩` exactly, `⟨∂f^#, b⟩` by central differences.
pub fn dual_center_residuals(d: &DualSurface) -> (f64, f64) {
    let fr = &d.frontal;
    let mut pointwise = 0.0_f64;
    let mut deriv = 0.0_f64;
    for i in fr.interior1.0..fr.interior1.1 {
        let b = &d.center[i];
        for j in 0..fr.ny {
            pointwise = pointwise.max(fr.f[(i, j)].dot(b).abs());
            deriv = deriv
                .max(fr.central(&fr.f, i, j, 0).dot(b).abs())
                .max(fr.central(&fr.f, i, j, 1).dot(b).abs());
        }
    }
    (pointwise, deriv)
}

// ---------------------------------------------------------------------------
// Tube-to-tube alignment and the self-duality test
// ---------------------------------------------------------------------------

/// Result of aligning two tube grids over the orthogonal group with a
/// search over row shift, continuous ruling-angle offset, and traversal
/// reversals (the ruling offset is a free Bishop gauge, so it must be a
/// search variable).
#[derive(Debug, Clone, serde::Serialize)]
pub struct TubeAlignment {
    pub rms: f64,
    pub diameter: f64,
    pub row_shift: usize,
    pub angle_offset: f64,
    pub reversed_s: bool,
    pub reversed_t: bool,
}

pub fn align_tubes(a: &TubeFront, b: &TubeFront, _tol: &Tolerances) -> Result<TubeAlignment> {
    let stride_s = (a.m_s / 48).max(1);
    let stride_t = (a.m_x / 16).max(1);
    let src: Vec<DVector<f64>> = (0..a.m_s)
        .step_by(stride_s)
        .flat_map(|i| {
            a.t.iter()
                .step_by(stride_t)
                .map(move |&t| (i, t))
        })
        .map(|(i, t)| a.position(i as isize, t))
        .collect();
    let diameter = cloud_diameter(&src);
    let rows: Vec<usize> = (0..a.m_s).step_by(stride_s).collect();
    let angles: Vec<f64> = a.t.iter().step_by(stride_t).cloned().collect();

    let eval = |ks: usize, dt: f64, rev_s: bool, rev_t: bool| -> f64 {
        let mut dst = Vec::with_capacity(src.len());
        for &i in &rows {
            let gi = if rev_s {
                (b.m_s as isize) - (i as isize) // mod handled by frame padding? keep in range
            } else {
                i as isize
            };
            let gi = ((gi + ks as isize) % b.m_s as isize + b.m_s as isize) % b.m_s as isize;
            for &t in &angles {
                let tt = if rev_t { dt - t } else { dt + t };
                dst.push(b.position(gi, tt));
            }
        }
        match crate::ambient::align_rigid(&src, &dst) {
            Ok((_, rms)) => rms,
            Err(_) => f64::INFINITY,
        }
    };

    let shift_step = (a.m_s / 32).max(1);
    let angle_step = std::f64::consts::TAU / 16.0;
    let mut best = (f64::INFINITY, 0usize, 0.0f64, false, false);
    for rev_s in [false, true] {
        for rev_t in [false, true] {
            for ks in (0..a.m_s).step_by(shift_step) {
                for ai in 0..16 {
                    let dt = ai as f64 * angle_step;
                    let rms = eval(ks, dt, rev_s, rev_t);
                    if rms < best.0 {
                        best = (rms, ks, dt, rev_s, rev_t);
                    }
                }
            }
        }
    }
    // Refine the continuous angle offset around the best candidate.
    let (_, ks, dt0, rev_s, rev_t) = best;
    let refine = |dt: f64| eval(ks, dt, rev_s, rev_t);
    let dt = golden_min(&refine, dt0 - angle_step, dt0 + angle_step, 1e-10);
    let rms = refine(dt);
    Ok(TubeAlignment {
        rms,
        diameter,
        row_shift: ks,
        angle_offset: dt.rem_euclid(std::f64::consts::TAU),
        reversed_s: rev_s,
        reversed_t: rev_t,
    })
}

/// Verdict of the self-duality test: the τ-criterion (max ||τ|−1|) and the
/// rigid alignment of the tube against its dual must agree.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SelfDuality {
    pub is_self_dual: bool,
    pub tau_deviation: f64,
    pub alignment_rms: f64,
    pub diameter: f64,
    pub tau_verdict: bool,
    pub alignment_verdict: bool,
}

/// Test whether a tube is congruent to its dual. The dual surface is the
/// tube over the binormal curve (its ruled parametrization carries an
/// s-dependent gauge drift, so alignment goes through the Bishop-framed
/// tube over the same center).
pub fn self_dual_test(front: &TubeFront, tol: &Tolerances) -> Result<SelfDuality> {
    let d = dual(front, tol)?;
    let mut tau_dev = 0.0_f64;
    for i in d.pad..d.pad + d.m_s {
        tau_dev = tau_dev.max((d.tau[i].abs() - 1.0).abs());
    }
    // Tube over the binormal curve = the dual as a set.
    let b_curve = binormal_curve(front, tol)?;
    let b_tube = build_tube(&b_curve, front.m_s, front.m_x, tol)?;
    let alignment = align_tubes(front, &b_tube, tol)?;

    let tau_verdict = tau_dev <= tol.tau_unit;
    let alignment_verdict = alignment.rms <= tol.congruence_pass * alignment.diameter;
    Ok(SelfDuality {
        is_self_dual: tau_verdict && alignment_verdict,
        tau_deviation: tau_dev,
        alignment_rms: alignment.rms,
        diameter: alignment.diameter,
        tau_verdict,
        alignment_verdict,
    })
}

/// Localization of the dual's Legendrian breakdown: the stacked
/// differential must degenerate exactly near the zeros of τ (on the
/// rulings through ±γ), so every flagged node lies within `window` of a
/// τ-root and every root attracts at least one flag.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DualDegeneracy {
    pub tau_roots: Vec<f64>,
    pub flagged_nodes: usize,
    pub window: f64,
    pub flags_within_window: bool,
    pub every_root_flagged: bool,
}

pub fn dual_degeneracy_report(
    d: &DualSurface,
    tol: &Tolerances,
) -> DualDegeneracy {
    // τ-roots from sign changes between interior rows, refined by secant.
    let mut roots = Vec::new();
    let lo = d.pad;
    let hi = d.pad + d.m_s;
    for i in lo..hi {
        let (t0, t1) = (d.tau[i], d.tau[i + 1]);
        if t0 == 0.0 {
            roots.push(d.s[i]);
        } else if t0 * t1 < 0.0 {
            roots.push(d.s[i] - t0 * d.h_s / (t1 - t0));
        }
    }
    let rep = crate::verify::front_criterion(&d.frontal, tol);
    let window = 3.0 * d.h_s;
    let period = d.m_s as f64 * d.h_s;
    let dist_to_root = |s: f64| -> f64 {
        roots
            .iter()
            .map(|r| {
                let raw = (s - r).rem_euclid(period);
                raw.min(period - raw)
            })
            .fold(f64::INFINITY, f64::min)
    };
    let flags_within_window = rep
        .flagged
        .iter()
        .all(|(i, _)| dist_to_root(d.s[*i]) <= window);
    let every_root_flagged = roots.iter().all(|r| {
        rep.flagged
            .iter()
            .any(|(i, _)| {
                let raw = (d.s[*i] - r).rem_euclid(period);
                raw.min(period - raw) <= window
            })
    });
    DualDegeneracy {
        tau_roots: roots,
        flagged_nodes: rep.flagged.len(),
        window,
        flags_within_window,
        every_root_flagged,
    }
}

// ---------------------------------------------------------------------------
// Projections
// ---------------------------------------------------------------------------

/// Stereographic projection from `(0, −1, 0, 0)`:
/// `(x₁, x₂, x₃, x₄) ↦ (x₁, x₃, x₄)/(1 + x₂)`. Returns `None` inside the
/// excluded zone `x₂ ≤ −1 + ε`.
pub fn stereographic_point(p: &DVector<f64>) -> Option<[f64; 3]> {
    let w = 1.0 + p[1];
    if w <= 1e-6 {
        return None;
    }
    Some([p[0] / w, p[2] / w, p[3] / w])
}

/// Algebraic inverse of [`stereographic_point`].
pub fn stereographic_inverse(y: &[f64; 3]) -> DVector<f64> {
    let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    let x2 = (1.0 - r2) / (1.0 + r2);
    let w = 1.0 + x2;
    DVector::from_vec(vec![y[0] * w, x2, y[1] * w, y[2] * w])
}

/// Central projection of the open upper hemisphere `x₄ > 0` onto the
/// tangent space: `x ↦ (x₁, x₂, x₃)/x₄`.
pub fn central_point(p: &DVector<f64>) -> Option<[f64; 3]> {
    if p[3] <= 1e-6 {
        return None;
    }
    Some([p[0] / p[3], p[1] / p[3], p[2] / p[3]])
}

/// Inverse of the central projection: `v ↦ (v, 1)/√(1+|v|²)`.
pub fn lift_klein(v: &[f64; 3]) -> DVector<f64> {
    let n = (1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    DVector::from_vec(vec![v[0] / n, v[1] / n, v[2] / n, 1.0 / n])
}

/// Apply an ambient orthogonal map to a cloud (test/report helper).
pub fn apply_matrix(m: &DMatrix<f64>, pts: &[DVector<f64>]) -> Vec<DVector<f64>> {
    pts.iter().map(|p| m * p).collect()
}
