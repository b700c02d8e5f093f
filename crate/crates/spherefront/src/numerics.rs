//! Shared numerical plumbing: truncated Taylor jets, finite-difference
//! stencils, uniform cubic splines, scalar root/minimum search, and the
//! convergence-order estimator used by the verification reports.

/// Value and first four derivatives of a scalar function at a point.
///
/// Jets propagate exact derivatives through curve formulas, so frame ODEs
/// and reparametrizations never fall back on differencing analytic input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    /// `d[k]` is the k-th derivative; `d[0]` is the value.
    pub d: [f64; 5],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Jet { d: [v, 0.0, 0.0, 0.0, 0.0] }
    }

    /// The identity function evaluated at `v`.
    pub fn variable(v: f64) -> Self {
        Jet { d: [v, 1.0, 0.0, 0.0, 0.0] }
    }

    pub fn value(&self) -> f64 {
        self.d[0]
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut d = self.d;
        for x in &mut d {
            *x *= c;
        }
        Jet { d }
    }

    /// Chain rule through an outer function given by its derivatives
    /// `g[k] = g^(k)(u)` at `u = self.value()` (Faà di Bruno to order 4).
    pub fn compose(&self, g: [f64; 5]) -> Self {
        let [_, u1, u2, u3, u4] = self.d;
        Jet {
            d: [
                g[0],
                g[1] * u1,
                g[2] * u1 * u1 + g[1] * u2,
                g[3] * u1.powi(3) + 3.0 * g[2] * u1 * u2 + g[1] * u3,
                g[4] * u1.powi(4)
                    + 6.0 * g[3] * u1 * u1 * u2
                    + g[2] * (4.0 * u1 * u3 + 3.0 * u2 * u2)
                    + g[1] * u4,
            ],
        }
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.d[0].sin_cos();
        self.compose([s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.d[0].sin_cos();
        self.compose([c, -s, -c, s, c])
    }

    pub fn sqrt(&self) -> Self {
        let r = self.d[0].sqrt();
        self.compose([
            r,
            0.5 / r,
            -0.25 / (r * r * r),
            0.375 / r.powi(5),
            -0.9375 / r.powi(7),
        ])
    }

    pub fn recip(&self) -> Self {
        let u = self.d[0];
        self.compose([
            1.0 / u,
            -1.0 / u.powi(2),
            2.0 / u.powi(3),
            -6.0 / u.powi(4),
            24.0 / u.powi(5),
        ])
    }

    /// Derivatives of the inverse reparametrization `t(s)` where `ds/dt = v`
    /// and `speed` holds `[v, v', v'', v''']` with respect to `t`.
    ///
    /// Returns `[t0, t', t'', t''', t'''']` with respect to `s`.
    pub fn invert_speed(t0: f64, speed: [f64; 4]) -> [f64; 5] {
        let [v, v1, v2, v3] = speed;
        [
            t0,
            1.0 / v,
            -v1 / v.powi(3),
            (3.0 * v1 * v1 - v * v2) / v.powi(5),
            (10.0 * v * v1 * v2 - v * v * v3 - 15.0 * v1.powi(3)) / v.powi(7),
        ]
    }
}

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut d = self.d;
        for k in 0..5 {
            d[k] += o.d[k];
        }
        Jet { d }
    }
}

impl std::ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let mut d = self.d;
        for k in 0..5 {
            d[k] -= o.d[k];
        }
        Jet { d }
    }
}

impl std::ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let f = self.d;
        let g = o.d;
        Jet {
            d: [
                f[0] * g[0],
                f[1] * g[0] + f[0] * g[1],
                f[2] * g[0] + 2.0 * f[1] * g[1] + f[0] * g[2],
                f[3] * g[0] + 3.0 * f[2] * g[1] + 3.0 * f[1] * g[2] + f[0] * g[3],
                f[4] * g[0] + 4.0 * f[3] * g[1] + 6.0 * f[2] * g[2] + 4.0 * f[1] * g[3]
                    + f[0] * g[4],
            ],
        }
    }
}

impl std::ops::Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

/// Reparametrize a jet: given the jet of `γ` in `t` and the derivatives
/// `[t0, t', t'', t''', t'''']` of `t(s)`, return the jet of `γ∘t` in `s`.
pub fn rebase_jet(gamma_in_t: &Jet, t_of_s: [f64; 5]) -> Jet {
    let inner = Jet {
        d: [t_of_s[0], t_of_s[1], t_of_s[2], t_of_s[3], t_of_s[4]],
    };
    inner.compose(gamma_in_t.d)
}

// ---------------------------------------------------------------------------
// Finite-difference stencils on function evaluations
// ---------------------------------------------------------------------------

/// First three derivatives of `f` at `x` from centered 7-point stencils.
///
/// Orders: O(h^6) for f', f''; O(h^4) for f'''. `h ≈ 5e-3` balances
/// truncation against rounding for trigonometric-scale curves.
pub fn stencil_derivs3(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> [f64; 3] {
    let v: Vec<f64> = (-3..=3).map(|k| f(x + k as f64 * h)).collect();
    let d1 = (-v[0] + 9.0 * v[1] - 45.0 * v[2] + 45.0 * v[4] - 9.0 * v[5] + v[6]) / (60.0 * h);
    let d2 = (2.0 * v[0] - 27.0 * v[1] + 270.0 * v[2] - 490.0 * v[3] + 270.0 * v[4]
        - 27.0 * v[5]
        + 2.0 * v[6])
        / (180.0 * h * h);
    let d3 = (v[0] - 8.0 * v[1] + 13.0 * v[2] - 13.0 * v[4] + 8.0 * v[5] - v[6])
        / (8.0 * h * h * h);
    [d1, d2, d3]
}

/// Central first derivative of grid samples, O(h²); index arithmetic wraps
/// when `periodic`, otherwise uses one-sided O(h²) stencils at the ends.
pub fn grid_deriv(values: &[f64], h: f64, periodic: bool) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        out[i] = if periodic {
            let ip = (i + 1) % n;
            let im = (i + n - 1) % n;
            (values[ip] - values[im]) / (2.0 * h)
        } else if i == 0 {
            (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
        } else if i == n - 1 {
            (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h)
        } else {
            (values[i + 1] - values[i - 1]) / (2.0 * h)
        };
    }
    out
}

/// 5-point central first-derivative weights, O(h^4): `w·[f(-2h)..f(2h)] / h`.
pub const CENTRAL5_D1: [f64; 5] = [
    1.0 / 12.0,
    -8.0 / 12.0,
    0.0,
    8.0 / 12.0,
    -1.0 / 12.0,
];

// ---------------------------------------------------------------------------
// Uniform cubic splines
// ---------------------------------------------------------------------------

/// Cubic spline over uniformly spaced knots `x_i = x0 + i·h`.
///
/// `periodic` splines treat the sample list as one full period: the last
/// interval joins `y[n-1]` back to `y[0]` and evaluation wraps. Open
/// splines use not-a-knot ends (a hard second-derivative zero at the ends
/// would poison curvature data there).
#[derive(Debug, Clone)]
pub struct UniformSpline {
    x0: f64,
    h: f64,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
    periodic: bool,
}

impl UniformSpline {
    pub fn open(x0: f64, h: f64, y: Vec<f64>) -> Self {
        assert!(y.len() >= 6, "spline needs at least 6 samples");
        let n = y.len();
        let rhs_at = |i: usize| 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
        let mut m = vec![0.0; n];
        // Not-a-knot on uniform knots decouples the first and last interior
        // moments: the row m₀+4m₁+m₂ with m₀ = 2m₁−m₂ gives 6m₁ = rhs₁.
        m[1] = rhs_at(1) / 6.0;
        m[n - 2] = rhs_at(n - 2) / 6.0;
        let k = n - 4;
        if k > 0 {
            let mut rhs: Vec<f64> = (2..n - 2).map(rhs_at).collect();
            rhs[0] -= m[1];
            rhs[k - 1] -= m[n - 2];
            let sub = vec![1.0; k];
            let diag = vec![4.0; k];
            let sup = vec![1.0; k];
            let sol = solve_tridiagonal(&sub, &diag, &sup, &rhs);
            m[2..n - 2].copy_from_slice(&sol);
        }
        m[0] = 2.0 * m[1] - m[2];
        m[n - 1] = 2.0 * m[n - 2] - m[n - 3];
        UniformSpline { x0, h, y, m, periodic: false }
    }

    pub fn periodic(x0: f64, h: f64, y: Vec<f64>) -> Self {
        assert!(y.len() >= 4, "spline needs at least 4 samples");
        let n = y.len();
        let wrap = |i: usize| y[i % n];
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            let prev = wrap((i + n - 1) % n);
            let next = wrap((i + 1) % n);
            rhs[i] = 6.0 * (next - 2.0 * y[i] + prev) / (h * h);
        }
        let m = solve_cyclic_tridiagonal(1.0, 4.0, 1.0, &rhs);
        UniformSpline { x0, h, y, m, periodic: true }
    }

    fn locate(&self, x: f64) -> (usize, usize, f64) {
        let n = self.y.len();
        if self.periodic {
            let period = n as f64 * self.h;
            let mut u = (x - self.x0).rem_euclid(period);
            if u >= period {
                u = 0.0;
            }
            let i = ((u / self.h) as usize).min(n - 1);
            ((i) % n, (i + 1) % n, u - i as f64 * self.h)
        } else {
            let u = x - self.x0;
            let i = ((u / self.h).floor() as isize).clamp(0, n as isize - 2) as usize;
            (i, i + 1, u - i as f64 * self.h)
        }
    }

    /// Value and first three derivatives (the third is piecewise constant).
    pub fn jet(&self, x: f64) -> Jet {
        let (i, j, t) = self.locate(x);
        let h = self.h;
        let (yi, yj, mi, mj) = (self.y[i], self.y[j], self.m[i], self.m[j]);
        let a = (mj - mi) / (6.0 * h);
        let b = mi / 2.0;
        let c = (yj - yi) / h - h * (2.0 * mi + mj) / 6.0;
        Jet {
            d: [
                ((a * t + b) * t + c) * t + yi,
                (3.0 * a * t + 2.0 * b) * t + c,
                6.0 * a * t + 2.0 * b,
                6.0 * a,
                0.0,
            ],
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.jet(x).value()
    }
}

/// Thomas algorithm for a tridiagonal system.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let w = diag[i] - sub[i] * c[i - 1];
        c[i] = if i < n - 1 { sup[i] / w } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / w;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Constant-coefficient cyclic tridiagonal solve via Sherman–Morrison.
pub fn solve_cyclic_tridiagonal(sub: f64, diag: f64, sup: f64, rhs: &[f64]) -> Vec<f64> {
    let n = rhs.len();
    assert!(n >= 3);
    let gamma = -diag;
    let mut dmod = vec![diag; n];
    dmod[0] = diag - gamma;
    dmod[n - 1] = diag - sub * sup / gamma;
    let subs = vec![sub; n];
    let sups = vec![sup; n];
    let y = solve_tridiagonal(&subs, &dmod, &sups, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = sub;
    let z = solve_tridiagonal(&subs, &dmod, &sups, &u);
    let vy = y[0] + sup / gamma * y[n - 1];
    let vz = z[0] + sup / gamma * z[n - 1];
    let factor = vy / (1.0 + vz);
    (0..n).map(|i| y[i] - factor * z[i]).collect()
}

// ---------------------------------------------------------------------------
// Scalar search
// ---------------------------------------------------------------------------

/// Bisection on a bracketing interval; assumes a sign change.
pub fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (flo > 0.0) == (fm > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization on `[lo, hi]`.
pub fn golden_min(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INVPHI * (hi - lo);
    let mut d = lo + INVPHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    while hi - lo > tol {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INVPHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INVPHI * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Least-squares slope of log(residual) against log(h).
///
/// Residuals at machine floor would corrupt the fit; the caller should
/// check `all_above_floor` first.
pub fn convergence_order(hs: &[f64], residuals: &[f64]) -> f64 {
    assert_eq!(hs.len(), residuals.len());
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.max(1e-300).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// True when every residual is above the rounding floor, so a measured
/// order is meaningful.
pub fn all_above_floor(residuals: &[f64], floor: f64) -> bool {
    residuals.iter().all(|r| *r > floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn jet_of(f: impl Fn(Jet) -> Jet, x: f64) -> Jet {
        f(Jet::variable(x))
    }

    #[test]
    fn jet_matches_hand_derivatives() {
        // f(x) = sin(x) * cos(2x) at x = 0.7, derivatives from closed form.
        let x = 0.7_f64;
        let j = jet_of(|t| t.sin() * t.scale(2.0).cos(), x);
        let f = x.sin() * (2.0 * x).cos();
        let f1 = x.cos() * (2.0 * x).cos() - 2.0 * x.sin() * (2.0 * x).sin();
        assert_relative_eq!(j.d[0], f, epsilon = 1e-14);
        assert_relative_eq!(j.d[1], f1, epsilon = 1e-13);
        // Cross-check d2..d4 against stencils of the d1 jet.
        let g = |x: f64| jet_of(|t| t.sin() * t.scale(2.0).cos(), x).d[1];
        let d = stencil_derivs3(&g, x, 4e-3);
        assert_relative_eq!(j.d[2], d[0], epsilon = 1e-9);
        assert_relative_eq!(j.d[3], d[1], epsilon = 1e-7);
        assert_relative_eq!(j.d[4], d[2], epsilon = 1e-4);
    }

    #[test]
    fn jet_division_and_sqrt() {
        let x = 0.37_f64;
        let j = jet_of(|t| (t.sin() + Jet::constant(2.0)).sqrt() / t.cos(), x);
        let f = |x: f64| (x.sin() + 2.0).sqrt() / x.cos();
        let d = stencil_derivs3(&f, x, 4e-3);
        assert_relative_eq!(j.d[0], f(x), epsilon = 1e-14);
        assert_relative_eq!(j.d[1], d[0], epsilon = 1e-10);
        assert_relative_eq!(j.d[2], d[1], epsilon = 1e-8);
        assert_relative_eq!(j.d[3], d[2], epsilon = 1e-5);
    }

    #[test]
    fn invert_speed_matches_numeric_inverse() {
        // s(t) = t + 0.3 sin t  ⇒ v(t) = 1 + 0.3 cos t.
        let t0 = 0.9_f64;
        let v = |t: f64| 1.0 + 0.3 * t.cos();
        let speed = [v(t0), -0.3 * t0.sin(), -0.3 * t0.cos(), 0.3 * t0.sin()];
        let inv = Jet::invert_speed(t0, speed);
        // Numeric t(s) by Newton, then stencil derivatives.
        let s_of_t = |t: f64| t + 0.3 * t.sin();
        let s0 = s_of_t(t0);
        let t_of_s = |s: f64| {
            let mut t = s;
            for _ in 0..60 {
                t -= (s_of_t(t) - s) / v(t);
            }
            t
        };
        let d = stencil_derivs3(&t_of_s, s0, 1e-3);
        assert_relative_eq!(inv[1], d[0], epsilon = 1e-10);
        assert_relative_eq!(inv[2], d[1], epsilon = 1e-8);
        assert_relative_eq!(inv[3], d[2], epsilon = 1e-5);
    }

    #[test]
    fn open_spline_reproduces_smooth_function() {
        let n = 200;
        let h = 0.01;
        let y: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
        let sp = UniformSpline::open(0.0, h, y);
        for &x in &[0.305, 1.0011, 1.5] {
            assert_relative_eq!(sp.value(x), x.sin(), epsilon = 1e-8);
            assert_relative_eq!(sp.jet(x).d[1], x.cos(), epsilon = 1e-6);
        }
        // Not-a-knot ends keep the second derivative honest at the margins.
        assert_relative_eq!(sp.jet(0.003).d[2], -(0.003f64).sin(), epsilon = 1e-4);
        let xe = (n - 1) as f64 * h - 0.003;
        assert_relative_eq!(sp.jet(xe).d[2], -xe.sin(), epsilon = 1e-4);
    }

    #[test]
    fn periodic_spline_wraps() {
        let n = 256;
        let h = std::f64::consts::TAU / n as f64;
        let y: Vec<f64> = (0..n).map(|i| (i as f64 * h).cos()).collect();
        let sp = UniformSpline::periodic(0.0, h, y);
        for &x in &[-0.3, 0.05, 6.2, 12.9] {
            assert_relative_eq!(sp.value(x), x.cos(), epsilon = 1e-8);
            assert_relative_eq!(sp.jet(x).d[1], -x.sin(), epsilon = 1e-6);
            assert_relative_eq!(sp.jet(x).d[2], -x.cos(), epsilon = 1e-4);
        }
    }

    #[test]
    fn cyclic_tridiagonal_solves() {
        let n = 7;
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.5).collect();
        let x = solve_cyclic_tridiagonal(1.0, 4.0, 1.0, &rhs);
        for i in 0..n {
            let lhs = x[(i + n - 1) % n] + 4.0 * x[i] + x[(i + 1) % n];
            assert_relative_eq!(lhs, rhs[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn convergence_order_of_quadratic_residuals() {
        let hs = [0.1, 0.05, 0.025];
        let rs: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        let p = convergence_order(&hs, &rs);
        assert_relative_eq!(p, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn bisect_and_golden() {
        let root = bisect(&|x: f64| x.cos(), 1.0, 2.0, 1e-13);
        assert_relative_eq!(root, std::f64::consts::FRAC_PI_2, epsilon = 1e-11);
        let min = golden_min(&|x: f64| (x - 0.7).powi(2), 0.0, 2.0, 1e-10);
        assert_relative_eq!(min, 0.7, epsilon = 1e-8);
    }
}
