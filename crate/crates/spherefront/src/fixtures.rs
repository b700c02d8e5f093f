//! Named reference objects used by the verification battery, the CLI, and
//! the test suite: helix presets, a closed curve with sign-changing torsion,
//! and the sampled frontal fixtures (flat disk image of the sphere, its
//! hyperbolic analogue, small and great subspheres).

use nalgebra::DVector;

use crate::config::Tolerances;
use crate::curve::{
    make_helix, make_helix_kappa_tau, reparametrize_arclength, SphericalCurve,
};
use crate::front::{AmbientKind, Grid2, SampledFrontal};
use crate::numerics::Jet;
use crate::{Error, Result};

/// Compact co-orientable tube example: helix with (κ, τ) = (3/4, 5/4).
pub fn co_orientable_helix() -> Result<SphericalCurve> {
    make_helix_kappa_tau(0.75, 1.25)
}

/// Non-co-orientable tube example: helix with (κ, τ) = (4/3, 5/3), whose
/// center curve is antiperiodic.
pub fn non_co_orientable_helix() -> Result<SphericalCurve> {
    make_helix_kappa_tau(4.0 / 3.0, 5.0 / 3.0)
}

/// Helix with τ ≡ 1 — the self-dual tube.
pub fn self_dual_helix() -> Result<SphericalCurve> {
    make_helix(2.0, 0.5)
}

/// Closed curve whose torsion changes sign twice, used to exhibit dual
/// surfaces that are not fronts. The normalized loop
/// `(cos u, sin u, 0.4 cos 2u, 0.25 cos 3u)/|·|` keeps κ ∈ [0.25, 2.4]
/// while τ sweeps ±6.6 with zeros of slope ≈ ∓2.85; the torsion profile is
/// measured by the tests, not assumed.
pub fn tau_crossing_curve() -> Result<SphericalCurve> {
    let raw = SphericalCurve::from_analytic(4, std::f64::consts::TAU, 1024, false, |u| {
        let t = Jet::variable(u);
        let v = [
            t.cos(),
            t.sin(),
            t.scale(2.0).cos().scale(0.4),
            t.scale(3.0).cos().scale(0.25),
        ];
        let norm2 = v.iter().fold(Jet::constant(0.0), |acc, c| acc + *c * *c);
        let inv = norm2.sqrt().recip();
        v.iter().map(|c| *c * inv).collect()
    });
    let curve = reparametrize_arclength(&raw)?;
    Ok(curve.classified(&Tolerances::default()))
}

// ---------------------------------------------------------------------------
// Pointwise frontal maps
// ---------------------------------------------------------------------------

fn sphere_point(theta: f64, phi: f64) -> DVector<f64> {
    DVector::from_vec(vec![
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ])
}

/// Orthogonal projection of the 2-sphere onto its equatorial disk,
/// `x ↦ (x₁, x₂, 0)`, with constant unit normal `(0, 0, 1)`. A frontal that
/// is not a front: along the equator both `df` and `dν` kill the meridian
/// direction.
pub fn flat_disk_map(x: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    (
        DVector::from_vec(vec![x[0], x[1], 0.0]),
        DVector::from_vec(vec![0.0, 0.0, 1.0]),
    )
}

/// Hyperbolic analogue of the flat disk: the sphere is squeezed into the
/// radius-1/2 equatorial disk of the ball model and pushed to the
/// hyperboloid by `y ↦ (1+|y|², 2y)/(1−|y|²)`. The image lies in the
/// totally geodesic slice `x₄ = 0`, so the unit normal is constant.
pub fn hyperbolic_disk_map(x: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    let q = (x[0] * x[0] + x[1] * x[1]) / 4.0;
    let denom = 1.0 - q;
    (
        DVector::from_vec(vec![(1.0 + q) / denom, x[0] / denom, x[1] / denom, 0.0]),
        DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0]),
    )
}

/// Totally geodesic 2-sphere `S³ ∩ {x₄ = 0}` with constant normal.
pub fn totally_geodesic_map(x: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    (
        DVector::from_vec(vec![x[0], x[1], x[2], 0.0]),
        DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0]),
    )
}

/// Geodesic sphere of radius `r < π/2` about the pole: `(sin r·x, cos r)`
/// with normal `(cos r·x, −sin r)`. Its normal map has rank 2 — the
/// negative control for the rank and curvature checks.
pub fn small_sphere_map(r: f64, x: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    (
        DVector::from_vec(vec![r.sin() * x[0], r.sin() * x[1], r.sin() * x[2], r.cos()]),
        DVector::from_vec(vec![r.cos() * x[0], r.cos() * x[1], r.cos() * x[2], -r.sin()]),
    )
}

// ---------------------------------------------------------------------------
// Sampled builders
// ---------------------------------------------------------------------------

/// Sample a pointwise map over a polar grid on S² (poles excluded so the
/// coordinate chart stays regular). Rows are θ, columns are the periodic φ.
pub fn sample_polar(
    ambient: AmbientKind,
    dim: usize,
    n_theta: usize,
    n_phi: usize,
    map: &dyn Fn(&DVector<f64>) -> (DVector<f64>, DVector<f64>),
) -> SampledFrontal {
    let margin = 0.35_f64;
    let h1 = (std::f64::consts::PI - 2.0 * margin) / (n_theta - 1) as f64;
    let h2 = std::f64::consts::TAU / n_phi as f64;
    let mut f = Grid2::fill(n_theta, n_phi, DVector::zeros(dim));
    let mut nu = Grid2::fill(n_theta, n_phi, DVector::zeros(dim));
    for i in 0..n_theta {
        let theta = margin + i as f64 * h1;
        for j in 0..n_phi {
            let phi = j as f64 * h2;
            let (fp, np) = map(&sphere_point(theta, phi));
            f[(i, j)] = fp;
            nu[(i, j)] = np;
        }
    }
    SampledFrontal {
        ambient,
        nx: n_theta,
        ny: n_phi,
        h1,
        h2,
        f,
        nu,
        wrap2: true,
        interior1: (2, n_theta - 2),
    }
}

pub fn flat_disk_frontal(n_theta: usize, n_phi: usize) -> SampledFrontal {
    sample_polar(AmbientKind::EuclideanSpace, 3, n_theta, n_phi, &flat_disk_map)
}

pub fn hyperbolic_disk_frontal(n_theta: usize, n_phi: usize) -> SampledFrontal {
    sample_polar(AmbientKind::Hyperbolic, 4, n_theta, n_phi, &hyperbolic_disk_map)
}

pub fn totally_geodesic_frontal(n_theta: usize, n_phi: usize) -> SampledFrontal {
    sample_polar(AmbientKind::Sphere, 4, n_theta, n_phi, &totally_geodesic_map)
}

pub fn small_sphere_frontal(r: f64, n_theta: usize, n_phi: usize) -> SampledFrontal {
    sample_polar(AmbientKind::Sphere, 4, n_theta, n_phi, &|x| small_sphere_map(r, x))
}

/// Fixture names accepted by the command line and the verification battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixtureKind {
    FlatDisk,
    HyperbolicDisk,
    TotallyGeodesic,
    SmallSphere,
    TauCrossing,
}

impl std::str::FromStr for FixtureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fe" => Ok(FixtureKind::FlatDisk),
            "fh" => Ok(FixtureKind::HyperbolicDisk),
            "totally-geodesic" => Ok(FixtureKind::TotallyGeodesic),
            "small-sphere" => Ok(FixtureKind::SmallSphere),
            "tau-crossing" => Ok(FixtureKind::TauCrossing),
            other => Err(Error::UnknownFixture(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::{inner_raw, Signature};
    use crate::curve::{frenet, PeriodKind};
    use approx::assert_relative_eq;

    #[test]
    fn flat_disk_pointwise() {
        let north = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let (f, nu) = flat_disk_map(&north);
        assert_relative_eq!(f.norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(nu[2], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn hyperbolic_disk_lies_on_hyperboloid() {
        let fr = hyperbolic_disk_frontal(48, 48);
        for i in 0..fr.nx {
            for j in 0..fr.ny {
                let f = &fr.f[(i, j)];
                let nu = &fr.nu[(i, j)];
                assert_relative_eq!(
                    inner_raw(f, f, Signature::Lorentzian),
                    -1.0,
                    epsilon = 1e-10
                );
                assert_relative_eq!(
                    inner_raw(nu, nu, Signature::Lorentzian),
                    1.0,
                    epsilon = 1e-12
                );
                assert!(inner_raw(f, nu, Signature::Lorentzian).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn small_sphere_on_sphere() {
        let fr = small_sphere_frontal(std::f64::consts::FRAC_PI_4, 32, 32);
        for i in 0..fr.nx {
            for j in 0..fr.ny {
                assert_relative_eq!(fr.f[(i, j)].norm(), 1.0, epsilon = 1e-12);
                assert_relative_eq!(fr.nu[(i, j)].norm(), 1.0, epsilon = 1e-12);
                assert!(fr.f[(i, j)].dot(&fr.nu[(i, j)]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn tau_crossing_profile_is_as_advertised() {
        let c = tau_crossing_curve().unwrap();
        assert_eq!(c.period_info.unwrap().kind, PeriodKind::Periodic);
        assert_relative_eq!(c.domain, 7.498, epsilon = 2e-3);
        let data = frenet(&c, &Tolerances::default()).unwrap();
        let (kmin, kmax) = data.kappa_range();
        assert!(kmin > 0.2, "κ min {kmin}");
        assert!(kmax < 3.0);
        assert!(data.tau_defined_everywhere());
        let taus: Vec<f64> = data.points.iter().map(|p| p.tau.unwrap()).collect();
        let changes = taus
            .iter()
            .zip(taus.iter().cycle().skip(1))
            .take(taus.len())
            .filter(|(a, b)| a.signum() != b.signum())
            .count();
        assert_eq!(changes, 2, "τ must cross zero exactly twice");
    }

    #[test]
    fn fixture_names_parse() {
        assert_eq!("fE".parse::<FixtureKind>().unwrap(), FixtureKind::FlatDisk);
        assert_eq!("fh".parse::<FixtureKind>().unwrap(), FixtureKind::HyperbolicDisk);
        assert!("bogus".parse::<FixtureKind>().is_err());
    }
}
