//! Session configuration and the named tolerance table.

use serde::Serialize;

use crate::{Error, Result};

/// Tolerances used across the kernel. All values are overridable by name
/// (`set`), because grid-resolution-dependent verification needs looser
/// settings at coarse steps.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    /// Max |⟨v_i,v_j⟩ − δ_ij| accepted after orthonormalization.
    pub gram: f64,
    /// Curve-on-sphere and unit-speed deviations.
    pub curve_unit: f64,
    pub arclength: f64,
    /// Residual accepted by the period / antiperiod scan.
    pub period: f64,
    /// Period search upper bound.
    pub period_lmax: f64,
    /// Below this curvature the Frenet frame is reported undefined.
    pub kappa_min: f64,
    /// Scale-relative singular-node threshold on |ρ|.
    pub singular: f64,
    /// Angle distance from π/2 flagging an umbilic node.
    pub umbilic_angle: f64,
    /// Relative second-singular-value threshold for rank(dν) ≤ 1.
    pub rank_dnu: f64,
    /// Legendrian stack: minimum singular value flagging a non-front node.
    pub front_stack: f64,
    /// Gauss / constant-curvature residual bound is `gauss_c · h²`,
    /// calibrated once on the totally geodesic fixture.
    pub gauss_c: f64,
    /// Congruence and self-duality: pass below `congruence_pass · diameter`,
    /// fail above `congruence_fail · diameter`.
    pub congruence_pass: f64,
    pub congruence_fail: f64,
    /// Allowed deviation of max ||τ| − 1| in the self-duality verdict.
    pub tau_unit: f64,
    /// Allowed sphere drift during integral-curve integration.
    pub sphere_drift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            gram: 1e-10,
            curve_unit: 1e-10,
            arclength: 1e-8,
            period: 1e-6,
            period_lmax: 64.0 * std::f64::consts::PI,
            kappa_min: 1e-6,
            singular: 1e-8,
            umbilic_angle: 1e-6,
            rank_dnu: 1e-6,
            front_stack: 2e-2,
            gauss_c: 40.0,
            congruence_pass: 1e-6,
            congruence_fail: 1e-2,
            tau_unit: 1e-6,
            sphere_drift: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if value <= 0.0 {
            return Err(Error::Config(format!("tolerance {name} must be > 0")));
        }
        match name {
            "gram" => self.gram = value,
            "curve_unit" => self.curve_unit = value,
            "arclength" => self.arclength = value,
            "period" => self.period = value,
            "period_lmax" => self.period_lmax = value,
            "kappa_min" => self.kappa_min = value,
            "singular" => self.singular = value,
            "umbilic_angle" => self.umbilic_angle = value,
            "rank_dnu" => self.rank_dnu = value,
            "front_stack" => self.front_stack = value,
            "gauss_c" => self.gauss_c = value,
            "congruence_pass" => self.congruence_pass = value,
            "congruence_fail" => self.congruence_fail = value,
            "tau_unit" => self.tau_unit = value,
            "sphere_drift" => self.sphere_drift = value,
            other => return Err(Error::Config(format!("unknown tolerance `{other}`"))),
        }
        Ok(())
    }
}

/// Projection applied to exported meshes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Projection {
    Stereographic,
    Central,
    None,
}

impl std::str::FromStr for Projection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stereo" | "stereographic" => Ok(Projection::Stereographic),
            "central" | "klein" => Ok(Projection::Central),
            "none" | "raw" => Ok(Projection::None),
            other => Err(Error::Config(format!("unknown projection `{other}`"))),
        }
    }
}

/// One session's resolved settings; every command consumes one of these.
#[derive(Debug, Clone, Serialize)]
pub struct SessionConfig {
    /// Front dimension n (ambient sphere lives in R^{n+2}). Grid-structured
    /// surface operations require n = 2.
    pub n: usize,
    pub m_s: usize,
    pub m_x: usize,
    pub projection: Projection,
    pub out_dir: String,
    pub tol: Tolerances,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            n: 2,
            m_s: 512,
            m_x: 256,
            projection: Projection::Stereographic,
            out_dir: "out".into(),
            tol: Tolerances::default(),
        }
    }
}

impl SessionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_s < 32 || self.m_x < 32 {
            return Err(Error::ResolutionTooLow {
                got: self.m_s.min(self.m_x),
                floor: 32,
            });
        }
        Ok(())
    }

    /// Apply `key=value` lines (used for the config file named by the
    /// `SPHEREFRONT_CONFIG` environment variable). Keys: `n`, `m_s`,
    /// `m_x`, `project`, `out`, and `tol.<name>`.
    pub fn apply_kv_lines(&mut self, text: &str) -> Result<()> {
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n" => self.n = value.parse().map_err(|_| bad(key, value))?,
                "m_s" => self.m_s = value.parse().map_err(|_| bad(key, value))?,
                "m_x" => self.m_x = value.parse().map_err(|_| bad(key, value))?,
                "project" => self.projection = value.parse()?,
                "out" => self.out_dir = value.to_string(),
                _ => {
                    if let Some(name) = key.strip_prefix("tol.") {
                        let v: f64 = value.parse().map_err(|_| bad(key, value))?;
                        self.tol.set(name, v)?;
                    } else {
                        return Err(Error::Config(format!("unknown config key `{key}`")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn bad(key: &str, value: &str) -> Error {
    Error::Config(format!("bad value `{value}` for `{key}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_lines_roundtrip() {
        let mut cfg = SessionConfig::default();
        cfg.apply_kv_lines("m_s = 128\nm_x=64\nproject=central\n# comment\ntol.period=1e-5\n")
            .unwrap();
        assert_eq!(cfg.m_s, 128);
        assert_eq!(cfg.m_x, 64);
        assert_eq!(cfg.projection, Projection::Central);
        assert_eq!(cfg.tol.period, 1e-5);
        assert!(cfg.apply_kv_lines("nonsense").is_err());
        assert!(cfg.apply_kv_lines("tol.bogus=1").is_err());
        assert!(cfg.apply_kv_lines("tol.period=-1").is_err());
    }

    #[test]
    fn resolution_floor_enforced() {
        let cfg = SessionConfig { m_s: 16, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
