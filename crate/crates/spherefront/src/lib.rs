//! Geometry kernel for developable tube fronts in the unit sphere.
//!
//! A developable tube is the set of points at spherical distance π/2 from a
//! closed regular curve in `S^{n+1}`; such tubes are wave fronts of constant
//! extrinsic curvature and carry a rich transformation theory: parallel
//! fronts, caustics (focal surfaces), and — for surfaces in `S^3` — duals.
//! This crate builds those objects numerically and certifies the identities
//! they are supposed to satisfy (rank of the normal map, the Gauss equation,
//! the Legendrian immersion criterion, congruence of curves and surfaces).
//!
//! The main pipeline is
//!
//! ```text
//! curve  ──bishop──▶  TubeFront  ──evaluate──▶  FrontGrid ──▶ exports
//!   │                     │
//!   │                     ├── caustic / inverse caustic
//!   │                     ├── dual / self-duality test   (n = 2)
//!   │                     └── parallel fronts
//!   └── frenet, period classification, co-orientability
//! ```
//!
//! See the `examples/` directory for one runnable program per capability and
//! the `spherefront` binary for the file-producing command line interface.

pub mod ambient;
pub mod config;
pub mod curve;
pub mod fixtures;
pub mod front;
pub mod io;
pub mod numerics;
pub mod session;
pub mod transforms;
pub mod verify;

use thiserror::Error;

/// Errors shared by all kernel modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("signature mismatch: cannot mix Euclidean and Lorentzian vectors")]
    SignatureMismatch,
    #[error("near-dependent frame: smallest Gram eigenvalue {0:.3e} below threshold")]
    DegenerateFrame(f64),
    #[error("degenerate covariance in rigid alignment (σ_min/σ_max = {0:.3e})")]
    DegenerateCovariance(f64),
    #[error("underdetermined alignment: {got} points for dimension {dim}")]
    TooFewPoints { got: usize, dim: usize },
    #[error("curve is not regular: |γ'| = {speed:.3e} at s = {s:.6}")]
    IrregularCurve { s: f64, speed: f64 },
    #[error("curve must be arclength-parametrized for this operation")]
    NotArclength,
    #[error("helix parameters outside solvable region: need b² < 1 < a², got a = {a}, b = {b}")]
    HelixParameters { a: f64, b: f64 },
    #[error("resolution {got} below floor {floor}")]
    ResolutionTooLow { got: usize, floor: usize },
    #[error("initial normal basis is not orthonormal or not orthogonal to the frame")]
    BadInitialBasis,
    #[error("torsion undefined: curvature below κ_min on {0} samples")]
    TorsionUndefined(usize),
    #[error("operation requires n = 2 (ambient R^4), session has n = {0}")]
    NeedsSurfaceCase(usize),
    #[error("integral curve left the unit sphere (drift {0:.3e}); reduce the step")]
    SphereDrift(f64),
    #[error("projection domain violated: {0}")]
    ProjectionDomain(String),
    #[error("grid too coarse for the residual calibration (h = {0:.3e})")]
    GridTooCoarse(f64),
    #[error("no nodes left after singular-set exclusion")]
    EmptyNodeSet,
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("CSV format: {0}")]
    CsvFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
