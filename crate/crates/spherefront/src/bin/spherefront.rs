//! Command-line front end: parses flags, builds a session config, and
//! delegates to the library's command implementations.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spherefront::config::SessionConfig;
use spherefront::session::{
    cmd_curve, cmd_transform, cmd_tube, cmd_verify, CurveSpec, TransformKind, VerifyTarget,
};

#[derive(Parser)]
#[command(
    name = "spherefront",
    about = "Developable tube fronts in S^3: meshes, singular curves, caustics, duals, and verification reports",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonOpts {
    /// Helix frequencies: --helix A B
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    helix: Option<Vec<f64>>,
    /// Helix by curvature/torsion: --helix-kappa-tau K T
    #[arg(long = "helix-kappa-tau", num_args = 2, value_names = ["KAPPA", "TAU"])]
    helix_kappa_tau: Option<Vec<f64>>,
    /// Great circle center curve (totally degenerate tube)
    #[arg(long = "great-circle")]
    great_circle: bool,
    /// Import the center curve from CSV (columns s,x1..x4, header required)
    #[arg(long = "curve-csv", value_name = "PATH")]
    curve_csv: Option<PathBuf>,
    /// Built-in closed curve whose torsion changes sign
    #[arg(long = "tau-crossing")]
    tau_crossing: bool,
    /// Grid resolution: --grid M_S M_X
    #[arg(long, num_args = 2, value_names = ["M_S", "M_X"])]
    grid: Option<Vec<usize>>,
    /// Projection for mesh exports: stereo | central | none
    #[arg(long)]
    project: Option<String>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tolerance override name=value (repeatable)
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Front dimension n (surface operations need n = 2)
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tube front: mesh, singular curve, curvature-radius field, summary
    Tube {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Transform a tube: caustic | dual | parallel | inverse-caustic
    Transform {
        /// Which transform to apply
        which: String,
        /// Distance for the parallel front
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run the verification battery on a fixture or a tube spec
    Verify {
        /// tube | fE | fH | small-sphere | totally-geodesic | tau-crossing
        fixture: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Export a curve and its frame invariants as CSV
    Curve {
        #[command(flatten)]
        opts: CommonOpts,
    },
}

fn build_config(opts: &CommonOpts) -> spherefront::Result<SessionConfig> {
    let mut cfg = SessionConfig::default();
    if let Ok(path) = std::env::var("SPHEREFRONT_CONFIG") {
        let text = std::fs::read_to_string(&path)?;
        cfg.apply_kv_lines(&text)?;
    }
    if let Some(grid) = &opts.grid {
        cfg.m_s = grid[0];
        cfg.m_x = grid[1];
    }
    if let Some(p) = &opts.project {
        cfg.projection = p.parse()?;
    }
    if let Some(out) = &opts.out {
        cfg.out_dir = out.to_string_lossy().into_owned();
    }
    if let Some(n) = opts.n {
        cfg.n = n;
    }
    for kv in &opts.tol {
        let (name, value) = kv.split_once('=').ok_or_else(|| {
            spherefront::Error::Config(format!("expected NAME=VALUE, got `{kv}`"))
        })?;
        let v: f64 = value
            .parse()
            .map_err(|_| spherefront::Error::Config(format!("bad tolerance value `{value}`")))?;
        cfg.tol.set(name.trim(), v)?;
    }
    Ok(cfg)
}

fn curve_spec(opts: &CommonOpts) -> spherefront::Result<CurveSpec> {
    if let Some(ab) = &opts.helix {
        return Ok(CurveSpec::Helix { a: ab[0], b: ab[1] });
    }
    if let Some(kt) = &opts.helix_kappa_tau {
        return Ok(CurveSpec::HelixKappaTau { kappa: kt[0], tau: kt[1] });
    }
    if opts.great_circle {
        return Ok(CurveSpec::GreatCircle);
    }
    if let Some(path) = &opts.curve_csv {
        return Ok(CurveSpec::Csv { path: path.clone() });
    }
    if opts.tau_crossing {
        return Ok(CurveSpec::TauCrossing);
    }
    Err(spherefront::Error::Config(
        "no curve given: use --helix, --helix-kappa-tau, --great-circle, --curve-csv, or --tau-crossing"
            .into(),
    ))
}

fn run() -> spherefront::Result<Vec<PathBuf>> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Tube { opts } => {
            let cfg = build_config(opts)?;
            cmd_tube(&cfg, &curve_spec(opts)?)
        }
        Command::Transform { which, delta, opts } => {
            let cfg = build_config(opts)?;
            let kind = match which.to_ascii_lowercase().as_str() {
                "caustic" => TransformKind::Caustic,
                "dual" => TransformKind::Dual,
                "parallel" => TransformKind::Parallel(*delta),
                "inverse-caustic" => TransformKind::InverseCaustic,
                other => {
                    return Err(spherefront::Error::Config(format!(
                        "unknown transform `{other}` (caustic | dual | parallel | inverse-caustic)"
                    )))
                }
            };
            cmd_transform(&cfg, &curve_spec(opts)?, kind)
        }
        Command::Verify { fixture, opts } => {
            let cfg = build_config(opts)?;
            let target = if fixture.eq_ignore_ascii_case("tube") {
                VerifyTarget::Tube(curve_spec(opts)?)
            } else {
                VerifyTarget::Fixture(fixture.parse()?)
            };
            cmd_verify(&cfg, &target)
        }
        Command::Curve { opts } => {
            let cfg = build_config(opts)?;
            cmd_curve(&cfg, &curve_spec(opts)?)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
