//! Ambient projections for visualization: stereographic (the figure
//! convention) and the central/Klein pair, with their algebraic inverses,
//! plus a clipped mesh export through the central projection.
//!
//! ```bash
//! cargo run --release --example projections
//! ```

use nalgebra::DVector;
use spherefront::config::{Projection, SessionConfig};
use spherefront::session::{cmd_tube, CurveSpec};
use spherefront::transforms::{
    central_point, lift_klein, stereographic_inverse, stereographic_point,
};

fn main() -> spherefront::Result<()> {
    let p = DVector::from_vec(vec![0.0, 0.0, 0.0, 1.0]);
    println!("stereographic (0,0,0,1) → {:?}", stereographic_point(&p).unwrap());
    println!("central       (0,0,0,1) → {:?}", central_point(&p).unwrap());
    println!("klein lift    (0,0,0)   → {:?}", lift_klein(&[0.0, 0.0, 0.0]).as_slice());

    let mut worst = (0.0_f64, 0.0_f64);
    for k in 0..5000 {
        let a = 0.002 * k as f64;
        let v = [7.0 * a.sin(), 4.0 * (1.7 * a).cos(), 9.0 * (0.31 * a).sin()];
        let back = central_point(&lift_klein(&v)).unwrap();
        for i in 0..3 {
            worst.0 = worst.0.max((back[i] - v[i]).abs() / v[i].abs().max(1.0));
        }
        let y = [a.sin(), (1.3 * a).cos(), 0.7 * (0.4 * a).sin()];
        let q = stereographic_inverse(&y);
        let back = stereographic_point(&q).unwrap();
        for i in 0..3 {
            worst.1 = worst.1.max((back[i] - y[i]).abs());
        }
    }
    println!("round trips over 5000 points: central {:.2e}, stereographic {:.2e}", worst.0, worst.1);

    // The central projection only covers the open upper hemisphere, so the
    // exporter drops clipped vertices and reports them.
    let cfg = SessionConfig {
        m_s: 128,
        m_x: 64,
        projection: Projection::Central,
        out_dir: "out/projections".into(),
        ..Default::default()
    };
    let files = cmd_tube(&cfg, &CurveSpec::HelixKappaTau { kappa: 0.75, tau: 1.25 })?;
    let summary = std::fs::read_to_string(&files[4])?;
    let dropped = summary
        .lines()
        .find(|l| l.contains("dropped_vertices"))
        .unwrap_or("")
        .trim();
    println!("central-projection export: {dropped} (see {})", files[0].display());
    Ok(())
}
