//! Build the reference tubes and print their global classification:
//! closure of the center curve, co-orientability, completeness, umbilics.
//!
//! ```bash
//! cargo run --release --example tube_gallery
//! ```

use spherefront::config::{Projection, SessionConfig, Tolerances};
use spherefront::curve::{great_circle, make_helix_kappa_tau};
use spherefront::front::{
    build_tube, completeness, coorientability, evaluate, lift_metric, umbilic_scan,
};
use spherefront::session::{cmd_tube, CurveSpec};

fn main() -> spherefront::Result<()> {
    let tol = Tolerances::default();
    let cases = [
        ("totally degenerate (great circle)", great_circle(4)),
        ("compact co-orientable, (κ,τ) = (3/4, 5/4)", make_helix_kappa_tau(0.75, 1.25)?),
        ("compact non-co-orientable, (κ,τ) = (4/3, 5/3)", make_helix_kappa_tau(4.0 / 3.0, 5.0 / 3.0)?),
    ];
    println!("{:<44} {:>12} {:>18} {:>9} {:>9}", "tube", "period", "co-orientable?", "complete", "umbilics");
    for (name, curve) in cases {
        let tube = build_tube(&curve, 256, 128, &tol)?;
        let grid = evaluate(&tube, &tol);
        let lift = lift_metric(&grid);
        let comp = completeness(&tube, &lift);
        let info = tube.curve.period_info.unwrap();
        println!(
            "{:<44} {:>12.6} {:>18} {:>9} {:>9}",
            name,
            info.period.unwrap_or(f64::NAN),
            format!("{:?}", coorientability(&tube)),
            comp.complete,
            umbilic_scan(&grid, &tol).len()
        );
    }

    // Write the co-orientable example as a stereographically projected mesh.
    let cfg = SessionConfig {
        m_s: 256,
        m_x: 128,
        projection: Projection::Stereographic,
        out_dir: "out/tube_gallery".into(),
        ..Default::default()
    };
    let files = cmd_tube(&cfg, &CurveSpec::HelixKappaTau { kappa: 0.75, tau: 1.25 })?;
    println!("\nwrote:");
    for f in files {
        println!("  {}", f.display());
    }
    Ok(())
}
