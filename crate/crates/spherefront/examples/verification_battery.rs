//! The certification battery on the five reference frontals: rank of the
//! normal map, the Gauss identity, the constant-curvature identity, and the
//! Legendrian (front) criterion. The small sphere is the negative control.
//!
//! ```bash
//! cargo run --release --example verification_battery
//! ```

use spherefront::config::Tolerances;
use spherefront::curve::make_helix;
use spherefront::fixtures::{
    flat_disk_frontal, hyperbolic_disk_frontal, small_sphere_frontal, totally_geodesic_frontal,
};
use spherefront::front::{build_tube, evaluate, SampledFrontal};
use spherefront::verify::{front_criterion, gauss_equation_residual, rank_dnu_check};

fn main() -> spherefront::Result<()> {
    let tol = Tolerances::default();
    let m = 97;
    let tube = build_tube(&make_helix(2.0, 0.5)?, 128, 64, &tol)?;
    let cases: Vec<(&str, f64, SampledFrontal)> = vec![
        ("tube helix(2,1/2)", 1.0, evaluate(&tube, &tol).as_frontal()),
        ("flat disk (fE)", 0.0, flat_disk_frontal(m, m)),
        ("hyperbolic disk (fH)", -1.0, hyperbolic_disk_frontal(m, m)),
        ("totally geodesic S²", 1.0, totally_geodesic_frontal(m, m)),
        ("small sphere r=π/4", 1.0, small_sphere_frontal(std::f64::consts::FRAC_PI_4, m, m)),
    ];
    println!(
        "{:<22} {:>3} {:>10} {:>12} {:>12} {:>8} {:>7}",
        "fixture", "c", "rank≤1", "gauss-ident", "const-curv", "front?", "verdict"
    );
    for (name, c, fr) in &cases {
        let rank = rank_dnu_check(fr, &tol);
        let gauss = gauss_equation_residual(fr, *c, &tol)?;
        let front = front_criterion(fr, &tol);
        let verdict = rank.verdict && gauss.curvature_pass;
        println!(
            "{:<22} {:>3} {:>10} {:>12.2e} {:>12.2e} {:>8} {:>7}",
            name,
            c,
            if rank.verdict { "pass" } else { "FAIL" },
            gauss.identity_residual,
            gauss.curvature_residual,
            front.is_front,
            if verdict { "pass" } else { "FAIL" },
        );
    }
    println!("\n(the small sphere must fail: its normal map has rank 2 and its");
    println!(" intrinsic curvature exceeds the ambient's — both checks agree)");
    Ok(())
}
