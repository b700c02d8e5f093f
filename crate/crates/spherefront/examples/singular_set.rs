//! The singular locus of a tube: per-slice root finding of the ruling
//! zeros, corank-one certification, and the stratification into whole
//! slices (curvature zeros of the center) vs isolated ruling zeros.
//!
//! ```bash
//! cargo run --release --example singular_set
//! ```

use spherefront::config::Tolerances;
use spherefront::curve::{great_circle, make_helix};
use spherefront::front::{build_tube, evaluate, singular_slices, Stratum};

fn main() -> spherefront::Result<()> {
    let tol = Tolerances::default();

    let tube = build_tube(&make_helix(2.0, 0.5)?, 256, 128, &tol)?;
    let slices = singular_slices(&tube, &tol);
    println!("helix tube: {} slices, every one carries singular parameters", slices.len());
    let sl = &slices[40];
    println!(
        "slice {:>3} (s = {:.4}): roots at t = {:.6} and {:.6} (antipodal)",
        sl.slice, sl.s, sl.roots[0], sl.roots[1]
    );
    for &r in &sl.roots {
        let df = tube.df_fd(sl.slice as isize, r);
        let sv = df.svd(false, false).singular_values;
        println!(
            "  df at the root: singular values ({:.4}, {:.2e}) — corank one",
            sv[0], sv[1]
        );
    }

    let grid = evaluate(&tube, &tol);
    let (reg, iso) = grid
        .interior_rows()
        .flat_map(|i| (0..grid.m_x).map(move |j| (i, j)))
        .fold((0usize, 0usize), |(r, s), (i, j)| match grid.stratum[(i, j)] {
            Stratum::Regular => (r + 1, s),
            _ => (r, s + 1),
        });
    println!("grid nodes: {reg} regular, {iso} within the singular threshold");

    // A great-circle center curve has κ ≡ 0: every slice is singular.
    let degenerate = build_tube(&great_circle(4), 128, 64, &tol)?;
    let slices = singular_slices(&degenerate, &tol);
    let whole = slices.iter().filter(|s| s.whole_slice).count();
    println!("great-circle tube: {whole}/{} slices fully singular", slices.len());
    Ok(())
}
