//! Duals of tubes in S³: the ruled surface over the (center, tangent) pair,
//! whose own center is the binormal. A tube is congruent to its dual
//! exactly when |τ| ≡ 1; duals over torsion zeros stop being fronts.
//!
//! ```bash
//! cargo run --release --example duality
//! ```

use spherefront::config::Tolerances;
use spherefront::curve::{make_helix, make_helix_kappa_tau};
use spherefront::fixtures::tau_crossing_curve;
use spherefront::front::build_tube;
use spherefront::transforms::{dual, dual_center_residuals, dual_degeneracy_report, self_dual_test};
use spherefront::verify::front_criterion;

fn main() -> spherefront::Result<()> {
    let tol = Tolerances::default();

    for (name, curve) in [
        ("τ ≡ 1   (self-dual)", make_helix(2.0, 0.5)?),
        ("τ ≡ 5/4 (not self-dual)", make_helix_kappa_tau(0.75, 1.25)?),
    ] {
        let tube = build_tube(&curve, 192, 96, &tol)?;
        let v = self_dual_test(&tube, &tol)?;
        println!(
            "{name}: max ||τ|−1| = {:.3e}, alignment rms/diam = {:.3e} ⇒ self-dual: {} (channels agree: {})",
            v.tau_deviation,
            v.alignment_rms / v.diameter,
            v.is_self_dual,
            v.tau_verdict == v.alignment_verdict
        );
    }

    // Duals need not be fronts: over torsion zeros the Legendrian stack
    // degenerates on the rulings through ±γ.
    let tube = build_tube(&tau_crossing_curve()?, 384, 128, &tol)?;
    let d = dual(&tube, &tol)?;
    let (orth, deriv) = dual_center_residuals(&d);
    println!("\nsign-changing-τ fixture:");
    println!("  dual center (binormal) orthogonality: ⟨f#, b⟩ = {orth:.2e}, ⟨∂f#, b⟩ = {deriv:.2e}");
    let fc = front_criterion(&d.frontal, &tol);
    let rep = dual_degeneracy_report(&d, &tol);
    println!(
        "  front criterion on the dual: is_front = {}, {} flagged nodes",
        fc.is_front, rep.flagged_nodes
    );
    println!(
        "  τ roots at s = {:?}; all flags within 3h = {:.4} of a root: {}",
        rep.tau_roots, rep.window, rep.flags_within_window && rep.every_root_flagged
    );
    Ok(())
}
