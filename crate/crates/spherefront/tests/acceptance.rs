//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers. Tolerances are pinned here, not configured.

use nalgebra::DVector;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use spherefront::config::{SessionConfig, Tolerances};
use spherefront::curve::{frenet, make_helix, make_helix_kappa_tau, PeriodKind};
use spherefront::fixtures;
use spherefront::front::{
    build_tube, coorientability, evaluate, parallel_front, singular_slices, umbilic_scan,
    CoOrientability, TubeFront,
};
use spherefront::numerics::{all_above_floor, convergence_order};
use spherefront::session::{cmd_transform, cmd_tube, cmd_verify, CurveSpec, TransformKind, VerifyTarget};
use spherefront::transforms::{
    caustic, caustic_completeness_transfer, caustic_pointwise, central_point, dual,
    dual_degeneracy_report, lift_klein, self_dual_test, stereographic_inverse,
    stereographic_point,
};
use spherefront::verify::{front_criterion, gauss_equation_residual, rank_dnu_check};

const M_S: usize = 512;
const M_X: usize = 256;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn pass(number: u32, name: &str, detail: &str) {
    println!("criterion {number:02} ({name}): PASS — {detail}");
}

fn tube(curve: spherefront::curve::SphericalCurve, m_s: usize, m_x: usize) -> TubeFront {
    build_tube(&curve, m_s, m_x, &tol()).expect("tube builds")
}

#[test]
fn criterion_01_helix_generator() {
    let cases = [
        (2.0, 0.5),
        ((5.0f64 / 2.0).sqrt(), (5.0f64 / 8.0).sqrt()),
        (5.0f64.sqrt(), 5.0f64.sqrt() / 3.0),
    ];
    let mut worst = 0.0_f64;
    for (a, b) in cases {
        let expect_kappa = ((a * a - 1.0) * (1.0 - b * b)).sqrt();
        let expect_tau = a * b;
        let mut c = make_helix(a, b).unwrap();
        c.samples = 128;
        let data = frenet(&c, &tol()).unwrap();
        for p in &data.points {
            worst = worst
                .max((p.kappa - expect_kappa).abs())
                .max((p.tau.unwrap() - expect_tau).abs());
        }
    }
    assert!(worst < 1e-6, "max (κ, τ) deviation {worst}");
    pass(1, "helix generator", &format!("max (κ, τ) deviation {worst:.2e} < 1e-6"));
}

#[test]
fn criterion_02_coorientability_classification() {
    let co = tube(make_helix_kappa_tau(0.75, 1.25).unwrap(), M_S, M_X);
    let co_info = co.curve.period_info.unwrap();
    assert_eq!(co_info.kind, PeriodKind::Periodic);
    assert_eq!(coorientability(&co), CoOrientability::CoOrientable);

    let non = tube(make_helix_kappa_tau(4.0 / 3.0, 5.0 / 3.0).unwrap(), M_S, M_X);
    let non_info = non.curve.period_info.unwrap();
    assert_eq!(non_info.kind, PeriodKind::Antiperiodic);
    assert_eq!(coorientability(&non), CoOrientability::NonCoOrientable);
    pass(
        2,
        "co-orientability classification",
        &format!(
            "(κ,τ)=(3/4,5/4) co-orientable (period {:.6}); (4/3,5/3) non-co-orientable (antiperiod {:.6})",
            co_info.period.unwrap(),
            non_info.antiperiod.unwrap()
        ),
    );
}

#[test]
fn criterion_03_singular_set_nonempty_corank_one() {
    let fixtures: Vec<(&str, TubeFront)> = vec![
        ("helix(2,1/2)", tube(make_helix(2.0, 0.5).unwrap(), M_S, M_X)),
        ("helix κτ(3/4,5/4)", tube(make_helix_kappa_tau(0.75, 1.25).unwrap(), M_S, M_X)),
        ("helix κτ(4/3,5/3)", tube(make_helix_kappa_tau(4.0 / 3.0, 5.0 / 3.0).unwrap(), M_S, M_X)),
        ("tau-crossing", tube(fixtures::tau_crossing_curve().unwrap(), M_S, M_X)),
        ("great-circle", tube(spherefront::curve::great_circle(4), M_S, M_X)),
    ];
    let mut worst_ratio = 0.0_f64;
    for (name, t) in &fixtures {
        let slices = singular_slices(t, &tol());
        assert_eq!(slices.len(), M_S);
        for sl in &slices {
            assert!(!sl.roots.is_empty(), "{name}: slice {} has no singular parameter", sl.slice);
            if sl.whole_slice {
                // Sample a few angles of the fully singular slice.
                for &r in sl.roots.iter().step_by(64) {
                    let sv = t.df_fd(sl.slice as isize, r).svd(false, false).singular_values;
                    assert!(sv[0] > 0.1);
                    assert!(sv[1] / sv[0] < 1e-4, "{name}: ratio {}", sv[1] / sv[0]);
                    worst_ratio = worst_ratio.max(sv[1] / sv[0]);
                }
            } else {
                for &r in &sl.roots {
                    let sv = t.df_fd(sl.slice as isize, r).svd(false, false).singular_values;
                    assert!(sv[0] > 0.1, "{name}: σ1 = {}", sv[0]);
                    assert!(
                        sv[1] / sv[0] < 1e-4,
                        "{name}: slice {} ratio {}",
                        sl.slice,
                        sv[1] / sv[0]
                    );
                    worst_ratio = worst_ratio.max(sv[1] / sv[0]);
                }
            }
        }
    }
    pass(
        3,
        "singular set per slice, corank one",
        &format!("every slice of 5 fixtures has roots; worst σ₂/σ₁ = {worst_ratio:.2e} < 1e-4"),
    );
}

#[test]
fn criterion_04_caustic_structure() {
    let c = make_helix(2.0, 0.5).unwrap();
    let mut hs = Vec::new();
    let mut derivs = Vec::new();
    let mut orths = Vec::new();
    for m in [128usize, 256, 512] {
        let t = tube(c.clone(), m, 64);
        let grid = evaluate(&t, &tol());
        let pw = caustic_pointwise(&t, &grid);
        hs.push(grid.h_s);
        derivs.push(pw.deriv_residual);
        orths.push(pw.orth_residual);
    }
    let cbound = 40.0;
    for ((h, d), o) in hs.iter().zip(&derivs).zip(&orths) {
        assert!(*d <= cbound * h * h, "deriv residual {d} at h {h}");
        assert!(*o <= cbound * h * h, "orth residual {o} at h {h}");
    }
    let order = convergence_order(&hs, &derivs);
    assert!(order >= 1.8, "order {order}, residuals {derivs:?}");
    // The pointwise ⟨f^C, γ'⟩ is algebraically orthogonal for any ρ, so it
    // sits at the rounding floor.
    assert!(orths.iter().all(|o| *o < 1e-12));

    let t = tube(c, M_S, 64);
    let caus = caustic(&t, &tol()).unwrap();
    let cgrid = evaluate(&caus.tube, &tol());
    assert!(rank_dnu_check(&cgrid.as_frontal(), &tol()).verdict);
    assert!(umbilic_scan(&cgrid, &tol()).is_empty());
    pass(
        4,
        "caustic structure",
        &format!(
            "⟨∂f^C, γ'⟩ order {order:.2} ≥ 1.8 (≤ {cbound}·h²); ⟨f^C, γ'⟩ at floor {:.1e}; caustic rank ≤ 1 and umbilic-free",
            orths[2]
        ),
    );
}

#[test]
fn criterion_05_caustic_transfer() {
    let t = tube(make_helix_kappa_tau(4.0 / 3.0, 5.0 / 3.0).unwrap(), M_S, M_X);
    let caus = caustic(&t, &tol()).unwrap();
    let rep = caustic_completeness_transfer(&t, &caus);
    assert_eq!(rep.original_kind, PeriodKind::Antiperiodic);
    assert_eq!(rep.caustic_kind, PeriodKind::Antiperiodic, "caustic center stays antiperiodic");
    assert_eq!(coorientability(&caus.tube), CoOrientability::NonCoOrientable);
    assert!(rep.min_lift_coefficient >= 1.0 - 1e-10, "min coefficient {}", rep.min_lift_coefficient);
    pass(
        5,
        "caustic transfer",
        &format!(
            "antiperiodicity transfers to the caustic; lift coefficient min {:.6} ≥ 1 − 1e-10",
            rep.min_lift_coefficient
        ),
    );
}

#[test]
fn criterion_06_self_duality() {
    let t = tube(make_helix(2.0, 0.5).unwrap(), M_S, M_X);
    let yes = self_dual_test(&t, &tol()).unwrap();
    assert!(yes.tau_verdict, "τ deviation {}", yes.tau_deviation);
    assert!(
        yes.alignment_rms < 1e-6 * yes.diameter,
        "rms {} vs diameter {}",
        yes.alignment_rms,
        yes.diameter
    );
    assert!(yes.is_self_dual);
    assert_eq!(yes.tau_verdict, yes.alignment_verdict);

    let t = tube(make_helix_kappa_tau(0.75, 1.25).unwrap(), M_S, M_X);
    let no = self_dual_test(&t, &tol()).unwrap();
    assert!((no.tau_deviation - 0.25).abs() < 1e-6);
    assert!(!no.tau_verdict);
    assert!(
        no.alignment_rms > 1e-2 * no.diameter,
        "rms {} vs diameter {}",
        no.alignment_rms,
        no.diameter
    );
    assert_eq!(no.tau_verdict, no.alignment_verdict);
    assert!(!no.is_self_dual);
    pass(
        6,
        "self-duality",
        &format!(
            "τ≡1: rms {:.2e} < 1e-6·diam; τ≡5/4: τ-dev {:.3}, rms {:.2e} > 1e-2·diam; channels agree",
            yes.alignment_rms, no.tau_deviation, no.alignment_rms
        ),
    );
}

#[test]
fn criterion_07_dual_degeneracy_at_tau_zeros() {
    let t = tube(fixtures::tau_crossing_curve().unwrap(), M_S, M_X);
    let d = dual(&t, &tol()).unwrap();
    let rep = dual_degeneracy_report(&d, &tol());
    assert_eq!(rep.tau_roots.len(), 2, "τ roots {:?}", rep.tau_roots);
    assert!(rep.flagged_nodes > 0, "no flagged nodes");
    assert!(rep.flags_within_window, "a flag fell farther than 3h from every τ root");
    assert!(rep.every_root_flagged, "a τ root attracted no flag");
    pass(
        7,
        "dual degeneracy localizes at τ zeros",
        &format!(
            "{} flagged nodes all within 3h = {:.4} of roots {:?}",
            rep.flagged_nodes, rep.window, rep.tau_roots
        ),
    );
}

#[test]
fn criterion_08_rank_curvature_equivalence() {
    let polar = [49usize, 97, 193];
    // (name, ambient curvature, expected pass, frontal ladders)
    let mut cases: Vec<(&str, f64, bool, Vec<spherefront::front::SampledFrontal>)> = Vec::new();
    cases.push((
        "tube helix(2,1/2)",
        1.0,
        true,
        [128usize, 256, 512]
            .iter()
            .map(|&m| evaluate(&tube(make_helix(2.0, 0.5).unwrap(), m, (m / 2).max(64)), &tol()).as_frontal())
            .collect(),
    ));
    cases.push((
        "fE",
        0.0,
        true,
        polar.iter().map(|&m| fixtures::flat_disk_frontal(m, m)).collect(),
    ));
    cases.push((
        "totally-geodesic",
        1.0,
        true,
        polar.iter().map(|&m| fixtures::totally_geodesic_frontal(m, m)).collect(),
    ));
    cases.push((
        "small-sphere",
        1.0,
        false,
        polar
            .iter()
            .map(|&m| fixtures::small_sphere_frontal(std::f64::consts::FRAC_PI_4, m, m))
            .collect(),
    ));
    cases.push((
        "fH",
        -1.0,
        true,
        polar.iter().map(|&m| fixtures::hyperbolic_disk_frontal(m, m)).collect(),
    ));
    let mut summary = String::new();
    for (name, c, expected, ladder) in &cases {
        let mut hs = Vec::new();
        let mut identities = Vec::new();
        let mut rank_ok = true;
        let mut curv_ok = true;
        for fr in ladder {
            rank_ok = rank_dnu_check(fr, &tol()).verdict;
            let g = gauss_equation_residual(fr, *c, &tol()).unwrap();
            curv_ok = g.curvature_pass;
            assert!(g.identity_pass, "{name}: Gauss identity residual {}", g.identity_residual);
            hs.push(g.h);
            identities.push(g.identity_residual);
        }
        assert_eq!(rank_ok, *expected, "{name}: rank verdict");
        assert_eq!(curv_ok, *expected, "{name}: curvature verdict");
        assert_eq!(rank_ok, curv_ok, "{name}: the two verdicts must agree");
        let order_note = if all_above_floor(&identities, 1e-13) {
            let order = convergence_order(&hs, &identities);
            assert!(order >= 1.8, "{name}: identity order {order} ({identities:?})");
            format!("order {order:.2}")
        } else {
            "floor".to_string()
        };
        summary.push_str(&format!("{name}:{} ", if *expected { "pass" } else { "fail" }));
        summary.push_str(&format!("[{order_note}] "));
    }
    pass(8, "rank ≤ 1 ⇔ constant curvature", summary.trim());
}

#[test]
fn criterion_09_asymptotic_ode() {
    let c = make_helix(2.0, 0.5).unwrap();
    let mut hs = Vec::new();
    let mut rs = Vec::new();
    for m_x in [64usize, 128, 256] {
        let t = tube(c.clone(), 128, m_x);
        let g = evaluate(&t, &tol());
        let mut worst = 0.0_f64;
        for i in g.interior_rows() {
            for j in 0..g.m_x {
                let jp = (j + 1) % g.m_x;
                let jm = (j + g.m_x - 1) % g.m_x;
                let rtt = (g.rho[(i, jp)] - 2.0 * g.rho[(i, j)] + g.rho[(i, jm)]) / (g.h_t * g.h_t);
                worst = worst.max((rtt + g.rho[(i, j)]).abs());
            }
        }
        assert!(worst <= 40.0 * g.h_t * g.h_t, "residual {worst} at h {}", g.h_t);
        hs.push(g.h_t);
        rs.push(worst);
    }
    let order = convergence_order(&hs, &rs);
    assert!(order >= 1.8, "order {order}, residuals {rs:?}");
    pass(
        9,
        "asymptotic ODE along rulings",
        &format!("ρ_tt + ρ = 0 at order {order:.2} (bounded-solution sign: ρ_tt = −ρ)"),
    );
}

#[test]
fn criterion_10_parallel_fronts() {
    // δ = 0 identity: byte-exact through the session export path.
    let dir = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    let spec = CurveSpec::Helix { a: 2.0, b: 0.5 };
    let mk_cfg = |p: &std::path::Path| SessionConfig {
        m_s: M_S,
        m_x: M_X,
        out_dir: p.to_string_lossy().into_owned(),
        ..Default::default()
    };
    cmd_tube(&mk_cfg(dir.path()), &spec).unwrap();
    cmd_transform(&mk_cfg(dir2.path()), &spec, TransformKind::Parallel(0.0)).unwrap();
    let a = std::fs::read(dir.path().join("tube_mesh.obj")).unwrap();
    let b = std::fs::read(dir2.path().join("parallel_mesh.obj")).unwrap();
    assert_eq!(a, b, "δ = 0 parallel mesh must equal the tube mesh byte-for-byte");

    // δ = π/2 collapse: the finite-difference df has rank 1 at every node.
    let t = tube(make_helix(2.0, 0.5).unwrap(), 128, 64);
    let g = evaluate(&t, &tol());
    let p = parallel_front(&g, std::f64::consts::FRAC_PI_2, &tol());
    let fr = p.as_frontal();
    for i in fr.interior1.0..fr.interior1.1 {
        for j in 0..fr.ny {
            let d1 = fr.central(&fr.f, i, j, 0);
            let d2 = fr.central(&fr.f, i, j, 1);
            let mut m = nalgebra::DMatrix::zeros(4, 2);
            for r in 0..4 {
                m[(r, 0)] = d1[r];
                m[(r, 1)] = d2[r];
            }
            let sv = m.svd(false, false).singular_values;
            assert!(sv[0] > 0.5, "collapsed image must still move along the center curve");
            assert!(sv[1] / sv[0] < 1e-6, "rank must drop to 1, ratio {}", sv[1] / sv[0]);
        }
    }

    // Second principal curvature of the δ-parallel equals tan δ to O(h²):
    // eigenvalues of the finite-difference shape operator (both grid
    // directions enter, so the s-stencil truncation is the measured error).
    let delta = 0.3_f64;
    let target = delta.tan();
    let mut hs = Vec::new();
    let mut rs = Vec::new();
    for m in [64usize, 128, 256] {
        let t = tube(make_helix(2.0, 0.5).unwrap(), m, m);
        let g = evaluate(&t, &tol());
        let p = parallel_front(&g, delta, &tol());
        let fr = p.as_frontal();
        let mut worst = 0.0_f64;
        let mut used = 0usize;
        for i in fr.interior1.0..fr.interior1.1 {
            for j in 0..fr.ny {
                let fs = fr.central(&fr.f, i, j, 0);
                let ft = fr.central(&fr.f, i, j, 1);
                let ns = fr.central(&fr.nu, i, j, 0);
                let nt = fr.central(&fr.nu, i, j, 1);
                let i00 = fs.dot(&fs);
                let i01 = fs.dot(&ft);
                let i11 = ft.dot(&ft);
                // Skip near-singular nodes: the first form degenerates.
                if i00.min(i11) < 0.05 || i00 * i11 - i01 * i01 < 1e-3 {
                    continue;
                }
                let ii00 = -ns.dot(&fs);
                let ii01 = -ns.dot(&ft);
                let ii11 = -nt.dot(&ft);
                let a = i00 * i11 - i01 * i01;
                let b = -(i00 * ii11 + i11 * ii00 - 2.0 * i01 * ii01);
                let c = ii00 * ii11 - ii01 * ii01;
                let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
                let l1 = (-b + disc) / (2.0 * a);
                let l2 = (-b - disc) / (2.0 * a);
                let (near, far) = if (l1 - target).abs() < (l2 - target).abs() {
                    (l1, l2)
                } else {
                    (l2, l1)
                };
                // Only judge nodes where the two branches are separated.
                if (far - target).abs() < 0.3 {
                    continue;
                }
                used += 1;
                worst = worst.max((near - target).abs());
            }
        }
        assert!(used > m * m / 4, "too few regular nodes used: {used}");
        let h = fr.h1.max(fr.h2);
        assert!(worst <= 40.0 * h * h, "residual {worst} at h {h}");
        hs.push(h);
        rs.push(worst);
    }
    let order = convergence_order(&hs, &rs);
    assert!(order >= 1.8, "order {order}, residuals {rs:?}");
    pass(
        10,
        "parallel fronts",
        &format!("δ=0 byte-exact; δ=π/2 rank-1 collapse; λ₂ = tan δ at order {order:.2}"),
    );
}

#[test]
fn criterion_11_projection_round_trips() {
    let mut rng = StdRng::seed_from_u64(0x5eaf00d);
    let mut worst_central = 0.0_f64;
    let mut worst_stereo = 0.0_f64;
    for _ in 0..10_000 {
        // Central/Klein: any point of R³ with |v| ≤ 10.
        let v = [
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
        ];
        let up = lift_klein(&v);
        let back = central_point(&up).expect("lift lands in the open hemisphere");
        for k in 0..3 {
            worst_central = worst_central.max((back[k] - v[k]).abs() / v[k].abs().max(1.0));
        }
        // Stereographic: random sphere point outside the excluded zone.
        let mut p: DVector<f64> = DVector::from_vec(vec![
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ]);
        if p.norm() < 1e-3 {
            p[0] = 1.0;
        }
        p /= p.norm();
        if p[1] <= -1.0 + 1e-3 {
            p[1] = p[1].abs();
        }
        let y = stereographic_point(&p).unwrap();
        let q = stereographic_inverse(&y);
        worst_stereo = worst_stereo.max((q - &p).norm());
    }
    assert!(worst_central <= 1e-12, "central round trip {worst_central}");
    assert!(worst_stereo <= 1e-12, "stereographic round trip {worst_stereo}");
    pass(
        11,
        "projection round trips",
        &format!("central {worst_central:.2e}, stereographic {worst_stereo:.2e} over 10⁴ points each"),
    );
}

#[test]
fn criterion_12_determinism() {
    let spec = CurveSpec::HelixKappaTau { kappa: 0.75, tau: 1.25 };
    let run = |f: &dyn Fn(&SessionConfig) -> Vec<std::path::PathBuf>| -> Vec<(String, Vec<u8>)> {
        let dir = tempfile::tempdir().unwrap();
        let cfg = SessionConfig {
            m_s: M_S,
            m_x: M_X,
            out_dir: dir.path().to_string_lossy().into_owned(),
            ..Default::default()
        };
        let mut out: Vec<(String, Vec<u8>)> = f(&cfg)
            .into_iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    std::fs::read(&p).unwrap(),
                )
            })
            .collect();
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    };
    let strip_config = |files: Vec<(String, Vec<u8>)>| -> Vec<(String, Vec<u8>)> {
        // Summaries echo the config including the out dir; normalize it.
        files
            .into_iter()
            .map(|(n, bytes)| {
                if n.ends_with(".json") {
                    let text = String::from_utf8(bytes).unwrap();
                    let filtered: String = text
                        .lines()
                        .filter(|l| !l.contains("\"out_dir\""))
                        .collect::<Vec<_>>()
                        .join("\n");
                    (n, filtered.into_bytes())
                } else {
                    (n, bytes)
                }
            })
            .collect()
    };
    for (label, f) in [
        ("tube", Box::new({
            let spec = spec.clone();
            move |cfg: &SessionConfig| cmd_tube(cfg, &spec).unwrap()
        }) as Box<dyn Fn(&SessionConfig) -> Vec<std::path::PathBuf>>),
        ("transform parallel", Box::new({
            let spec = spec.clone();
            move |cfg: &SessionConfig| {
                cmd_transform(cfg, &spec, TransformKind::Parallel(0.4)).unwrap()
            }
        })),
        ("verify fE", Box::new(|cfg: &SessionConfig| {
            cmd_verify(cfg, &VerifyTarget::Fixture(fixtures::FixtureKind::FlatDisk)).unwrap()
        })),
    ] {
        let first = strip_config(run(&*f));
        let second = strip_config(run(&*f));
        assert_eq!(first.len(), second.len());
        for ((n1, b1), (n2, b2)) in first.iter().zip(&second) {
            assert_eq!(n1, n2);
            assert_eq!(b1, b2, "{label}: {n1} differs between identical runs");
        }
    }
    pass(
        12,
        "determinism",
        "tube / transform / verify reruns are byte-identical (config echo normalized for temp paths)",
    );
}

#[test]
fn acceptance_front_criterion_bound_on_tubes() {
    // Companion to criterion 3/4: the Legendrian stack keeps a uniform
    // lower bound on tubes at default resolution.
    let t = tube(make_helix(2.0, 0.5).unwrap(), 256, 128);
    let fr = evaluate(&t, &tol()).as_frontal();
    let rep = front_criterion(&fr, &tol());
    assert!(rep.is_front);
    assert!(rep.min_stack_sv >= 0.5);
    println!(
        "companion (front criterion): PASS — min stacked singular value {:.3} ≥ 0.5",
        rep.min_stack_sv
    );
}
