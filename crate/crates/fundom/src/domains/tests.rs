use num_complex::Complex64 as C;

use super::*;
use crate::funcval::{AnalyticFn, FunctionId};
use crate::tracer::StepControl;

fn gamma_atlas_small() -> Atlas {
    let w = Window::new(-8.0, 4.0, -6.0, 6.0);
    gamma_domains(&w, (-3, 1), &StepControl::default()).unwrap()
}

#[test]
fn gamma_atlas_structure() {
    let atlas = gamma_atlas_small();
    // indices -3..=1 upper and mirrored (the next curve is beyond the top)
    for idx in -3..=1 {
        assert!(atlas.by_index(idx, false).is_some(), "missing domain {idx}");
        assert!(atlas.by_index(idx, true).is_some(), "missing mirror {idx}");
    }
    // the first right domain is slit along the positive half-axis only
    let om1 = atlas.by_index(1, false).unwrap();
    assert_eq!(om1.slit.pieces.len(), 1);
    match &om1.slit.pieces[0] {
        SlitPiece::RealInterval { a, b } => {
            assert_eq!(*a, 0.0);
            assert!(b.is_infinite());
        }
        other => panic!("unexpected slit {other:?}"),
    }
    // left domains add the negative ray up to the interior crossing value
    let om0 = atlas.by_index(0, false).unwrap();
    assert_eq!(om0.slit.pieces.len(), 2);
    match &om0.slit.pieces[1] {
        SlitPiece::RealInterval { a, b } => {
            assert!(a.is_infinite() && *a < 0.0);
            // Gamma at the first negative extremum ~ -3.545
            assert!((*b + 3.5446).abs() < 1e-3, "b={b}");
        }
        other => panic!("unexpected slit {other:?}"),
    }
}

#[test]
fn gamma_atlas_locate() {
    let atlas = gamma_atlas_small();
    // a real point right of the positive derivative zero sits in omega_1
    let l = locate(C::new(2.5, 0.5), &atlas).unwrap();
    assert_eq!(l.index, 1);
    assert!(!l.conj);
    // its mirror
    let lm = locate(C::new(2.5, -0.5), &atlas).unwrap();
    assert_eq!(lm.index, 1);
    assert!(lm.conj);
    // a point just above the first negative extremum is in omega_0
    let l0 = locate(C::new(-0.504, 0.3), &atlas).unwrap();
    assert_eq!(l0.index, 0);
    // exactly on the real axis: boundary
    assert!(matches!(
        locate(C::new(2.5, 0.0), &atlas),
        Err(DomainError::OnBoundary)
    ));
}

#[test]
fn gamma_atlas_partition_no_overlap() {
    let atlas = gamma_atlas_small();
    // grid sample: every interior point belongs to at most one domain, and
    // most points away from boundaries belong to exactly one
    let mut covered = 0;
    let mut total = 0;
    let mut rng = crate::rng::Rng::new(3);
    for _ in 0..4000 {
        // sampled over the sub-window the constructed domains fully tile
        // (beyond it lie leaves whose walls sit outside the window)
        let z = C::new(rng.range(-7.6, 3.6), rng.range(-4.3, 4.3));
        let mut hits = 0;
        for d in &atlas.domains {
            if d.contains(z) {
                hits += 1;
            }
        }
        assert!(hits <= 1, "point {z} claimed by {hits} domains");
        // skip the thin boundary zone when measuring coverage
        let near_boundary = atlas
            .domains
            .iter()
            .any(|d| crate::geom::polyline_distance(z, &d.boundary_c()) < 0.02);
        if !near_boundary {
            total += 1;
            if hits == 1 {
                covered += 1;
            }
        }
    }
    let frac = covered as f64 / total as f64;
    assert!(frac > 0.99, "coverage {frac}");
}

#[test]
fn gamma_domain_winding_and_slit() {
    let atlas = gamma_atlas_small();
    let fid = FunctionId::Gamma;
    let om1 = atlas.by_index(1, false).unwrap();
    let rep = domain_verify(&fid, &atlas, om1, 60, 11).unwrap();
    assert!(rep.slit_distance_max < 1e-6, "slit distance {:e}", rep.slit_distance_max);
    assert_eq!(rep.unflagged_failures, 0, "{rep:?}");
    assert!(rep.pass_fraction() >= 0.99, "{rep:?}");
    assert!(rep.inversion_ok as f64 >= rep.inversion_trials as f64 * 0.9);

    // direct spot winding at w = -1 + i off the slit
    let (_, ws, _) = {
        // reuse the verify internals indirectly: dense boundary image
        let pts = om1.boundary_c();
        let mut img = Vec::new();
        for win in pts.windows(2) {
            for k in 0..8 {
                let p = win[0] + (win[1] - win[0]) * (k as f64 / 8.0);
                if let Ok(j) = fid.eval2(p) {
                    img.push(j.f);
                }
            }
        }
        (pts, img, ())
    };
    let w = crate::geom::winding_of_samples(&ws, C::new(-1.0, 1.0));
    assert!((w - 1.0).abs() < 0.2, "winding {w}");
}

#[test]
fn zeta_strip_structure_to_sixty() {
    let ctl = StepControl::default();
    let strips = zeta_strips(60.0, &ctl).unwrap();
    assert!(strips.len() >= 5, "only {} strips", strips.len());
    for s in &strips {
        // the m-strip law and the unique below-one component
        assert_eq!(
            s.zeros.len(),
            s.m + 1,
            "strip {}: m={} zeros={}",
            s.index,
            s.m,
            s.zeros.len()
        );
        let below: Vec<_> = s
            .interior_components
            .iter()
            .filter(|c| c.image_interval == crate::tracer::ImageInterval::BelowOne)
            .collect();
        assert_eq!(below.len(), 1, "strip {}", s.index);
        // one-points and branch points interior
        assert_eq!(s.one_points.len(), s.m, "strip {} one-points", s.index);
        assert_eq!(s.branch_points.len(), s.m, "strip {} branch points", s.index);
    }
    // the strip holding t = 50 is a 2-strip with 3 zeros
    let s50 = strips.iter().find(|s| s.contains(C::new(0.5, 50.0))).unwrap();
    assert_eq!(s50.m, 2);
    assert_eq!(s50.zeros.len(), 3);
    // the second strip has 2 zeros, m = 1
    let s2 = &strips[1];
    assert_eq!(s2.m, 1);
    assert_eq!(s2.zeros.len(), 2);
    // the first is a 0-strip with the first zero
    assert_eq!(strips[0].m, 0);
    assert_eq!(strips[0].zeros.len(), 1);
}

#[test]
fn zeta_subdivision_counts() {
    let ctl = StepControl::default();
    let strips = zeta_strips(30.0, &ctl).unwrap();
    let s1 = &strips[0];
    let d1 = strip_subdivide(s1, &ctl).unwrap();
    assert_eq!(d1.len(), 1, "0-strip gives a single domain");
    assert_eq!(d1[0].slit.pieces.len(), 1);
    let s2 = &strips[1];
    let d2 = strip_subdivide(s2, &ctl).unwrap();
    assert_eq!(d2.len(), 2, "1-strip gives two domains");
    // slit of the lower one: [1, inf) plus the image arc
    assert_eq!(d2[0].slit.pieces.len(), 2);
    assert_eq!(d2[1].slit.pieces.len(), 2);
}

#[test]
fn zeta_atlas_verifies() {
    let ctl = StepControl::default();
    let atlas = zeta_domains(30.0, &ctl).unwrap();
    let fid = FunctionId::Zeta;
    // at least: left family, omega_0, four strip domains, plus mirrors
    assert!(atlas.domains.len() >= 10, "only {}", atlas.domains.len());
    for d in atlas.domains.iter().filter(|d| !d.label.conj) {
        let rep = domain_verify(&fid, &atlas, d, 40, 7).unwrap();
        assert!(
            rep.slit_distance_max < 1e-6,
            "{}: slit distance {:e}",
            d.label,
            rep.slit_distance_max
        );
        assert_eq!(rep.unflagged_failures, 0, "{}: {rep:?}", d.label);
        assert!(rep.pass_fraction() >= 0.99, "{}: {rep:?}", d.label);
    }
    // winding spot check: a subdomain of the second strip against w = -2
    let dom = atlas
        .domains
        .iter()
        .find(|d| d.label.strip_ref == Some((2, 0)) && !d.label.conj)
        .unwrap();
    let pts = dom.boundary_c();
    let mut img = Vec::new();
    for win in pts.windows(2) {
        for k in 0..6 {
            let p = win[0] + (win[1] - win[0]) * (k as f64 / 6.0);
            if let Ok(j) = fid.eval2(p) {
                img.push(j.f);
            }
        }
    }
    let w = crate::geom::winding_of_samples(&img, C::new(-2.0, 0.0));
    assert!((w - 1.0).abs() < 0.2, "winding {w}");
}
