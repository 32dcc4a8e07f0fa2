use num_complex::Complex64 as C;

use super::*;
use crate::funcval::{AnalyticFn, FuncError, FunctionId, Jet2};
use crate::geom;

/// Test provider: an explicit polynomial with exact derivatives.
struct Poly {
    /// coefficients, lowest degree first
    c: Vec<f64>,
}

impl AnalyticFn for Poly {
    fn eval2(&self, z: C) -> Result<Jet2, FuncError> {
        let mut f = C::new(0.0, 0.0);
        let mut d1 = C::new(0.0, 0.0);
        let mut d2 = C::new(0.0, 0.0);
        for &ck in self.c.iter().rev() {
            d2 = d2 * z + 2.0 * d1;
            d1 = d1 * z + f;
            f = f * z + ck;
        }
        Ok(Jet2 { f, d1, d2 })
    }
    fn nearest_pole(&self, _z: C) -> Option<C> {
        None
    }
}

fn square() -> Poly {
    Poly { c: vec![0.0, 0.0, 1.0] } // z^2
}

fn square_minus_one() -> Poly {
    Poly { c: vec![-1.0, 0.0, 1.0] } // z^2 - 1
}

fn cubic() -> Poly {
    Poly { c: vec![0.0, -1.0, 0.0, 1.0] } // z^3 - z
}

#[test]
fn branch_directions_of_square() {
    // Im z^2 = 0 through the critical point 0: rays at 0, 90, 180, 270 deg
    let dirs = branch_continue(&square(), CurveKind::PreimageRealAxis, C::new(0.0, 0.0)).unwrap();
    let mut norm: Vec<f64> = dirs
        .iter()
        .map(|a| a.rem_euclid(2.0 * std::f64::consts::PI))
        .collect();
    norm.sort_by(f64::total_cmp);
    for (got, want) in norm.iter().zip([0.0, 1.0, 2.0, 3.0].iter()) {
        assert!(
            (got - want * std::f64::consts::FRAC_PI_2).abs() < 1e-9,
            "dirs={norm:?}"
        );
    }
}

#[test]
fn traced_axes_of_square_minus_one_match_analytic() {
    // Im(z^2-1) = 2xy: the real and imaginary axes, crossing at 0
    let w = Window::new(-2.0, 2.0, -2.0, 2.0);
    let ctl = StepControl::default();
    let comp = trace_fn(
        &square_minus_one(),
        CurveKind::PreimageRealAxis,
        C::new(1.3, 0.0),
        &ctl,
        &w,
    )
    .unwrap();
    // expected: the real segment [-2, 2] (passing straight through 0)
    let analytic: Vec<C> = (0..=400).map(|k| C::new(-2.0 + k as f64 * 0.01, 0.0)).collect();
    let pts = comp.points_c();
    let h = geom::hausdorff(&pts, &analytic);
    assert!(h < 1e-6, "hausdorff {h:e}");
    // the crossing at the critical point 0 is recorded
    assert!(
        comp.branch_crossings.iter().any(|p| C::new(p[0], p[1]).norm() < 1e-8),
        "crossings: {:?}",
        comp.branch_crossings
    );
    assert!(matches!(comp.start_end[0], Endpoint::WindowBoundary { .. }));
    assert!(matches!(comp.start_end[1], Endpoint::WindowBoundary { .. }));
}

#[test]
fn traced_hyperbola_of_cubic_matches_analytic() {
    // Im(z^3 - z) = y (3x^2 - y^2 - 1): the hyperbola 3x^2 - y^2 = 1
    let w = Window::new(-3.0, 3.0, -3.0, 3.0);
    let ctl = StepControl::default();
    let seed = C::new((2.0f64 / 3.0).sqrt(), 1.0); // on the right branch
    let comp = trace_fn(&cubic(), CurveKind::PreimageRealAxis, seed, &ctl, &w).unwrap();
    let analytic: Vec<C> = (-7500..=7500)
        .map(|k| {
            let y = k as f64 * 4e-4;
            C::new(((1.0 + y * y) / 3.0).sqrt(), y)
        })
        .collect();
    let pts = comp.points_c();
    let h = geom::hausdorff_one_sided(&pts, &analytic);
    assert!(h < 1e-6, "one-sided hausdorff {h:e}");
}

#[test]
fn reversibility_from_interior_point() {
    let w = Window::new(-3.0, 3.0, -3.0, 3.0);
    let ctl = StepControl::default();
    let seed = C::new((2.0f64 / 3.0).sqrt(), 1.0);
    let a = trace_fn(&cubic(), CurveKind::PreimageRealAxis, seed, &ctl, &w).unwrap();
    let mid = a.point(a.points.len() / 3);
    let b = trace_fn(&cubic(), CurveKind::PreimageRealAxis, mid, &ctl, &w).unwrap();
    let h = geom::hausdorff(&a.points_c(), &b.points_c());
    assert!(h < 2.0 * ctl.max_step, "hausdorff {h:e}");
}

#[test]
fn constraint_residual_on_stored_points() {
    let w = Window::new(-2.5, 2.5, -2.5, 2.5);
    let ctl = StepControl::default();
    let comp = trace_fn(
        &square_minus_one(),
        CurveKind::PreimageCircle { rho: 0.5 },
        C::new(0.7, 0.0),
        &ctl,
        &w,
    )
    .unwrap();
    assert!(comp.is_closed(), "|z^2-1| = 0.5 near 1 must be a loop");
    let f = square_minus_one();
    for p in comp.points_c() {
        let jet = f.eval2(p).unwrap();
        let r = (jet.f.norm() - 0.5).abs();
        assert!(r <= ctl.corrector_tol * 2.0, "residual {r:e} at {p}");
    }
}

#[test]
fn gamma_real_segment_ends_at_pole_and_window() {
    let fid = FunctionId::Gamma;
    let w = Window::new(-0.8, 3.0, -1.0, 1.0);
    let ctl = StepControl::default();
    let comp = trace(fid, CurveKind::PreimageRealAxis, C::new(2.5, 0.0), &ctl, &w).unwrap();
    // on the real axis, hitting the pole at 0 to the left, the window to
    // the right, passing the derivative zero near 1.46 on the way
    let ends = comp.start_end;
    let has_pole = ends.iter().any(|e| matches!(e, Endpoint::Pole { re, im } if re.abs() < 1e-6 && im.abs() < 1e-6));
    let has_window = ends.iter().any(|e| matches!(e, Endpoint::WindowBoundary { .. }));
    assert!(has_pole && has_window, "ends: {ends:?}");
    assert!(comp
        .branch_crossings
        .iter()
        .any(|p| (p[0] - 1.4616).abs() < 1e-3 && p[1].abs() < 1e-9));
    assert_eq!(comp.color, Color::Black);
}

#[test]
fn gamma_curve_through_first_negative_crossing() {
    // the vertical arc through the derivative zero in (-1, 0)
    let fid = FunctionId::Gamma;
    let w = Window::new(-2.0, 1.0, -2.0, 2.0);
    let ctl = StepControl::default();
    let x1 = C::new(-0.5040830082644554, 0.0);
    // seed slightly above the crossing on the arc
    let dirs = branch_continue(&fid, CurveKind::PreimageRealAxis, x1).unwrap();
    // pick the ray closest to vertical
    let up = dirs
        .iter()
        .copied()
        .min_by(|a, b| {
            (a - std::f64::consts::FRAC_PI_2)
                .abs()
                .total_cmp(&(b - std::f64::consts::FRAC_PI_2).abs())
        })
        .unwrap();
    let seed = x1 + C::from_polar(1e-3, up);
    let comp = trace(fid, CurveKind::PreimageRealAxis, seed, &ctl, &w).unwrap();
    assert!(comp
        .branch_crossings
        .iter()
        .any(|p| (C::new(p[0], p[1]) - x1).norm() < 1e-6));
    // the arc is red: Gamma < 0 on it
    assert_eq!(comp.color, Color::Red);
    for e in comp.start_end {
        assert!(matches!(e, Endpoint::WindowBoundary { .. }), "{e:?}");
    }
}

#[test]
fn zeta_real_segment_stops_at_pole() {
    let fid = FunctionId::Zeta;
    let w = Window::new(0.2, 6.0, -1.0, 1.0);
    let ctl = StepControl::default();
    let comp = trace(fid, CurveKind::PreimageRealAxis, C::new(3.0, 0.0), &ctl, &w).unwrap();
    let has_pole = comp
        .start_end
        .iter()
        .any(|e| matches!(e, Endpoint::Pole { re, im } if (re - 1.0).abs() < 1e-6 && im.abs() < 1e-6));
    assert!(has_pole, "ends: {:?}", comp.start_end);
    assert_eq!(comp.image_interval, ImageInterval::AboveOne);
}

#[test]
fn seeds_find_real_axis_and_zero_curve() {
    let fid = FunctionId::Gamma;
    let ctl = StepControl::default();
    let w = Window::new(1.0, 3.0, -1.0, 1.0);
    let seeds = seeds_for(&fid, CurveKind::PreimageRealAxis, &w, 32, &ctl).unwrap();
    assert!(seeds
        .iter()
        .any(|s| s.im.abs() < 1e-9 && s.re > 1.0 && s.re < 3.0));

    // a seed within 0.1 of the first nontrivial zeta zero
    let zw = Window::new(-1.0, 2.0, 10.0, 20.0);
    let zseeds = seeds_for(&FunctionId::Zeta, CurveKind::PreimageRealAxis, &zw, 64, &ctl).unwrap();
    let first_zero = C::new(0.5, 14.134725141734693);
    assert!(
        zseeds.iter().any(|s| (s - first_zero).norm() < 0.1),
        "no seed near the first zero"
    );
}

#[test]
fn small_circle_preimage_is_loop_around_zero() {
    let fid = FunctionId::Zeta;
    let ctl = StepControl::default();
    let first_zero = C::new(0.5, 14.134725141734693);
    let w = Window::new(-0.5, 1.5, 13.2, 15.2);
    let comps = preimage_circle(&fid, 0.05, &w, &ctl);
    assert_eq!(comps.len(), 1, "expected a single small loop, got {}", comps.len());
    assert!(comps[0].is_closed());
    let pts = comps[0].points_c();
    assert!(geom::point_in_polygon(first_zero, &pts));
}

#[test]
fn huge_circle_preimage_loops_around_poles() {
    let fid = FunctionId::Gamma;
    let mut ctl = StepControl::default();
    ctl.min_step = 1e-9;
    let w = Window::new(-3.0, 1.0, -1.0, 1.0);
    let comps = preimage_circle(&fid, 1e6, &w, &ctl);
    // loops exist around 0, -1, -2 (radius ~ 1/(n! * 1e6) each)
    assert!(comps.len() >= 3, "got {}", comps.len());
    for n in 0..3 {
        let pole = C::new(-(n as f64), 0.0);
        assert!(
            comps.iter().any(|c| c.is_closed() && geom::point_in_polygon(pole, &c.points_c())),
            "no loop around {pole}"
        );
    }
}

#[test]
fn crossing_audit_passes_on_gamma_window_and_fails_on_shifted_copy() {
    let fid = FunctionId::Gamma;
    let ctl = StepControl::default();
    let w = Window::new(-4.0, 3.0, -3.0, 3.0);
    let crit = crate::critpoints::gamma_crit_points(4)
        .unwrap()
        .into_iter()
        .map(|c| c.location)
        .collect::<Vec<_>>();
    let comps = preimage_real_axis(&fid, &w, &ctl, &crit, &[]);
    assert!(comps.len() >= 4, "expected several components, got {}", comps.len());
    let report = crossing_audit(&comps, &crit, 1e-3);
    assert!(report.pass, "violations: {:?}", report.violations);

    // constructed counterexample: shift one component a little
    let mut broken = comps.clone();
    if let Some(c) = broken.first_mut() {
        for p in c.points.iter_mut() {
            p[0] += 0.02;
            p[1] += 0.013;
        }
    }
    let report2 = crossing_audit(&broken, &crit, 1e-3);
    assert!(!report2.pass);
}

#[test]
fn lift_segment_follows_image_path() {
    // lift w from f(z) = z^2 - 1 starting at z = sqrt(2): w runs 1 -> 3
    let f = square_minus_one();
    let ctl = StepControl::default();
    let w = Window::new(-4.0, 4.0, -4.0, 4.0);
    let from = C::new(2.0f64.sqrt(), 0.0);
    let r = lift_segment(&f, from, C::new(1.0, 0.0), C::new(3.0, 0.0), &ctl, &w).unwrap();
    assert_eq!(r.end, LiftEnd::ReachedTarget);
    let last = *r.points.last().unwrap();
    assert!((last - C::new(2.0, 0.0)).norm() < 1e-8, "last={last}");

    // the segment w: 1 -> -1 ends exactly at the critical value: the lift
    // must land on the branch point 0 (as either a target hit or a
    // critical stop, depending on how the last Newton behaves)
    let r2 = lift_segment(&f, from, C::new(1.0, 0.0), C::new(-1.0, 0.0), &ctl, &w).unwrap();
    let last = *r2.points.last().unwrap();
    match r2.end {
        LiftEnd::ReachedTarget | LiftEnd::HitCritical(_) => {
            assert!(last.norm() < 1e-4, "last={last} end={:?}", r2.end)
        }
        other => panic!("unexpected end {other:?} at {last}"),
    }
}
