//! Assembly passes: seed, trace and merge all components of a pre-image in
//! a window; audit their crossings; locate circle merge radii.

use num_complex::Complex64;
use rayon::prelude::*;

use super::engine::{branch_continue, correct, seeds_for, trace_fn};
use super::{CurveComponent, CurveKind, StepControl, TraceError, Window};
use crate::funcval::{AnalyticFn, FunctionId};
use crate::geom;

/// True when `comp` retraces a curve already kept: most of its sampled
/// points lie on an existing polyline.
fn is_duplicate(comp: &CurveComponent, kept: &[CurveComponent], tol: f64) -> bool {
    let pts = comp.points_c();
    let stride = (pts.len() / 16).max(1);
    let samples: Vec<Complex64> = pts.iter().step_by(stride).copied().collect();
    'outer: for k in kept {
        let kp = k.points_c();
        let mut hits = 0;
        for s in &samples {
            if geom::polyline_distance(*s, &kp) < tol {
                hits += 1;
            } else if (hits as f64) + (samples.len() - hits) as f64 * 0.0 < 0.0 {
                continue 'outer;
            }
        }
        if hits * 4 >= samples.len() * 3 {
            return true;
        }
    }
    false
}

fn spawn_and_collect<F: AnalyticFn + ?Sized + Sync>(
    f: &F,
    kind: CurveKind,
    seeds: &[Complex64],
    ctl: &StepControl,
    window: &Window,
) -> Vec<CurveComponent> {
    let dup_tol = 0.35 * ctl.max_step;
    // tracing is pure per seed; the merge is a deterministic reduction
    let traced: Vec<CurveComponent> = seeds
        .par_iter()
        .filter_map(|&s| trace_fn(f, kind, s, ctl, window).ok())
        .collect();
    let mut kept: Vec<CurveComponent> = Vec::new();
    for comp in traced {
        if comp.points.len() < 2 {
            continue;
        }
        if !is_duplicate(&comp, &kept, dup_tol) {
            kept.push(comp);
        }
    }
    kept
}

/// All components of f^{-1}(real axis) meeting the window. `known_crit`
/// seeds the branch-point pairs explicitly (the grid cannot seed exactly
/// at a critical point, and each crossing hosts two distinct arcs);
/// `extra_seeds` adds regular on-curve starting points the caller already
/// knows, such as zeros.
pub fn preimage_real_axis<F: AnalyticFn + ?Sized + Sync>(
    f: &F,
    window: &Window,
    ctl: &StepControl,
    known_crit: &[Complex64],
    extra_seeds: &[Complex64],
) -> Vec<CurveComponent> {
    let kind = CurveKind::PreimageRealAxis;
    let mut seeds = seeds_for(f, kind, window, 64, ctl).unwrap_or_default();
    // spawn all four rays out of every known branch point
    for &bp in known_crit {
        if !window.contains(bp) {
            continue;
        }
        if let Ok(dirs) = branch_continue(f, kind, bp) {
            let delta = (5e-4f64).max(20.0 * ctl.min_step);
            for a in dirs {
                let cand = bp + Complex64::from_polar(delta, a);
                if let Some((z, _)) = correct(f, kind, cand, ctl) {
                    seeds.push(z);
                }
            }
        }
    }
    for &s in extra_seeds {
        if window.contains(s) {
            if let Some((z, _)) = correct(f, kind, s, ctl) {
                seeds.push(z);
            }
        }
    }
    let mut comps = spawn_and_collect(f, kind, &seeds, ctl, window);
    sort_components(&mut comps);
    comps
}

/// All components of |f| = rho meeting the window.
pub fn preimage_circle<F: AnalyticFn + ?Sized + Sync>(
    f: &F,
    rho: f64,
    window: &Window,
    ctl: &StepControl,
) -> Vec<CurveComponent> {
    assert!(rho > 0.0);
    let kind = CurveKind::PreimageCircle { rho };
    let seeds = match seeds_for(f, kind, window, 64, ctl) {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    let mut comps = spawn_and_collect(f, kind, &seeds, ctl, window);
    sort_components(&mut comps);
    comps
}

fn sort_components(comps: &mut [CurveComponent]) {
    comps.sort_by(|a, b| {
        let ka = component_key(a);
        let kb = component_key(b);
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
}

fn component_key(c: &CurveComponent) -> (f64, f64) {
    let mut min_t = f64::INFINITY;
    let mut min_s = f64::INFINITY;
    for p in &c.points {
        if p[1] < min_t {
            min_t = p[1];
        }
        if p[0] < min_s {
            min_s = p[0];
        }
    }
    (min_t, min_s)
}

/// Crossing audit: pre-image components may only meet at critical points
/// (or shared endpoints); any other intersection is an evaluator or tracer
/// defect.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub pass: bool,
    pub intersections_checked: usize,
    pub violations: Vec<Complex64>,
}

pub fn crossing_audit(
    components: &[CurveComponent],
    crit: &[Complex64],
    match_tol: f64,
) -> AuditReport {
    let mut violations = Vec::new();
    let mut checked = 0;
    let polys: Vec<Vec<Complex64>> = components.iter().map(|c| c.points_c()).collect();
    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            for hit in geom::polyline_intersections(&polys[i], &polys[j]) {
                checked += 1;
                let near_crit = crit.iter().any(|&c| (hit - c).norm() < match_tol);
                let near_recorded = components[i]
                    .branch_crossings
                    .iter()
                    .chain(components[j].branch_crossings.iter())
                    .any(|p| (hit - Complex64::new(p[0], p[1])).norm() < match_tol);
                let near_end = [&components[i], &components[j]].iter().all(|c| {
                    let first = c.point(0);
                    let last = c.point(c.points.len() - 1);
                    (hit - first).norm() < match_tol || (hit - last).norm() < match_tol
                });
                if !(near_crit || near_recorded || near_end) {
                    violations.push(hit);
                }
            }
        }
    }
    AuditReport { pass: violations.is_empty(), intersections_checked: checked, violations }
}

/// How a lift run ended.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LiftEnd {
    /// the full image segment was traversed
    ReachedTarget,
    /// ran into a zero of f' at the recorded point
    HitCritical(Complex64),
    WindowExit,
    Stalled,
}

#[derive(Clone, Debug)]
pub struct LiftResult {
    pub points: Vec<Complex64>,
    pub end: LiftEnd,
}

/// Lift of the straight image segment w0 -> w1 starting from `from`
/// (f(from) must equal w0 within tolerance): path continuation by Newton
/// on f(z) = w(tau).
pub fn lift_segment<F: AnalyticFn + ?Sized>(
    f: &F,
    from: Complex64,
    w0: Complex64,
    w1: Complex64,
    ctl: &StepControl,
    window: &Window,
) -> Result<LiftResult, TraceError> {
    let jet = f.eval2(from)?;
    if (jet.f - w0).norm() > 1e-6 * (1.0 + w0.norm()) {
        return Err(TraceError::SeedInvalid { seed: from });
    }
    let mut z = from;
    let mut tau = 0.0f64;
    let mut points = vec![z];
    let dw = w1 - w0;
    let mut stall = 0;
    while tau < 1.0 {
        let jet = f.eval2(z)?;
        let d1n = jet.d1.norm();
        if d1n < 1e-9 {
            // at a branch point of the lift
            let bp = super::engine::polish_branch(f, z).unwrap_or(z);
            points.push(bp);
            return Ok(LiftResult { points, end: LiftEnd::HitCritical(bp) });
        }
        // choose dtau so the z-step stays below max_step
        let dtau = (ctl.max_step * d1n / dw.norm().max(1e-300))
            .min(1.0 - tau)
            .max(1e-9);
        let target = w0 + (tau + dtau) * dw;
        // Newton onto f(z) = target
        let mut zc = z + dtau * dw / jet.d1;
        let mut ok = false;
        for _ in 0..30 {
            if !zc.is_finite() {
                break;
            }
            let j2 = match f.eval2(zc) {
                Ok(j) if j.f.is_finite() && j.d1.is_finite() => j,
                _ => break,
            };
            let r = j2.f - target;
            if r.norm() <= 1e-10 * (1.0 + target.norm()) {
                ok = true;
                break;
            }
            if j2.d1.norm() < 1e-12 {
                break;
            }
            zc -= r / j2.d1;
        }
        if !ok {
            stall += 1;
            if stall > 60 {
                return Ok(LiftResult { points, end: LiftEnd::Stalled });
            }
            // halve the parameter step by retrying from the same tau
            let half = dtau / 2.0;
            if half < 1e-10 {
                return Ok(LiftResult { points, end: LiftEnd::Stalled });
            }
            // shrink max_step locally by recursion-free means
            let target = w0 + (tau + half) * dw;
            let mut z2 = z + half * dw / jet.d1;
            let mut ok2 = false;
            for _ in 0..30 {
                if !z2.is_finite() {
                    break;
                }
                let j2 = match f.eval2(z2) {
                    Ok(j) if j.f.is_finite() && j.d1.is_finite() => j,
                    _ => break,
                };
                let r = j2.f - target;
                if r.norm() <= 1e-10 * (1.0 + target.norm()) {
                    ok2 = true;
                    break;
                }
                if j2.d1.norm() < 1e-12 {
                    break;
                }
                z2 -= r / j2.d1;
            }
            if !ok2 {
                return Ok(LiftResult { points, end: LiftEnd::Stalled });
            }
            tau += half;
            z = z2;
            points.push(z);
            continue;
        }
        tau += dtau;
        z = zc;
        points.push(z);
        if !window.contains(z) {
            return Ok(LiftResult { points, end: LiftEnd::WindowExit });
        }
    }
    Ok(LiftResult { points, end: LiftEnd::ReachedTarget })
}

/// Bisection over rho for the radius at which two circle pre-image
/// components merge at the branch point `v`: below the merge radius two
/// distinct components pass near `v`, above it one does.
pub fn merge_radius(
    fid: FunctionId,
    v: Complex64,
    rho_lo: f64,
    rho_hi: f64,
    window: &Window,
    ctl: &StepControl,
) -> Result<f64, TraceError> {
    let near_count = |rho: f64| -> usize {
        let comps = preimage_circle(&fid, rho, window, ctl);
        comps
            .iter()
            .filter(|c| {
                let pts = c.points_c();
                geom::polyline_distance(v, &pts) < 0.45
            })
            .count()
    };
    let mut lo = rho_lo;
    let mut hi = rho_hi;
    if near_count(lo) < 2 || near_count(hi) != 1 {
        return Err(TraceError::NoSeedsFound);
    }
    for _ in 0..14 {
        let mid = 0.5 * (lo + hi);
        if near_count(mid) >= 2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
