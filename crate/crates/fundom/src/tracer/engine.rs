//! The continuation engine: scalar-constraint formulation, damped Newton
//! corrector, curvature-adaptive stepping and branch-point passage.

use num_complex::Complex64;

use super::{Color, CurveComponent, CurveKind, Endpoint, ImageInterval, StepControl, TraceError, Window};
use crate::funcval::{AnalyticFn, FunctionId, Jet2};

const POLE_LIMIT: f64 = 1e12;
const ESSENTIAL_GUARD: f64 = 1e-3;

/// Scalar constraint c(z) and its gradient, expressed as a complex number
/// g = dc/dx + i dc/dy derived from f' through the Cauchy-Riemann
/// relations. The tangent of the level curve is i*g rotated to unit length.
pub(crate) fn constraint(kind: CurveKind, jet: &Jet2) -> (f64, Complex64) {
    match kind {
        CurveKind::PreimageRealAxis => {
            // c = Im f, grad = (Im f', Re f') = i conj(f')
            (jet.f.im, Complex64::new(jet.d1.im, jet.d1.re))
        }
        CurveKind::PreimageCircle { rho } => {
            // c = |f| - rho, grad = conj(conj(f) f') / |f|
            let m = jet.f.norm();
            let w = jet.f.conj() * jet.d1;
            (m - rho, Complex64::new(w.re, -w.im) / m.max(1e-300))
        }
        CurveKind::PreimageRay { theta } => {
            let rot = Complex64::from_polar(1.0, -theta);
            let fr = rot * jet.f;
            let dr = rot * jet.d1;
            (fr.im, Complex64::new(dr.im, dr.re))
        }
        CurveKind::LiftSegment { .. } => unreachable!("lifts use their own runner"),
    }
}

/// Local tolerance: the corrector target scales with |f| (an absolute
/// target would dissolve the curve where the function is tiny and stall
/// where it is huge), plus the coordinate quantization floor
/// |f'| * ulp(z) below which no point can be placed on the constraint.
#[inline]
pub(crate) fn local_tol(ctl: &StepControl, z: Complex64, jet: &Jet2) -> f64 {
    ctl.corrector_tol * jet.f.norm()
        + jet.d1.norm() * (1.0 + z.norm()) * 8.0 * f64::EPSILON
}

/// Damped Newton steps of the scalar constraint along its gradient.
/// Returns the corrected point and its jet.
pub(crate) fn correct<F: AnalyticFn + ?Sized>(
    f: &F,
    kind: CurveKind,
    mut z: Complex64,
    ctl: &StepControl,
) -> Option<(Complex64, Jet2)> {
    let mut jet = f.eval2(z).ok()?;
    for _ in 0..40 {
        let (c, g) = constraint(kind, &jet);
        let tol = local_tol(ctl, z, &jet);
        if c.abs() <= tol {
            return Some((z, jet));
        }
        let g2 = g.norm_sqr();
        if g2 < 1e-280 {
            return None;
        }
        let full = -c / g2;
        let mut lambda = 1.0f64;
        let mut improved = None;
        for _ in 0..20 {
            let cand = z + lambda * full * g;
            if let Ok(j2) = f.eval2(cand) {
                let (c2, _) = constraint(kind, &j2);
                if c2.abs() < c.abs() {
                    improved = Some((cand, j2));
                    break;
                }
            }
            lambda *= 0.5;
        }
        match improved {
            Some((cand, j2)) => {
                z = cand;
                jet = j2;
            }
            None => return None,
        }
    }
    let (c, _) = constraint(kind, &jet);
    if c.abs() <= local_tol(ctl, z, &jet) {
        Some((z, jet))
    } else {
        None
    }
}

/// Outgoing tangent directions of the constraint curve at a simple
/// critical point (f'(at) ~ 0, f''(at) != 0): the level set is locally two
/// orthogonal arcs, four rays in total.
pub fn branch_continue<F: AnalyticFn + ?Sized>(
    f: &F,
    kind: CurveKind,
    at: Complex64,
) -> Result<Vec<f64>, TraceError> {
    let jet = f.eval2(at)?;
    if jet.d2.norm() < 1e-10 * jet.f.norm().max(1.0) {
        return Err(TraceError::HigherOrderCritical { at });
    }
    // c(at + e^{i a} r) ~ Re/Im of q e^{2 i a} r^2 with q from f''
    let base = match kind {
        CurveKind::PreimageRealAxis | CurveKind::PreimageRay { .. } => {
            let q = match kind {
                CurveKind::PreimageRay { theta } => Complex64::from_polar(1.0, -theta) * jet.d2,
                _ => jet.d2,
            };
            // Im(q e^{2ia}) = 0  =>  a = -arg(q)/2 + k pi/2
            -q.arg() / 2.0
        }
        CurveKind::PreimageCircle { .. } => {
            // |f| level: Re((f''/f) e^{2ia}) = 0 => a = (pi/2 - arg(f''/f))/2 + k pi/2
            let q = jet.d2 / jet.f;
            (std::f64::consts::FRAC_PI_2 - q.arg()) / 2.0
        }
        CurveKind::LiftSegment { .. } => unreachable!(),
    };
    Ok((0..4)
        .map(|k| base + k as f64 * std::f64::consts::FRAC_PI_2)
        .collect())
}

/// One-dimensional Newton along a window edge: keeps boundary endpoints on
/// the curve instead of on the last chord.
fn polish_on_edge<F: AnalyticFn + ?Sized>(
    f: &F,
    kind: CurveKind,
    clipped: Complex64,
    ctl: &StepControl,
    window: &Window,
) -> Option<Complex64> {
    let on_vertical = (clipped.re - window.sigma_min).abs() < 1e-12
        || (clipped.re - window.sigma_max).abs() < 1e-12;
    let mut z = clipped;
    for _ in 0..20 {
        let jet = f.eval2(z).ok()?;
        let (c, g) = constraint(kind, &jet);
        if c.abs() <= local_tol(ctl, z, &jet) {
            return Some(z);
        }
        // derivative of c along the free coordinate
        let dc = if on_vertical { g.im } else { g.re };
        if dc.abs() < 1e-280 {
            return None;
        }
        let step = -c / dc;
        let capped = step.clamp(-ctl.max_step, ctl.max_step);
        z = if on_vertical {
            Complex64::new(z.re, z.im + capped)
        } else {
            Complex64::new(z.re + capped, z.im)
        };
        if !window.contains(z) {
            return None;
        }
    }
    None
}

/// Polish a nearby zero of f' by Newton using f''. The iteration also
/// "converges" onto poles (where the ratio f'/f'' vanishes), so those
/// fixed points are rejected.
pub(crate) fn polish_branch<F: AnalyticFn + ?Sized>(f: &F, mut z: Complex64) -> Option<Complex64> {
    for _ in 0..30 {
        let jet = f.eval2(z).ok()?;
        if jet.d2.norm() < 1e-280 {
            return None;
        }
        let step = jet.d1 / jet.d2;
        z -= step;
        if step.norm() < 1e-13 {
            if let Some(p) = f.nearest_pole(z) {
                if (z - p).norm() < 1e-6 {
                    return None;
                }
            }
            return Some(z);
        }
    }
    None
}

struct HalfTrace {
    points: Vec<Complex64>,
    end: Endpoint,
    crossings: Vec<Complex64>,
    closed: bool,
}

/// Continuation in one direction from `start` (already corrected).
fn trace_direction<F: AnalyticFn + ?Sized>(
    f: &F,
    kind: CurveKind,
    start: Complex64,
    start_jet: &Jet2,
    mut dir: Complex64,
    ctl: &StepControl,
    window: &Window,
) -> HalfTrace {
    let mut points = vec![start];
    let mut crossings = Vec::new();
    let mut z = start;
    let mut jet = start_jet.clone();
    let dbg = std::env::var_os("FUNDOM_TRACE_DBG").is_some();
    let mut h = ctl.max_step / 4.0;
    let essentials = f.essential_points();
    let mut arc = 0.0f64;
    let mut last_step = ctl.min_step;
    // remember the last passage so the proximity test does not re-trigger
    // while we are still escaping the same critical point
    let mut recent_bp: Option<(Complex64, f64)> = None;

    loop {
        if points.len() >= ctl.max_points {
            return HalfTrace { points, end: Endpoint::Stalled, crossings, closed: false };
        }

        // pole escape: |f| blowing up and the pole is close
        if jet.f.norm() > POLE_LIMIT {
            let end = match f.nearest_pole(z) {
                Some(p) => Endpoint::Pole { re: p.re, im: p.im },
                None => Endpoint::Stalled,
            };
            return HalfTrace { points, end, crossings, closed: false };
        }

        // branch-point proximity: Newton step length of f' is the distance
        // estimate to the nearest critical point
        let d2n = jet.d2.norm();
        if d2n > 1e-12 {
            let d_bp = (jet.d1 / jet.d2).norm();
            if d_bp < (2.0 * h).min(0.05) {
                if let Some(bp) = polish_branch(f, z) {
                    let fresh = match recent_bp {
                        Some((p, a)) => (bp - p).norm() > 1e-7 || arc - a > 10.0 * ctl.max_step,
                        None => true,
                    };
                    let d = (bp - z).norm();
                    let heading_in =
                        d < 1e-12 || ((bp - z) / d * dir.conj()).re > 0.3;
                    if fresh && heading_in && d < (4.0 * h).min(0.2) {
                        if dbg {
                            eprintln!("[trace] branch passage at {bp} from z={z} dir={dir:.3}");
                        }
                        // passage straight through: pick the outgoing ray
                        // closest to the direction of motion
                        match branch_continue(f, kind, bp) {
                            Ok(dirs) => {
                                let incoming = dir.arg();
                                let out = dirs
                                    .iter()
                                    .map(|&a| {
                                        let mut d = a - incoming;
                                        while d > std::f64::consts::PI {
                                            d -= 2.0 * std::f64::consts::PI;
                                        }
                                        while d < -std::f64::consts::PI {
                                            d += 2.0 * std::f64::consts::PI;
                                        }
                                        (d.abs(), a)
                                    })
                                    .min_by(|a, b| a.0.total_cmp(&b.0))
                                    .map(|(_, a)| a)
                                    .unwrap();
                                let hop = (bp - z).norm().max(10.0 * ctl.min_step);
                                let next = bp + Complex64::from_polar(hop, out);
                                crossings.push(bp);
                                points.push(bp);
                                recent_bp = Some((bp, arc));
                                if !window.contains(next) {
                                    let clipped = window.clip(bp, next);
                                    points.push(clipped);
                                    return HalfTrace {
                                        points,
                                        end: Endpoint::WindowBoundary { essential_guard: false },
                                        crossings,
                                        closed: false,
                                    };
                                }
                                match correct(f, kind, next, ctl) {
                                    Some((zc, j2)) => {
                                        dir = (zc - bp) / (zc - bp).norm();
                                        arc += (zc - z).norm();
                                        z = zc;
                                        jet = j2;
                                        points.push(z);
                                        continue;
                                    }
                                    None => {
                                        return HalfTrace {
                                            points,
                                            end: Endpoint::BranchPointCrossing {
                                                re: bp.re,
                                                im: bp.im,
                                            },
                                            crossings,
                                            closed: false,
                                        }
                                    }
                                }
                            }
                            Err(_) => {
                                return HalfTrace {
                                    points,
                                    end: Endpoint::BranchPointCrossing { re: bp.re, im: bp.im },
                                    crossings,
                                    closed: false,
                                }
                            }
                        }
                    }
                }
            }
        }

        // pole approach: once the step has Zeno-shrunk close enough to a
        // pole the segment ends there (|f| -> infinity along it)
        if let Some(p) = f.nearest_pole(z) {
            let d = (z - p).norm();
            if d > 0.0 {
                let toward = ((p - z) / d * dir.conj()).re;
                // the step guard keeps the achieved step ~ 0.16 d on a pole
                // approach, so a genuine approach walks below this bound;
                // curves that merely live near a pole (tiny circle
                // pre-images) keep stepping well under d and never trip it
                if toward > 0.5 && d < (6.0 * ctl.min_step).max((3.0 * last_step).min(1e-4)) {
                    return HalfTrace {
                        points,
                        end: Endpoint::Pole { re: p.re, im: p.im },
                        crossings,
                        closed: false,
                    };
                }
            }
        }

        // curvature-adaptive step from the three trailing points
        if points.len() >= 3 {
            let n = points.len();
            let (a, b, c) = (points[n - 3], points[n - 2], points[n - 1]);
            let v1 = b - a;
            let v2 = c - b;
            let cross = (v1.re * v2.im - v1.im * v2.re).abs();
            let denom = v1.norm() * v2.norm() * (c - a).norm();
            if denom > 0.0 {
                let kappa = 2.0 * cross / denom;
                h = (ctl.curvature_target / kappa.max(1e-9)).clamp(ctl.min_step, ctl.max_step);
            }
        }
        // keep the image step bounded as well
        let img_speed = jet.d1.norm() / jet.f.norm().max(1.0);
        if img_speed > 0.0 {
            h = h.min((8.0 * ctl.curvature_target / img_speed).max(ctl.min_step));
        }
        // never leap over a pole: deep poles have tiny residues, so the
        // function stays small until the very last moment and the image
        // guard alone would sail across
        if let Some(p) = f.nearest_pole(z) {
            h = h.min((0.5 * (z - p).norm()).max(4.0 * ctl.min_step));
        }

        // predictor + corrector with step halving
        let mut stepped = None;
        let mut hh = h;
        loop {
            let pred = z + hh * dir;
            if !window.contains(pred) {
                // window exit: clip to the boundary and polish the exit
                // point along the edge so it sits on the curve
                let clipped = window.clip(z, pred);
                let exit = polish_on_edge(f, kind, clipped, ctl, window).unwrap_or(clipped);
                if (exit - z).norm() > 1e-14 {
                    points.push(exit);
                }
                return HalfTrace {
                    points,
                    end: Endpoint::WindowBoundary { essential_guard: false },
                    crossings,
                    closed: false,
                };
            }
            if essentials.iter().any(|&e| (pred - e).norm() < ESSENTIAL_GUARD) {
                return HalfTrace {
                    points,
                    end: Endpoint::WindowBoundary { essential_guard: true },
                    crossings,
                    closed: false,
                };
            }
            match correct(f, kind, pred, ctl) {
                // the correction must stay local to the prediction and keep
                // moving forward; anything else means the Newton tunneled
                // to a different component or doubled back
                Some((zc, j2))
                    if (zc - pred).norm() < 2.0 * hh
                        && (zc - z).norm() > 0.2 * hh
                        && ((zc - z) / (zc - z).norm() * dir.conj()).re > 0.2 =>
                {
                    stepped = Some((zc, j2));
                    break;
                }
                _ => {
                    hh *= 0.5;
                    if hh < ctl.min_step {
                        break;
                    }
                }
            }
        }
        let (zc, j2) = match stepped {
            Some(s) => s,
            None => {
                if dbg {
                    eprintln!(
                        "[trace] stall at z={z} dir={dir:.3} h={h:.3e} |f|={:.3e} |f'|={:.3e}",
                        jet.f.norm(),
                        jet.d1.norm()
                    );
                    let pred = z + h * dir;
                    match f.eval2(pred) {
                        Ok(jp) => {
                            let (c, g) = constraint(kind, &jp);
                            eprintln!(
                                "[trace]   pred c={c:+.3e} tol={:.3e} |g|={:.3e}",
                                local_tol(ctl, pred, &jp),
                                g.norm()
                            );
                            if let Some((zc, j2)) = correct(f, kind, pred, ctl) {
                                let (c2, _) = constraint(kind, &j2);
                                eprintln!(
                                    "[trace]   corrected to {zc} c={c2:+.3e} |zc-pred|={:.3e} |zc-z|={:.3e} dot={:+.3}",
                                    (zc - pred).norm(),
                                    (zc - z).norm(),
                                    if (zc - z).norm() > 0.0 {
                                        ((zc - z) / (zc - z).norm() * dir.conj()).re
                                    } else {
                                        f64::NAN
                                    }
                                );
                            } else {
                                eprintln!("[trace]   corrector diverged");
                            }
                        }
                        Err(e) => eprintln!("[trace]   pred eval error: {e}"),
                    }
                }
                // one more possibility: we stalled against a pole
                let end = match f.nearest_pole(z) {
                    Some(p) if (z - p).norm() < 0.05 || jet.f.norm() > 1e6 => {
                        Endpoint::Pole { re: p.re, im: p.im }
                    }
                    _ => Endpoint::Stalled,
                };
                return HalfTrace { points, end, crossings, closed: false };
            }
        };

        last_step = (zc - z).norm();
        arc += last_step;
        dir = (zc - z) / last_step;
        z = zc;
        jet = j2;
        points.push(z);

        // closure back to the start
        if points.len() > 8 && arc > 6.0 * h && (z - start).norm() < 0.9 * (zc - points[points.len() - 2]).norm().max(h) {
            points.push(start);
            return HalfTrace { points, end: Endpoint::ClosedLoop, crossings, closed: true };
        }
    }
}

/// Bidirectional continuation from `seed`; the generic engine behind
/// [`trace`].
pub fn trace_fn<F: AnalyticFn + ?Sized>(
    f: &F,
    kind: CurveKind,
    seed: Complex64,
    ctl: &StepControl,
    window: &Window,
) -> Result<CurveComponent, TraceError> {
    let (z0, jet0) = correct(f, kind, seed, ctl).ok_or(TraceError::SeedInvalid { seed })?;
    if jet0.d1.norm() < 1e-12 {
        return Err(TraceError::SeedInvalid { seed });
    }
    let (_, g) = constraint(kind, &jet0);
    let tangent = Complex64::new(0.0, 1.0) * g / g.norm();

    let fwd = trace_direction(f, kind, z0, &jet0, tangent, ctl, window);
    let mut pts: Vec<Complex64>;
    let ends: [Endpoint; 2];
    let mut crossings = fwd.crossings.clone();
    if fwd.closed {
        pts = fwd.points;
        ends = [Endpoint::ClosedLoop, Endpoint::ClosedLoop];
    } else {
        let bwd = trace_direction(f, kind, z0, &jet0, -tangent, ctl, window);
        crossings.extend(bwd.crossings.iter().copied());
        pts = bwd.points.into_iter().rev().collect();
        pts.extend(fwd.points.iter().skip(1));
        ends = [bwd.end, fwd.end];
    }

    // de-duplicate branch crossings
    crossings.dedup_by(|a, b| (*a - *b).norm() < 1e-9);

    let mut comp = CurveComponent {
        kind,
        points: pts.iter().map(|p| [p.re, p.im]).collect(),
        color: Color::NA,
        image_interval: ImageInterval::NA,
        start_end: ends,
        branch_crossings: crossings.iter().map(|p| [p.re, p.im]).collect(),
    };
    classify(f, &mut comp, &pts);
    Ok(comp)
}

/// Bidirectional continuation for a catalogued function.
pub fn trace(
    fid: FunctionId,
    kind: CurveKind,
    seed: Complex64,
    ctl: &StepControl,
    window: &Window,
) -> Result<CurveComponent, TraceError> {
    trace_fn(&fid, kind, seed, ctl, window)
}

/// Fill color and image-interval tags from interior samples.
pub(crate) fn classify<F: AnalyticFn + ?Sized>(
    f: &F,
    comp: &mut CurveComponent,
    pts: &[Complex64],
) {
    if !matches!(comp.kind, CurveKind::PreimageRealAxis) || pts.len() < 3 {
        return;
    }
    let stride = (pts.len() / 48).max(1);
    let mut re_min = f64::INFINITY;
    let mut re_max = f64::NEG_INFINITY;
    for p in pts.iter().step_by(stride).skip(1) {
        if let Ok(jet) = f.eval2(*p) {
            re_min = re_min.min(jet.f.re);
            re_max = re_max.max(jet.f.re);
        }
    }
    if !re_min.is_finite() {
        return;
    }
    comp.color = if re_max < 0.0 {
        Color::Red
    } else if re_min > 0.0 {
        Color::Black
    } else {
        Color::NA
    };
    comp.image_interval = if re_max < 1.0 {
        ImageInterval::BelowOne
    } else if re_min > 1.0 {
        ImageInterval::AboveOne
    } else if re_max > 1.0 && re_min < 0.0 {
        ImageInterval::WholeAxis
    } else {
        ImageInterval::NA
    };
}

/// Grid scan for points satisfying the constraint, polished by the
/// corrector and de-duplicated.
pub fn seeds_for<F: AnalyticFn + ?Sized>(
    f: &F,
    kind: CurveKind,
    window: &Window,
    grid_n: usize,
    ctl: &StepControl,
) -> Result<Vec<Complex64>, TraceError> {
    assert!(grid_n >= 8, "grid_n must be at least 8");
    let mut cvals = vec![f64::NAN; (grid_n + 1) * (grid_n + 1)];
    let dx = window.width() / grid_n as f64;
    let dy = window.height() / grid_n as f64;
    let at = |i: usize, j: usize| {
        Complex64::new(
            window.sigma_min + i as f64 * dx,
            window.t_min + j as f64 * dy,
        )
    };
    for j in 0..=grid_n {
        for i in 0..=grid_n {
            if let Ok(jet) = f.eval2(at(i, j)) {
                if jet.f.norm() < POLE_LIMIT {
                    let (c, _) = constraint(kind, &jet);
                    cvals[j * (grid_n + 1) + i] = c;
                }
            }
        }
    }
    let mut raw = Vec::new();
    let mut push_edge = |a: Complex64, b: Complex64, ca: f64, cb: f64| {
        if !(ca.is_finite() && cb.is_finite()) || ca * cb > 0.0 {
            return;
        }
        // linear estimate then corrector
        let t = if (cb - ca).abs() > 0.0 { -ca / (cb - ca) } else { 0.5 };
        raw.push(a + t.clamp(0.0, 1.0) * (b - a));
    };
    for j in 0..=grid_n {
        for i in 0..grid_n {
            push_edge(
                at(i, j),
                at(i + 1, j),
                cvals[j * (grid_n + 1) + i],
                cvals[j * (grid_n + 1) + i + 1],
            );
        }
    }
    for j in 0..grid_n {
        for i in 0..=grid_n {
            push_edge(
                at(i, j),
                at(i, j + 1),
                cvals[j * (grid_n + 1) + i],
                cvals[(j + 1) * (grid_n + 1) + i],
            );
        }
    }
    // pole-ring probes: tiny circle components around poles are invisible
    // to a coarse grid
    if let CurveKind::PreimageCircle { rho } = kind {
        for p in pole_candidates(f, window) {
            for k in 0..8 {
                let th = k as f64 * std::f64::consts::FRAC_PI_4;
                // |f| ~ |res| / r near a simple pole; probe a ring at the
                // radius where the modulus crosses rho
                let guess_r = estimated_residue(f, p) / rho;
                if guess_r.is_finite() && guess_r > 1e-14 {
                    raw.push(p + Complex64::from_polar(guess_r, th));
                }
            }
        }
    }
    let mut out: Vec<Complex64> = Vec::new();
    for cand in raw {
        if let Some((z, jet)) = correct(f, kind, cand, ctl) {
            if !window.contains(z) || jet.d1.norm() < 1e-12 {
                continue;
            }
            if out.iter().all(|&q| (q - z).norm() > ctl.min_step) {
                out.push(z);
            }
        }
    }
    if out.is_empty() {
        return Err(TraceError::NoSeedsFound);
    }
    Ok(out)
}

fn pole_candidates<F: AnalyticFn + ?Sized>(f: &F, window: &Window) -> Vec<Complex64> {
    // walk the window on a coarse lattice and collect distinct nearby poles
    let mut out: Vec<Complex64> = Vec::new();
    let n = 24;
    for j in 0..=n {
        for i in 0..=n {
            let z = Complex64::new(
                window.sigma_min + window.width() * i as f64 / n as f64,
                window.t_min + window.height() * j as f64 / n as f64,
            );
            if let Some(p) = f.nearest_pole(z) {
                if window.contains(p) && out.iter().all(|&q| (q - p).norm() > 1e-9) {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn estimated_residue<F: AnalyticFn + ?Sized>(f: &F, pole: Complex64) -> f64 {
    // |res| ~ |f(p + d)| * d for small d off the pole
    let d = 1e-5;
    match f.eval2(pole + Complex64::new(d, d)) {
        Ok(jet) => jet.f.norm() * (2.0f64).sqrt() * d,
        Err(_) => f64::NAN,
    }
}
