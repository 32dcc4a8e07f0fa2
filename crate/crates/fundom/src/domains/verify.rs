//! Sampling verification of the conformal-bijection contract: boundary
//! images stay in the slit, off-slit targets have winding one, interior
//! points round-trip through Newton inversion.

use num_complex::Complex64;

use super::{locate, Atlas, BoundarySource, DomainError, FundamentalDomain};
use crate::funcval::AnalyticFn;
use crate::geom;
use crate::rng::Rng;

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub label: String,
    /// max distance of wall-boundary images from the slit, over samples of
    /// moderate modulus (an absolute placement below the coordinate
    /// quantization floor |f'| ulp(z) is impossible where |f| blows up)
    pub slit_distance_max: f64,
    /// max of distance / max(1, |f|) over all wall samples
    pub slit_distance_rel: f64,
    pub targets_total: usize,
    pub winding_one: usize,
    /// targets near the truncation image: failures there are flagged, not
    /// silently passed
    pub flagged: usize,
    pub flagged_failures: usize,
    pub unflagged_failures: usize,
    pub inversion_trials: usize,
    pub inversion_ok: usize,
}

impl VerifyReport {
    pub fn pass_fraction(&self) -> f64 {
        if self.targets_total == 0 {
            return 1.0;
        }
        self.winding_one as f64 / self.targets_total as f64
    }
}

/// Adaptive image of the boundary chain: vertices are refined until the
/// argument increment around any target stays resolvable.
fn boundary_image<F: AnalyticFn + ?Sized>(
    f: &F,
    dom: &FundamentalDomain,
) -> (Vec<Complex64>, Vec<Complex64>, Vec<BoundarySource>) {
    let pts = dom.boundary_c();
    let mut zs = Vec::new();
    let mut ws = Vec::new();
    let mut src = Vec::new();
    let n = pts.len();
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        // an edge is wall-grade when it comes from a traced wall on both
        // ends, or when it runs along the real axis (itself a pre-image
        // for the conjugate-symmetric functions here); pole indentations
        // stay in their own class
        let (s_a, s_b) = (dom.sources[i], dom.sources[(i + 1) % n]);
        let on_axis = a.im.abs() < 1e-9 && b.im.abs() < 1e-9;
        let sa = if s_a == BoundarySource::Puncture || s_b == BoundarySource::Puncture {
            if on_axis {
                BoundarySource::Wall
            } else {
                BoundarySource::Puncture
            }
        } else if (s_a == BoundarySource::Wall && s_b == BoundarySource::Wall) || on_axis {
            BoundarySource::Wall
        } else {
            BoundarySource::Closure
        };
        // subdivide each edge enough that the image is densely sampled
        let mut stack = vec![(a, b, 0u32)];
        let mut local = Vec::new();
        while let Some((p, q, depth)) = stack.pop() {
            let (fp, fq) = (f.eval2(p), f.eval2(q));
            let split = match (&fp, &fq) {
                (Ok(jp), Ok(jq)) => {
                    let d = (jq.f - jp.f).norm();
                    d > 0.25 * (1.0 + jp.f.norm().min(jq.f.norm())) && depth < 12
                }
                _ => depth < 6,
            };
            if split {
                let m = 0.5 * (p + q);
                stack.push((m, q, depth + 1));
                stack.push((p, m, depth + 1));
            } else {
                local.push(p);
            }
        }
        // the stack pops in reverse; restore forward order along the edge
        local.sort_by(|x, y| {
            let dx = (*x - a).norm();
            let dy = (*y - a).norm();
            dx.total_cmp(&dy)
        });
        for p in local {
            if let Ok(j) = f.eval2(p) {
                zs.push(p);
                ws.push(j.f);
                src.push(sa);
            }
        }
    }
    (zs, ws, src)
}

/// Run the three checks on one domain with `n_samples` off-slit targets.
pub fn domain_verify<F: AnalyticFn + ?Sized>(
    f: &F,
    atlas: &Atlas,
    dom: &FundamentalDomain,
    n_samples: usize,
    seed: u64,
) -> Result<VerifyReport, DomainError> {
    let (zs, ws, src) = boundary_image(f, dom);
    let _ = zs;

    // (a) wall images stay within the slit
    let mut slit_max = 0.0f64;
    let mut slit_rel = 0.0f64;
    for (w, s) in ws.iter().zip(src.iter()) {
        if *s == BoundarySource::Wall {
            let d = dom.slit.distance(*w);
            if w.norm() <= 1e4 {
                slit_max = slit_max.max(d);
            }
            slit_rel = slit_rel.max(d / w.norm().max(1.0));
        }
    }

    // the truncation image: closure vertices' images flag nearby targets
    let closure_img: Vec<Complex64> = ws
        .iter()
        .zip(src.iter())
        .filter(|(_, s)| **s == BoundarySource::Closure)
        .map(|(w, _)| *w)
        .collect();

    // (b) winding-one sampling over off-slit targets of moderate modulus
    let mut rng = Rng::new(seed);
    let mut winding_one = 0;
    let mut flagged = 0;
    let mut flagged_failures = 0;
    let mut unflagged_failures = 0;
    let mut produced = 0;
    let mut guard = 0;
    while produced < n_samples && guard < 100 * n_samples {
        guard += 1;
        let w = Complex64::new(rng.range(-6.0, 6.0), rng.range(-6.0, 6.0));
        if dom.slit.distance(w) < 0.1 {
            continue;
        }
        produced += 1;
        let is_flagged = closure_img
            .iter()
            .any(|c| (c - w).norm() < 0.6 * (1.0 + w.norm()));
        if is_flagged {
            flagged += 1;
        }
        let winding = geom::winding_of_samples(&ws, w).round() as i64;
        if winding == 1 {
            winding_one += 1;
        } else if is_flagged {
            flagged_failures += 1;
        } else {
            unflagged_failures += 1;
        }
    }

    // (c) interior round-trip: Newton inversion from a different interior
    // seed recovers the sample point
    let interior = dom.interior_points(12, seed ^ 0x5eed);
    let mut inversion_trials = 0;
    let mut inversion_ok = 0;
    if interior.len() >= 2 {
        for i in 0..interior.len() - 1 {
            let p = interior[i];
            let seed_pt = interior[(i + 1) % interior.len()];
            let target = match f.eval2(p) {
                Ok(j) => j.f,
                Err(_) => continue,
            };
            inversion_trials += 1;
            if let Some(z) = invert_in_domain(f, atlas, dom, target, seed_pt) {
                if (z - p).norm() < 1e-6 {
                    inversion_ok += 1;
                }
            }
        }
    }

    Ok(VerifyReport {
        label: dom.label.to_string(),
        slit_distance_max: slit_max,
        slit_distance_rel: slit_rel,
        targets_total: produced,
        winding_one,
        flagged,
        flagged_failures,
        unflagged_failures,
        inversion_trials,
        inversion_ok,
    })
}

/// Solve f(z) = target on the leaf containing `seed` by continuation: the
/// image walks from f(seed) to the target along a two-leg path that stays
/// clear of the slit, and the pre-image is Newton-tracked along it. A
/// plain damped Newton cannot cross regions where |f| spans many orders.
pub fn invert_in_domain<F: AnalyticFn + ?Sized>(
    f: &F,
    atlas: &Atlas,
    dom: &FundamentalDomain,
    target: Complex64,
    seed: Complex64,
) -> Option<Complex64> {
    let w0 = f.eval2(seed).ok()?.f;
    let window = atlas.window;
    let ctl = crate::tracer::StepControl::default();

    // the slits live on the real axis (plus short arcs near it); a high
    // midpoint on the side of the travel keeps the path off them
    let side = if (w0.im + target.im) >= 0.0 { 1.0 } else { -1.0 };
    let mid = Complex64::new(
        0.5 * (w0.re + target.re),
        side * 2.0 * (1.0 + w0.norm().max(target.norm())),
    );
    let direct_ok = {
        // straight segment if it never comes near the slit
        let mut ok = true;
        for k in 0..=16 {
            let w = w0 + (target - w0) * (k as f64 / 16.0);
            if dom.slit.distance(w) < 0.05 {
                ok = false;
                break;
            }
        }
        ok
    };
    let legs: Vec<(Complex64, Complex64)> = if direct_ok {
        vec![(w0, target)]
    } else {
        vec![(w0, mid), (mid, target)]
    };
    let mut z = seed;
    for (a, b) in legs {
        let lift = crate::tracer::lift_segment(f, z, a, b, &ctl, &window).ok()?;
        if lift.end != crate::tracer::LiftEnd::ReachedTarget {
            return None;
        }
        z = *lift.points.last()?;
    }
    // polish and confirm the leaf
    for _ in 0..20 {
        let jet = f.eval2(z).ok()?;
        let r = jet.f - target;
        if r.norm() < 1e-11 * (1.0 + target.norm()) {
            break;
        }
        if jet.d1.norm() < 1e-280 {
            return None;
        }
        z -= r / jet.d1;
    }
    match locate(z, atlas) {
        Ok(l) if l == dom.label => Some(z),
        _ => None,
    }
}
