//! The zeta strip decomposition and fundamental-domain atlas.
//!
//! Strips are the regions between consecutive pre-image components of
//! (1, +infinity), ordered by their crossing of a vertical line near the
//! right window edge (every such component escapes right with the
//! function tending to 1). An m-strip carries m whole-axis interior
//! components and m+1 zeros; connecting each one-point to its branch
//! point by the lift of a straight image segment cuts the strip into m+1
//! fundamental domains.

use num_complex::Complex64;

use super::polygon::{region_between, Wall};
use super::{
    Atlas, BoundarySource, DomainError, DomainLabel, FundamentalDomain, SlitPiece, SlitSpec, Strip,
};
use crate::critpoints::{self, CritKind, CritPoint};
use crate::funcval::{AnalyticFn, FunctionId};
use crate::geom;
use crate::tracer::{
    lift_segment, preimage_real_axis, CurveComponent, ImageInterval, LiftEnd, StepControl, Window,
};

const SIGMA_LO: f64 = -12.0;
const SIGMA_HI: f64 = 12.0;

/// Interpolated t-coordinate where the polyline crosses the vertical line
/// x = sigma.
fn crossing_t(pts: &[Complex64], sigma: f64) -> Option<f64> {
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (a.re - sigma) * (b.re - sigma) <= 0.0 && (a.re - b.re).abs() > 1e-15 {
            let t = (sigma - a.re) / (b.re - a.re);
            return Some(a.im + t * (b.im - a.im));
        }
    }
    None
}

/// The strip decomposition up to height t_max.
pub fn zeta_strips(t_max: f64, ctl: &StepControl) -> Result<Vec<Strip>, DomainError> {
    let (strips, _comps, _sn) = strips_and_components(t_max, ctl)?;
    Ok(strips)
}

fn strips_and_components(
    t_max: f64,
    ctl: &StepControl,
) -> Result<(Vec<Strip>, Vec<CurveComponent>, Vec<CritPoint>), DomainError> {
    let fid = FunctionId::Zeta;
    let t_upper = t_max + 10.0;
    let window = Window::new(SIGMA_LO, SIGMA_HI, 0.0, t_upper);

    // real branch points on the negative axis spawn the left walls
    let sigma_band = Window::new(SIGMA_LO + 0.05, -1.0, -0.02, 0.02);
    let real_bps = critpoints::zeta_prime_zeros(&sigma_band)?;
    let bp_pts: Vec<Complex64> = real_bps
        .iter()
        .filter(|c| c.location.im.abs() < 1e-9)
        .map(|c| Complex64::new(c.location.re, 0.0))
        .collect();

    // non-trivial zeros give guaranteed seeds on the whole-axis components
    let zeros = critpoints::zeta_nontrivial_zeros(t_upper)?;
    let zero_pts: Vec<Complex64> = zeros.iter().map(|z| z.location).collect();

    let comps = preimage_real_axis(&fid, &window, ctl, &bp_pts, &zero_pts);

    // boundaries: components mapping into (1, +inf)
    let mut boundaries: Vec<(f64, CurveComponent)> = Vec::new();
    for c in &comps {
        if c.image_interval != ImageInterval::AboveOne {
            continue;
        }
        let pts = c.points_c();
        if pts.iter().map(|p| p.im.abs()).fold(0.0, f64::max) < 1e-4 {
            continue; // the real segment (1, inf)
        }
        match crossing_t(&pts, SIGMA_HI - 1.0) {
            Some(t) => boundaries.push((t, c.clone())),
            None => return Err(DomainError::OrderingAmbiguity),
        }
    }
    boundaries.sort_by(|a, b| a.0.total_cmp(&b.0));
    for pair in boundaries.windows(2) {
        if (pair[0].0 - pair[1].0).abs() < 0.5 {
            return Err(DomainError::OrderingAmbiguity);
        }
    }

    // interior curve components and the special points
    let one_window = Window::new(-6.0, 8.0, 0.2, t_upper);
    let one_points = critpoints::zeta_one_points(&one_window)?;
    let v_window = Window::new(-1.0, 9.0, 0.2, t_upper);
    let v_points = critpoints::zeta_prime_zeros(&v_window)?;

    let mut strips = Vec::new();
    for (k, pair) in boundaries.windows(2).enumerate() {
        let (lower, upper) = (&pair[0].1, &pair[1].1);
        let lw = Wall::from_polyline(&window, lower.points_c())
            .ok_or(DomainError::IncompleteBoundary)?;
        let uw = Wall::from_polyline(&window, upper.points_c())
            .ok_or(DomainError::IncompleteBoundary)?;
        if !lw.encloses(&uw) {
            return Err(DomainError::IncompleteBoundary);
        }
        let (poly, _) = region_between(&window, &lw, &uw);
        let polygon: Vec<[f64; 2]> = poly.iter().map(|p| [p.re, p.im]).collect();
        let inside = |z: Complex64| geom::point_in_polygon(z, &poly);

        let interior: Vec<CurveComponent> = comps
            .iter()
            .filter(|c| {
                matches!(c.image_interval, ImageInterval::WholeAxis | ImageInterval::BelowOne)
                    && inside(c.point(c.points.len() / 2))
            })
            .cloned()
            .collect();
        let m = interior
            .iter()
            .filter(|c| c.image_interval == ImageInterval::WholeAxis)
            .count();
        strips.push(Strip {
            index: (k + 1) as u32,
            lower_boundary: lower.clone(),
            upper_boundary: upper.clone(),
            interior_components: interior,
            m,
            zeros: zeros.iter().filter(|z| inside(z.location)).copied().collect(),
            one_points: one_points.iter().filter(|u| inside(u.location)).copied().collect(),
            branch_points: v_points
                .iter()
                .filter(|v| v.location.im > 1e-6 && inside(v.location))
                .copied()
                .collect(),
            polygon,
        });
    }
    Ok((strips, comps, real_bps))
}

/// One cutting curve of a strip: the lift pair through a branch point
/// joined with the (1, inf) branch of the whole-axis component through the
/// paired one-point.
struct Cut {
    points: Vec<Complex64>,
    /// the image arc from 1 to the branch-point value
    arc: Vec<Complex64>,
}

/// Subdivide an m-strip into its m+1 fundamental domains. Returns the
/// domains in bottom-to-top order, labeled (strip, slot).
pub fn strip_subdivide(
    strip: &Strip,
    ctl: &StepControl,
) -> Result<Vec<FundamentalDomain>, DomainError> {
    let fid = FunctionId::Zeta;
    let window = Window::new(
        SIGMA_LO,
        SIGMA_HI,
        0.0,
        strip.polygon.iter().map(|p| p[1]).fold(0.0, f64::max) + 2.0,
    );

    let mut cuts: Vec<Cut> = Vec::new();
    for v in &strip.branch_points {
        let cut = build_cut(fid, strip, v.location, ctl, &window)?;
        cuts.push(cut);
    }
    // the cuts must not intersect each other
    for i in 0..cuts.len() {
        for j in (i + 1)..cuts.len() {
            if !geom::polyline_intersections(&cuts[i].points, &cuts[j].points).is_empty() {
                return Err(DomainError::CurveCrossing);
            }
        }
    }

    // walls bottom-to-top: lower boundary, cuts ordered by right-edge t,
    // upper boundary
    let mut walls: Vec<(Wall, Option<Vec<Complex64>>)> = Vec::new();
    let lower = Wall::from_polyline(&window, strip.lower_boundary.points_c())
        .ok_or(DomainError::IncompleteBoundary)?;
    walls.push((lower, None));
    let mut keyed: Vec<(f64, &Cut)> = cuts
        .iter()
        .map(|c| (c.points.last().map(|p| p.im).unwrap_or(0.0), c))
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (_, c) in keyed {
        let w = Wall::from_polyline(&window, c.points.clone())
            .ok_or(DomainError::IncompleteBoundary)?;
        walls.push((w, Some(c.arc.clone())));
    }
    let upper = Wall::from_polyline(&window, strip.upper_boundary.points_c())
        .ok_or(DomainError::IncompleteBoundary)?;
    walls.push((upper, None));

    let mut domains = Vec::new();
    for (slot, pair) in walls.windows(2).enumerate() {
        let (outer, inner) = (&pair[0], &pair[1]);
        if !outer.0.encloses(&inner.0) {
            return Err(DomainError::IncompleteBoundary);
        }
        let (pts, src) = region_between(&window, &outer.0, &inner.0);
        let mut slit = SlitSpec {
            pieces: vec![SlitPiece::RealInterval { a: 1.0, b: f64::INFINITY }],
        };
        for wall in [outer, inner] {
            if let Some(arc) = &wall.1 {
                slit.pieces.push(SlitPiece::ImageArc {
                    points: arc.iter().map(|p| [p.re, p.im]).collect(),
                });
            }
        }
        domains.push(FundamentalDomain {
            label: DomainLabel {
                index: 0, // assigned by the atlas assembly
                conj: false,
                strip_ref: Some((strip.index, slot as u32)),
            },
            fid,
            boundary: pts.iter().map(|p| [p.re, p.im]).collect(),
            sources: src,
            slit,
            truncated: true,
        });
    }
    Ok(domains)
}

/// Trace the two lifts of the straight segment [zeta(v) -> 1] out of the
/// branch point v: one lands on a one-point u of the strip, the other
/// escapes right with the function tending to 1. Combined with the
/// (1, inf) branch of the whole-axis component through u this is the
/// cutting curve.
fn build_cut(
    fid: FunctionId,
    strip: &Strip,
    v: Complex64,
    ctl: &StepControl,
    window: &Window,
) -> Result<Cut, DomainError> {
    let jet = fid.eval2(v)?;
    let zv = jet.f;
    let one = Complex64::new(1.0, 0.0);
    // local branches: z = v + eps * sqrt(2 (w - zv) / f''(v)) for w moving
    // from zv toward 1
    let dw = (one - zv) * 1e-6;
    let root = (2.0 * dw / jet.d2).sqrt();
    let mut ends: Vec<(Complex64, Vec<Complex64>, LiftEnd)> = Vec::new();
    for sign in [1.0, -1.0] {
        let from = v + sign * root;
        let w0 = fid.eval2(from)?.f;
        let lift = lift_segment(&fid, from, w0, one, ctl, window)?;
        let last = *lift.points.last().unwrap_or(&from);
        ends.push((last, lift.points, lift.end));
    }

    // classify the two ends
    let mut u_branch: Option<Vec<Complex64>> = None;
    let mut out_branch: Option<Vec<Complex64>> = None;
    let mut u_point = None;
    for (last, pts, end) in ends {
        let near_u = strip
            .one_points
            .iter()
            .map(|u| u.location)
            .min_by(|a, b| (a - last).norm().total_cmp(&(b - last).norm()));
        match end {
            LiftEnd::ReachedTarget => {
                if let Some(u) = near_u {
                    if (u - last).norm() < 1e-4 {
                        u_point = Some(u);
                        u_branch = Some(pts);
                        continue;
                    }
                }
                return Err(DomainError::LiftMismatch { from: v, got: last });
            }
            LiftEnd::WindowExit => {
                let fl = fid.eval2(last)?.f;
                if (fl - one).norm() < 0.05 {
                    out_branch = Some(pts);
                } else {
                    return Err(DomainError::LiftMismatch { from: v, got: last });
                }
            }
            _ => return Err(DomainError::LiftMismatch { from: v, got: last }),
        }
    }
    let (u_branch, out_branch, u_point) = match (u_branch, out_branch, u_point) {
        (Some(a), Some(b), Some(u)) => (a, b, u),
        _ => return Err(DomainError::LiftMismatch { from: v, got: v }),
    };

    // the (1, inf) branch of the whole-axis component through u
    let host = strip
        .interior_components
        .iter()
        .filter(|c| c.image_interval == ImageInterval::WholeAxis)
        .min_by(|a, b| {
            geom::polyline_distance(u_point, &a.points_c())
                .total_cmp(&geom::polyline_distance(u_point, &b.points_c()))
        })
        .ok_or(DomainError::LiftMismatch { from: v, got: u_point })?;
    let host_pts = host.points_c();
    if geom::polyline_distance(u_point, &host_pts) > 1e-3 {
        return Err(DomainError::LiftMismatch { from: v, got: u_point });
    }
    // split at the nearest vertex to u and keep the side with image > 1
    let u_idx = host_pts
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - u_point).norm().total_cmp(&(b.1 - u_point).norm()))
        .map(|(i, _)| i)
        .unwrap();
    let probe = |idx: usize| -> f64 {
        fid.eval2(host_pts[idx]).map(|j| j.f.re).unwrap_or(f64::NAN)
    };
    let take_front = {
        // walk a few vertices toward each end and compare Re f
        let step = (host_pts.len() / 24).max(2);
        let fwd = probe((u_idx + step).min(host_pts.len() - 1));
        let bwd = probe(u_idx.saturating_sub(step));
        fwd < bwd // the branch with larger Re f holds the (1, inf) image
    };
    let mut above_arc: Vec<Complex64> = if take_front {
        host_pts[..=u_idx].to_vec()
    } else {
        let mut v: Vec<Complex64> = host_pts[u_idx..].to_vec();
        v.reverse();
        v
    };
    // assemble: host (far end -> u) + u->v lift + v->right lift
    let mut pts = Vec::with_capacity(above_arc.len() + 256);
    pts.append(&mut above_arc);
    let mut back = u_branch;
    back.reverse();
    pts.extend(back);
    pts.push(v);
    pts.extend(out_branch);
    // drop consecutive duplicates
    pts.dedup_by(|a, b| (*a - *b).norm() < 1e-12);

    // image arc: the straight segment from 1 to zeta(v)
    Ok(Cut { points: pts, arc: vec![one, zv] })
}

/// The full upper-half-plane atlas for zeta up to height t_max: the left
/// family along the negative axis, the domain below the first strip, and
/// every strip subdivided. Domains are indexed consecutively, mirrors
/// carry the conj flag.
pub fn zeta_domains(t_max: f64, ctl: &StepControl) -> Result<Atlas, DomainError> {
    let fid = FunctionId::Zeta;
    let t_upper = t_max + 10.0;
    let window = Window::new(SIGMA_LO, SIGMA_HI, 0.0, t_upper);
    let (strips, comps, real_bps) = strips_and_components(t_max, ctl)?;
    if strips.is_empty() {
        return Err(DomainError::IncompleteBoundary);
    }

    // left walls: the red arcs rising from the even-index negative branch
    // points (negative local minima of zeta on the axis)
    let mut sigma_sorted: Vec<&CritPoint> = real_bps
        .iter()
        .filter(|c| c.location.im.abs() < 1e-9 && c.location.re < -2.0)
        .collect();
    sigma_sorted.sort_by(|a, b| b.location.re.total_cmp(&a.location.re)); // by |sigma| ascending
    let mut red_walls: Vec<(f64, Wall)> = Vec::new(); // (anchor sigma, wall)
    let mut black_anchor: Vec<f64> = Vec::new();
    for (i, bp) in sigma_sorted.iter().enumerate() {
        let x = bp.location.re;
        let val = fid.eval2(Complex64::new(x, 0.0))?.f.re;
        if val < 0.0 {
            // red wall: find the traced component anchored there
            let comp = comps.iter().find(|c| {
                let pts = c.points_c();
                let a = Complex64::new(x, 0.0);
                ((pts[0] - a).norm() < 1e-3 || (*pts.last().unwrap() - a).norm() < 1e-3)
                    && pts.iter().map(|p| p.im).fold(0.0, f64::max) > 1e-3
            });
            if let Some(c) = comp {
                if let Some(w) = Wall::from_polyline(&window, c.points_c()) {
                    red_walls.push((x, w));
                }
            }
        } else {
            black_anchor.push(x);
            let _ = i;
        }
    }

    let mut domains: Vec<FundamentalDomain> = Vec::new();

    // left family: between consecutive red walls, slit (-inf, value at the
    // interior black anchor]
    for i in 0..red_walls.len().saturating_sub(1) {
        let (x_in, inner) = &red_walls[i];
        let (x_out, outer) = &red_walls[i + 1];
        if !outer.encloses(inner) {
            continue;
        }
        let (pts, src) = region_between(&window, outer, inner);
        let (pts, src) = super::polygon::indent_poles(&fid, pts, src);
        // interior black anchor between the two red ones
        let anchor = black_anchor
            .iter()
            .copied()
            .find(|&x| x < *x_in && x > *x_out);
        let mut slit = SlitSpec { pieces: Vec::new() };
        if let Some(x) = anchor {
            let val = fid.eval2(Complex64::new(x, 0.0))?.f.re;
            slit.pieces.push(SlitPiece::RealInterval { a: f64::NEG_INFINITY, b: val });
        }
        domains.push(FundamentalDomain {
            label: DomainLabel { index: -(i as i32 + 1), conj: false, strip_ref: None },
            fid,
            boundary: pts.iter().map(|p| [p.re, p.im]).collect(),
            sources: src,
            slit,
            truncated: true,
        });
    }

    // the domain between the first red wall and the first strip boundary
    if let Some((_, first_red)) = red_walls.first() {
        let first_boundary = Wall::from_polyline(&window, strips[0].lower_boundary.points_c())
            .ok_or(DomainError::IncompleteBoundary)?;
        if first_red.encloses(&first_boundary) {
            let (pts, src) = region_between(&window, first_red, &first_boundary);
            let (pts, src) = super::polygon::indent_poles(&fid, pts, src);
            // slit: complement of (zeta(sigma_1), 1)
            let s1 = black_anchor.first().copied();
            let mut slit = SlitSpec {
                pieces: vec![SlitPiece::RealInterval { a: 1.0, b: f64::INFINITY }],
            };
            if let Some(x) = s1 {
                let val = fid.eval2(Complex64::new(x, 0.0))?.f.re;
                slit.pieces.push(SlitPiece::RealInterval { a: f64::NEG_INFINITY, b: val });
            }
            domains.push(FundamentalDomain {
                label: DomainLabel { index: 0, conj: false, strip_ref: None },
                fid,
                boundary: pts.iter().map(|p| [p.re, p.im]).collect(),
                sources: src,
                slit,
                truncated: true,
            });
        }
    }

    // strip subdivisions, numbered upward
    let mut next = 1;
    for strip in &strips {
        let mut subs = strip_subdivide(strip, ctl)?;
        for d in subs.iter_mut() {
            d.label.index = next;
            next += 1;
        }
        domains.extend(subs);
    }

    // mirrors: conjugated and reversed to stay counterclockwise
    let mirrors: Vec<FundamentalDomain> = domains
        .iter()
        .map(|d| {
            let mut m = d.clone();
            m.label.conj = true;
            m.boundary = d.boundary.iter().rev().map(|p| [p[0], -p[1]]).collect();
            m.sources = d.sources.iter().rev().copied().collect();
            m
        })
        .collect();
    domains.extend(mirrors);

    Ok(Atlas {
        fid,
        window: Window::new(SIGMA_LO, SIGMA_HI, -t_upper, t_upper),
        domains,
        strips,
    })
}


