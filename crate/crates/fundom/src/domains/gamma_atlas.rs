//! The Gamma domain atlas: walls are the upper halves of the pre-image
//! curves through the real derivative zeros plus the non-crossing curves
//! higher up; every domain lies between two consecutive positive-image
//! (black) walls with the single negative-image (red) wall interior, and
//! maps onto the plane slit along [0, +inf) plus, for the left family, the
//! ray up to the value at the interior crossing.

use num_complex::Complex64;

use super::polygon::{boundary_param, region_between, Wall};
use super::{Atlas, BoundarySource, DomainError, DomainLabel, FundamentalDomain, SlitPiece, SlitSpec};
use crate::critpoints;
use crate::funcval::{AnalyticFn, FunctionId};
use crate::tracer::{preimage_real_axis, Color, StepControl, Window};

struct WallInfo {
    wall: Wall,
    color: Color,
    /// real-axis anchor for crossing walls (the derivative zero)
    anchor: Option<f64>,
}

/// Build the atlas on `window` (symmetric about the real axis: domains are
/// constructed in the upper half and mirrored), keeping domains whose
/// index lies in `n_range`.
pub fn gamma_domains(
    window: &Window,
    n_range: (i32, i32),
    ctl: &StepControl,
) -> Result<Atlas, DomainError> {
    let fid = FunctionId::Gamma;
    // trace beyond the requested window on the right and top: the domains
    // are unbounded in that direction and a closure at moderate |Gamma|
    // would make most winding targets truncation casualties
    let upper = Window::new(
        window.sigma_min,
        window.sigma_max.max(12.0),
        0.0,
        (window.t_max + 4.0).max(10.0),
    );

    // derivative zeros inside the sigma range seed the crossing walls
    let n_max = (-window.sigma_min).floor().max(0.0) as u32;
    let crit = critpoints::gamma_crit_points(n_max)?;
    let anchors: Vec<f64> = crit
        .iter()
        .map(|c| c.location.re)
        .filter(|x| *x > window.sigma_min && *x < window.sigma_max)
        .collect();
    let crit_pts: Vec<Complex64> = anchors.iter().map(|&x| Complex64::new(x, 0.0)).collect();

    let comps = preimage_real_axis(&fid, &upper, ctl, &crit_pts, &[]);

    // walls: skip the real-axis segments, keep curves with both endpoints
    // on the upper-window boundary
    let mut walls: Vec<WallInfo> = Vec::new();
    for c in &comps {
        let pts = c.points_c();
        let max_im = pts.iter().map(|p| p.im.abs()).fold(0.0, f64::max);
        if max_im < 1e-4 {
            continue; // the axis itself: it becomes the closure bottom
        }
        let anchor = anchors
            .iter()
            .copied()
            .find(|&x| {
                let a = Complex64::new(x, 0.0);
                (pts[0] - a).norm() < 1e-3 || (*pts.last().unwrap() - a).norm() < 1e-3
            });
        if let Some(w) = Wall::from_polyline(&upper, pts) {
            walls.push(WallInfo { wall: w, color: c.color, anchor });
        }
    }
    walls.sort_by(|a, b| a.wall.u_start.total_cmp(&b.wall.u_start));

    // consecutive walls must nest and alternate color
    for pair in walls.windows(2) {
        if !pair[0].wall.encloses(&pair[1].wall) {
            return Err(DomainError::IncompleteBoundary);
        }
        if pair[0].color == pair[1].color || pair[0].color == Color::NA {
            return Err(DomainError::IncompleteBoundary);
        }
    }

    // index origin: the black wall anchored at the positive derivative zero
    let p0 = walls
        .iter()
        .position(|w| w.anchor.map(|x| x > 0.0).unwrap_or(false))
        .ok_or(DomainError::IncompleteBoundary)?;
    if walls[p0].color != Color::Black {
        return Err(DomainError::IncompleteBoundary);
    }

    let mut domains = Vec::new();
    // walls of the same parity as p0 are the black bounding ones; each
    // domain spans [black_i, black_{i+2}] with the red wall i+1 interior
    for outer_i in (p0 % 2..walls.len().saturating_sub(2)).step_by(2) {
        let inner_i = outer_i + 2;
        let index = ((outer_i as i32) - (p0 as i32)) / 2 + 1;
        if index < n_range.0 || index > n_range.1 {
            continue;
        }
        let (pts, src) = region_between(&upper, &walls[outer_i].wall, &walls[inner_i].wall);
        let (pts, src) = super::polygon::indent_poles(&fid, pts, src);
        let mut slit = SlitSpec {
            pieces: vec![SlitPiece::RealInterval { a: 0.0, b: f64::INFINITY }],
        };
        // the interior wall of a left-family domain is anchored at an odd
        // derivative zero; the slit then extends to its (negative) value
        if let Some(x) = walls[outer_i + 1].anchor {
            let g = fid.eval2(Complex64::new(x, 0.0))?.f.re;
            slit.pieces.push(SlitPiece::RealInterval { a: f64::NEG_INFINITY, b: g });
        }
        let dom = FundamentalDomain {
            label: DomainLabel { index, conj: false, strip_ref: None },
            fid,
            boundary: pts.iter().map(|p| [p.re, p.im]).collect(),
            sources: src.clone(),
            slit: slit.clone(),
            truncated: true,
        };
        // mirror domain: conjugated boundary (reversed to stay ccw)
        let mirror = FundamentalDomain {
            label: DomainLabel { index, conj: true, strip_ref: None },
            fid,
            boundary: pts.iter().rev().map(|p| [p.re, -p.im]).collect(),
            sources: {
                let mut s = src;
                s.reverse();
                s
            },
            slit,
            truncated: true,
        };
        domains.push(dom);
        domains.push(mirror);
    }
    if domains.is_empty() {
        return Err(DomainError::IncompleteBoundary);
    }

    let full = Window::new(upper.sigma_min, upper.sigma_max, -upper.t_max, upper.t_max);
    Ok(Atlas { fid, window: full, domains, strips: Vec::new() })
}

/// Expose the rectangle parameter for tests.
#[allow(dead_code)]
pub(crate) fn wall_param(w: &Window, p: Complex64) -> f64 {
    boundary_param(w, p)
}
