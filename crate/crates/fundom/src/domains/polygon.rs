//! Closure of domain boundaries along the window rectangle.
//!
//! Every wall in the assemblies here runs between two points of the
//! window boundary (counting the real-axis bottom of an upper-half
//! window), and adjacent walls have nested boundary-parameter intervals:
//! the earlier wall of a pair encloses the later one. The region between
//! two walls then closes with two arcs of the rectangle.

use num_complex::Complex64;

use super::BoundarySource;
use crate::tracer::Window;

/// Arc-length parameter of a boundary point along the rectangle, walked
/// counterclockwise from the bottom-left corner: bottom, right, top, left.
pub fn boundary_param(w: &Window, p: Complex64) -> f64 {
    let wd = w.width();
    let ht = w.height();
    let eps = 1e-7 * (wd + ht);
    if (p.im - w.t_min).abs() < eps {
        return (p.re - w.sigma_min).clamp(0.0, wd);
    }
    if (p.re - w.sigma_max).abs() < eps {
        return wd + (p.im - w.t_min).clamp(0.0, ht);
    }
    if (p.im - w.t_max).abs() < eps {
        return wd + ht + (w.sigma_max - p.re).clamp(0.0, wd);
    }
    if (p.re - w.sigma_min).abs() < eps {
        return 2.0 * wd + ht + (w.t_max - p.im).clamp(0.0, ht);
    }
    f64::NAN
}

fn param_point(w: &Window, u: f64) -> Complex64 {
    let wd = w.width();
    let ht = w.height();
    if u <= wd {
        Complex64::new(w.sigma_min + u, w.t_min)
    } else if u <= wd + ht {
        Complex64::new(w.sigma_max, w.t_min + (u - wd))
    } else if u <= 2.0 * wd + ht {
        Complex64::new(w.sigma_max - (u - wd - ht), w.t_max)
    } else {
        Complex64::new(w.sigma_min, w.t_max - (u - 2.0 * wd - ht))
    }
}

/// Points along the rectangle from parameter `a` to `b` (a < b), inserting
/// the corners passed on the way, endpoints excluded.
pub fn boundary_arc(w: &Window, a: f64, b: f64) -> Vec<Complex64> {
    let wd = w.width();
    let ht = w.height();
    let corners = [wd, wd + ht, 2.0 * wd + ht, 2.0 * wd + 2.0 * ht];
    let mut out = Vec::new();
    for &c in &corners {
        if c > a + 1e-12 && c < b - 1e-12 {
            out.push(param_point(w, c));
        }
    }
    out
}

/// A wall oriented so its first endpoint has the smaller rectangle
/// parameter.
#[derive(Clone, Debug)]
pub struct Wall {
    pub points: Vec<Complex64>,
    pub u_start: f64,
    pub u_end: f64,
}

impl Wall {
    /// Build from a traced polyline whose endpoints lie on the window
    /// boundary (or on the bottom axis). Returns None if an endpoint is
    /// interior.
    pub fn from_polyline(w: &Window, mut pts: Vec<Complex64>) -> Option<Wall> {
        if pts.len() < 2 {
            return None;
        }
        let ua = boundary_param(w, *pts.first().unwrap());
        let ub = boundary_param(w, *pts.last().unwrap());
        if !ua.is_finite() || !ub.is_finite() {
            return None;
        }
        if ua <= ub {
            Some(Wall { points: pts, u_start: ua, u_end: ub })
        } else {
            pts.reverse();
            Some(Wall { points: pts, u_start: ub, u_end: ua })
        }
    }

    /// True when this wall's parameter interval contains the other's.
    pub fn encloses(&self, other: &Wall) -> bool {
        self.u_start <= other.u_start + 1e-9 && other.u_end <= self.u_end + 1e-9
    }
}

/// Closed polygon of the region between the outer and the inner wall:
/// rectangle arc from outer start to inner start, the inner wall, the
/// rectangle arc from inner end to outer end, the outer wall reversed.
/// The source mask marks wall vertices against closure vertices.
pub fn region_between(
    w: &Window,
    outer: &Wall,
    inner: &Wall,
) -> (Vec<Complex64>, Vec<BoundarySource>) {
    let mut pts = Vec::new();
    let mut src = Vec::new();
    let push = |p: Complex64, s: BoundarySource, pts: &mut Vec<Complex64>, src: &mut Vec<BoundarySource>| {
        if pts.last().map(|q: &Complex64| (*q - p).norm() > 1e-12).unwrap_or(true) {
            pts.push(p);
            src.push(s);
        }
    };
    // along the rectangle from outer.u_start to inner.u_start
    push(outer.points[0], BoundarySource::Closure, &mut pts, &mut src);
    for p in boundary_arc(w, outer.u_start, inner.u_start) {
        push(p, BoundarySource::Closure, &mut pts, &mut src);
    }
    for &p in &inner.points {
        push(p, BoundarySource::Wall, &mut pts, &mut src);
    }
    for p in boundary_arc(w, inner.u_end, outer.u_end) {
        push(p, BoundarySource::Closure, &mut pts, &mut src);
    }
    for &p in outer.points.iter().rev() {
        push(p, BoundarySource::Wall, &mut pts, &mut src);
    }
    // drop a duplicated closing vertex
    if pts.len() > 1 && (pts[0] - *pts.last().unwrap()).norm() < 1e-12 {
        pts.pop();
        src.pop();
    }
    // normalize to counterclockwise so image windings come out +1
    let mut area = 0.0;
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        area += a.re * b.im - b.re * a.im;
    }
    if area < 0.0 {
        pts.reverse();
        src.reverse();
    }
    (pts, src)
}

/// Indent the polygon around poles sitting on its axis edges: a small
/// semicircle into the upper half-plane, so that windings of the image
/// around finite targets stay well-defined. The radius is set from the
/// pole residue so the function on the detour is comfortably larger than
/// any sampled target.
pub fn indent_poles<F: crate::funcval::AnalyticFn + ?Sized>(
    f: &F,
    pts: Vec<Complex64>,
    src: Vec<super::BoundarySource>,
) -> (Vec<Complex64>, Vec<super::BoundarySource>) {
    use super::BoundarySource as S;
    let n = pts.len();
    let mut out = Vec::with_capacity(n + 32);
    let mut osrc = Vec::with_capacity(n + 32);
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        out.push(a);
        osrc.push(src[i]);
        if a.im.abs() > 1e-9 || b.im.abs() > 1e-9 {
            continue;
        }
        // collect poles strictly inside the edge from a lattice scan
        let (lo, hi) = (a.re.min(b.re), a.re.max(b.re));
        let mut inside: Vec<Complex64> = Vec::new();
        let steps = ((hi - lo) / 0.25).ceil().max(1.0) as usize;
        for k in 0..=steps {
            let q = Complex64::new(lo + (hi - lo) * k as f64 / steps as f64, 0.0);
            if let Some(p) = f.nearest_pole(q) {
                if p.im.abs() < 1e-12
                    && p.re > lo + 1e-9
                    && p.re < hi - 1e-9
                    && inside.iter().all(|r| (r.re - p.re).abs() > 1e-9)
                {
                    inside.push(p);
                }
            }
        }
        if inside.is_empty() {
            continue;
        }
        let forward = b.re > a.re;
        inside.sort_by(|p, q| {
            if forward {
                p.re.total_cmp(&q.re)
            } else {
                q.re.total_cmp(&p.re)
            }
        });
        for p in inside {
            // residue scale from a probe just off the pole
            let probe = 1e-5;
            let res = match f.eval2(p + Complex64::new(0.0, probe)) {
                Ok(j) => j.f.norm() * probe,
                Err(_) => continue,
            };
            let eps = (res / 50.0).clamp(1e-9, 0.02);
            // semicircle over the pole, oriented with the edge direction
            let (start, end) = if forward {
                (std::f64::consts::PI, 0.0)
            } else {
                (0.0, std::f64::consts::PI)
            };
            for k in 0..=16 {
                let th = start + (end - start) * k as f64 / 16.0;
                out.push(p + Complex64::from_polar(eps, th));
                osrc.push(S::Puncture);
            }
        }
    }
    (out, osrc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn params_walk_counterclockwise() {
        let w = Window::new(0.0, 4.0, 0.0, 2.0);
        assert_eq!(boundary_param(&w, C::new(1.0, 0.0)), 1.0);
        assert_eq!(boundary_param(&w, C::new(4.0, 1.0)), 5.0);
        assert_eq!(boundary_param(&w, C::new(3.0, 2.0)), 7.0);
        assert_eq!(boundary_param(&w, C::new(0.0, 1.5)), 10.5);
        assert!(boundary_param(&w, C::new(2.0, 1.0)).is_nan());
    }

    #[test]
    fn region_between_two_vertical_chords() {
        let w = Window::new(0.0, 4.0, 0.0, 2.0);
        // two vertical walls at x = 1 and x = 2
        let outer = Wall::from_polyline(&w, vec![C::new(1.0, 0.0), C::new(1.0, 2.0)]).unwrap();
        let inner = Wall::from_polyline(&w, vec![C::new(2.0, 0.0), C::new(2.0, 2.0)]).unwrap();
        assert!(outer.encloses(&inner));
        let (poly, src) = region_between(&w, &outer, &inner);
        assert_eq!(poly.len(), src.len());
        // the strip 1 <= x <= 2 closed along bottom and top
        assert!(crate::geom::point_in_polygon(C::new(1.5, 1.0), &poly));
        assert!(!crate::geom::point_in_polygon(C::new(0.5, 1.0), &poly));
        assert!(!crate::geom::point_in_polygon(C::new(3.0, 1.0), &poly));
    }

    #[test]
    fn region_between_nested_arcs() {
        let w = Window::new(-2.0, 2.0, 0.0, 2.0);
        // outer: from bottom (-1, 0) to the top edge; inner: from bottom
        // (1, 0) to the right edge
        let outer = Wall::from_polyline(
            &w,
            vec![C::new(-1.0, 0.0), C::new(-1.2, 1.0), C::new(-1.3, 2.0)],
        )
        .unwrap();
        let inner =
            Wall::from_polyline(&w, vec![C::new(1.0, 0.0), C::new(1.5, 0.8), C::new(2.0, 1.0)])
                .unwrap();
        assert!(outer.encloses(&inner));
        let (poly, _) = region_between(&w, &outer, &inner);
        assert!(crate::geom::point_in_polygon(C::new(0.0, 0.5), &poly));
        assert!(crate::geom::point_in_polygon(C::new(0.0, 1.8), &poly));
        assert!(!crate::geom::point_in_polygon(C::new(-1.8, 1.0), &poly));
        assert!(!crate::geom::point_in_polygon(C::new(1.9, 0.2), &poly));
    }
}
