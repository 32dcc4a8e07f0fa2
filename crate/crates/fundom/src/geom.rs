//! Polyline geometry shared by the tracer, the domain assembly and the
//! verification passes: point-in-polygon parity, segment intersection with
//! spatial hashing, distances, Hausdorff metric and winding numbers of
//! image curves.

use num_complex::Complex64;

/// Distance from `p` to the segment `a`-`b`.
pub fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + t * ab)).norm()
}

/// Distance from `p` to a polyline.
pub fn polyline_distance(p: Complex64, pts: &[Complex64]) -> f64 {
    if pts.is_empty() {
        return f64::INFINITY;
    }
    if pts.len() == 1 {
        return (p - pts[0]).norm();
    }
    pts.windows(2)
        .map(|w| segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Proper intersection point of segments a0-a1 and b0-b1, if any.
pub fn segment_intersection(
    a0: Complex64,
    a1: Complex64,
    b0: Complex64,
    b1: Complex64,
) -> Option<Complex64> {
    let r = a1 - a0;
    let s = b1 - b0;
    let denom = r.re * s.im - r.im * s.re;
    if denom.abs() < 1e-300 {
        return None;
    }
    let d = b0 - a0;
    let t = (d.re * s.im - d.im * s.re) / denom;
    let u = (d.re * r.im - d.im * r.re) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(a0 + t * r)
    } else {
        None
    }
}

/// Crossing-parity test of `p` against a closed polygon (last point joins
/// the first implicitly).
pub fn point_in_polygon(p: Complex64, poly: &[Complex64]) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (pi, pj) = (poly[i], poly[j]);
        if ((pi.im > p.im) != (pj.im > p.im))
            && (p.re < (pj.re - pi.re) * (p.im - pi.im) / (pj.im - pi.im) + pi.re)
        {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// One-sided Hausdorff distance from points of `a` to the polyline `b`.
pub fn hausdorff_one_sided(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .map(|&p| polyline_distance(p, b))
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance between two polylines.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    hausdorff_one_sided(a, b).max(hausdorff_one_sided(b, a))
}

/// Winding number of the closed image polyline `w` around `target`,
/// accumulating argument increments (each must stay below pi; the caller
/// provides a densely sampled curve).
pub fn winding_of_samples(w: &[Complex64], target: Complex64) -> f64 {
    let mut total = 0.0;
    for win in w.windows(2) {
        let a = win[0] - target;
        let b = win[1] - target;
        total += (b / a).arg();
    }
    // close the loop
    if let (Some(&first), Some(&last)) = (w.first(), w.last()) {
        if (first - last).norm() > 1e-14 {
            total += ((first - target) / (last - target)).arg();
        }
    }
    total / (2.0 * std::f64::consts::PI)
}

/// All pairwise intersections between two polylines, bucketed on a grid so
/// the scan stays near-linear.
pub fn polyline_intersections(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::new();
    if a.len() < 2 || b.len() < 2 {
        return out;
    }
    // bounding boxes per segment of b, hashed on a coarse grid
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in a.iter().chain(b.iter()) {
        lo_x = lo_x.min(p.re);
        lo_y = lo_y.min(p.im);
        hi_x = hi_x.max(p.re);
        hi_y = hi_y.max(p.im);
    }
    let span = ((hi_x - lo_x).max(hi_y - lo_y)).max(1e-12);
    let cell = span / 64.0;
    let key = |p: Complex64| -> (i64, i64) {
        (((p.re - lo_x) / cell) as i64, ((p.im - lo_y) / cell) as i64)
    };
    let mut grid: std::collections::HashMap<(i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    for (i, w) in b.windows(2).enumerate() {
        let (k0, k1) = (key(w[0]), key(w[1]));
        for kx in k0.0.min(k1.0)..=k0.0.max(k1.0) {
            for ky in k0.1.min(k1.1)..=k0.1.max(k1.1) {
                grid.entry((kx, ky)).or_default().push(i);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    for wa in a.windows(2) {
        let (k0, k1) = (key(wa[0]), key(wa[1]));
        for kx in k0.0.min(k1.0) - 1..=k0.0.max(k1.0) + 1 {
            for ky in k0.1.min(k1.1) - 1..=k0.1.max(k1.1) + 1 {
                if let Some(idxs) = grid.get(&(kx, ky)) {
                    for &i in idxs {
                        if seen.contains(&(kx, ky, i)) {
                            continue;
                        }
                        if let Some(p) =
                            segment_intersection(wa[0], wa[1], b[i], b[i + 1])
                        {
                            seen.insert((kx, ky, i));
                            // de-duplicate near-identical hits
                            if out
                                .iter()
                                .all(|&q: &Complex64| (q - p).norm() > 1e-9)
                            {
                                out.push(p);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn segment_distance_basic() {
        let d = segment_distance(C::new(0.0, 1.0), C::new(-1.0, 0.0), C::new(1.0, 0.0));
        assert!((d - 1.0).abs() < 1e-15);
        let d = segment_distance(C::new(3.0, 0.0), C::new(-1.0, 0.0), C::new(1.0, 0.0));
        assert!((d - 2.0).abs() < 1e-15);
    }

    #[test]
    fn intersection_cross() {
        let p = segment_intersection(
            C::new(-1.0, -1.0),
            C::new(1.0, 1.0),
            C::new(-1.0, 1.0),
            C::new(1.0, -1.0),
        )
        .unwrap();
        assert!(p.norm() < 1e-15);
        assert!(segment_intersection(
            C::new(0.0, 0.0),
            C::new(1.0, 0.0),
            C::new(0.0, 1.0),
            C::new(1.0, 1.0)
        )
        .is_none());
    }

    #[test]
    fn polygon_parity() {
        let square = [
            C::new(0.0, 0.0),
            C::new(2.0, 0.0),
            C::new(2.0, 2.0),
            C::new(0.0, 2.0),
        ];
        assert!(point_in_polygon(C::new(1.0, 1.0), &square));
        assert!(!point_in_polygon(C::new(3.0, 1.0), &square));
    }

    #[test]
    fn winding_circle() {
        let pts: Vec<C> = (0..200)
            .map(|k| {
                let th = k as f64 * std::f64::consts::TAU / 200.0;
                C::new(th.cos(), th.sin())
            })
            .collect();
        let w = winding_of_samples(&pts, C::new(0.2, 0.1));
        assert!((w - 1.0).abs() < 1e-12);
        let w0 = winding_of_samples(&pts, C::new(2.0, 0.0));
        assert!(w0.abs() < 1e-12);
    }

    #[test]
    fn hausdorff_of_shifted_lines() {
        let a: Vec<C> = (0..100).map(|k| C::new(k as f64 * 0.01, 0.0)).collect();
        let b: Vec<C> = (0..100).map(|k| C::new(k as f64 * 0.01, 0.05)).collect();
        let h = hausdorff(&a, &b);
        assert!((h - 0.05).abs() < 1e-12);
    }

    #[test]
    fn grid_intersections_match_naive() {
        let a: Vec<C> = (0..50).map(|k| C::new(k as f64 * 0.1 - 2.5, 0.0)).collect();
        let b: Vec<C> = (0..50).map(|k| C::new(0.7, k as f64 * 0.1 - 2.5)).collect();
        let hits = polyline_intersections(&a, &b);
        assert_eq!(hits.len(), 1);
        assert!((hits[0] - C::new(0.7, 0.0)).norm() < 1e-12);
    }
}
