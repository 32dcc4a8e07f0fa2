//! Fundamental-domain assembly: the domain atlas for Gamma, the strip
//! decomposition and its subdivision for zeta, and the sampling-based
//! verification of the conformal-bijection contract of every domain.

mod gamma_atlas;
mod polygon;
mod verify;
mod zeta_atlas;

pub use gamma_atlas::gamma_domains;
pub use verify::{domain_verify, invert_in_domain, VerifyReport};
pub use zeta_atlas::{strip_subdivide, zeta_domains, zeta_strips};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::critpoints::CritPoint;
use crate::funcval::FunctionId;
use crate::geom;
use crate::tracer::{CurveComponent, Window};

/// One strip of the zeta geometry: the region between two consecutive
/// pre-image components of (1, +infinity).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Strip {
    pub index: u32,
    pub lower_boundary: CurveComponent,
    pub upper_boundary: CurveComponent,
    /// whole-axis components inside, plus the unique below-one component
    pub interior_components: Vec<CurveComponent>,
    /// count of whole-axis interior components
    pub m: usize,
    pub zeros: Vec<CritPoint>,
    pub one_points: Vec<CritPoint>,
    pub branch_points: Vec<CritPoint>,
    /// closed polygon of the truncated strip, for containment tests
    pub polygon: Vec<[f64; 2]>,
}

impl Strip {
    pub fn contains(&self, z: Complex64) -> bool {
        let poly: Vec<Complex64> =
            self.polygon.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        geom::point_in_polygon(z, &poly)
    }
}

/// A piece of the slit in the image plane.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SlitPiece {
    /// [a, b] on the real axis; infinite bounds allowed
    RealInterval { a: f64, b: f64 },
    /// polyline arc in the image plane
    ImageArc { points: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SlitSpec {
    pub pieces: Vec<SlitPiece>,
}

impl SlitSpec {
    /// Distance from a point of the image plane to the slit set.
    pub fn distance(&self, w: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for p in &self.pieces {
            let d = match p {
                SlitPiece::RealInterval { a, b } => {
                    let dx = if w.re < *a {
                        a - w.re
                    } else if w.re > *b {
                        w.re - b
                    } else {
                        0.0
                    };
                    (dx * dx + w.im * w.im).sqrt()
                }
                SlitPiece::ImageArc { points } => {
                    let pts: Vec<Complex64> =
                        points.iter().map(|p| Complex64::new(p[0], p[1])).collect();
                    geom::polyline_distance(w, &pts)
                }
            };
            best = best.min(d);
        }
        best
    }
}

/// Where a boundary vertex of a domain came from: a traced pre-image wall
/// (maps into the slit), the window-truncation closure (maps anywhere), or
/// a pole indentation (maps near the infinite end of the slit; counted for
/// windings, exempt from the slit-distance check).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundarySource {
    Wall,
    Closure,
    Puncture,
}

/// Display label of a domain: integer index along the leaf ordering, with
/// the mirror flag; zeta strip subdomains also remember (strip, slot).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainLabel {
    pub index: i32,
    pub conj: bool,
    pub strip_ref: Option<(u32, u32)>,
}

impl std::fmt::Display for DomainLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.conj {
            write!(f, "omega~_{}", self.index)?;
        } else {
            write!(f, "omega_{}", self.index)?;
        }
        if let Some((k, j)) = self.strip_ref {
            write!(f, " (strip {k} slot {j})")?;
        }
        Ok(())
    }
}

/// A fundamental domain: closed boundary chain (window-truncated where the
/// true domain is unbounded), slit specification and bookkeeping.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FundamentalDomain {
    pub label: DomainLabel,
    pub fid: FunctionId,
    /// closed polygon, first point not repeated
    pub boundary: Vec<[f64; 2]>,
    /// per-vertex provenance, same length as boundary
    pub sources: Vec<BoundarySource>,
    pub slit: SlitSpec,
    pub truncated: bool,
}

impl FundamentalDomain {
    pub fn boundary_c(&self) -> Vec<Complex64> {
        self.boundary.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        geom::point_in_polygon(z, &self.boundary_c())
    }

    /// Deterministic interior sample points (used for anchors and checks).
    pub fn interior_points(&self, count: usize, seed: u64) -> Vec<Complex64> {
        let poly = self.boundary_c();
        let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) =
            (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &poly {
            lo_x = lo_x.min(p.re);
            lo_y = lo_y.min(p.im);
            hi_x = hi_x.max(p.re);
            hi_y = hi_y.max(p.im);
        }
        let mut rng = crate::rng::Rng::new(seed);
        let mut out = Vec::new();
        let mut tries = 0;
        while out.len() < count && tries < 20_000 {
            tries += 1;
            let z = Complex64::new(rng.range(lo_x, hi_x), rng.range(lo_y, hi_y));
            if geom::point_in_polygon(z, &poly)
                && geom::polyline_distance(z, &poly) > 1e-3
            {
                out.push(z);
            }
        }
        out
    }
}

/// A full atlas over one window.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Atlas {
    pub fid: FunctionId,
    pub window: Window,
    pub domains: Vec<FundamentalDomain>,
    pub strips: Vec<Strip>,
}

impl Atlas {
    pub fn by_index(&self, index: i32, conj: bool) -> Option<&FundamentalDomain> {
        self.domains
            .iter()
            .find(|d| d.label.index == index && d.label.conj == conj)
    }
}

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("a required boundary component was truncated before closing; enlarge the window")]
    IncompleteBoundary,
    #[error("strip boundaries not separable at the ordering line; widen the window")]
    OrderingAmbiguity,
    #[error("the lift from {from} did not terminate at a known point (ended at {got})")]
    LiftMismatch { from: Complex64, got: Complex64 },
    #[error("subdivision arcs intersect; pairing rejected")]
    CurveCrossing,
    #[error("point lies on a domain boundary")]
    OnBoundary,
    #[error("point outside the atlas window")]
    OutsideAtlas,
    #[error(transparent)]
    Trace(#[from] crate::tracer::TraceError),
    #[error(transparent)]
    Crit(#[from] crate::critpoints::CritError),
    #[error(transparent)]
    Eval(#[from] crate::funcval::FuncError),
}

/// The unique domain whose boundary has odd crossing parity around `z`.
pub fn locate(z: Complex64, atlas: &Atlas) -> Result<DomainLabel, DomainError> {
    if !atlas.window.contains(z) {
        return Err(DomainError::OutsideAtlas);
    }
    let mut found = None;
    for d in &atlas.domains {
        let poly = d.boundary_c();
        if geom::polyline_distance(z, &poly) < 1e-6 {
            return Err(DomainError::OnBoundary);
        }
        if geom::point_in_polygon(z, &poly) {
            if found.is_some() {
                // overlapping domains would be an assembly defect
                return Err(DomainError::OnBoundary);
            }
            found = Some(d.label);
        }
    }
    found.ok_or(DomainError::OutsideAtlas)
}

#[cfg(test)]
mod tests;
