//! Adaptive predictor-corrector continuation of pre-image curves:
//! components of f^{-1}(real axis), f^{-1}(|w| = rho), f^{-1}(arg w = theta)
//! and lifts of image segments, with passage through simple branch points.

mod assemble;
mod engine;

pub use assemble::{
    crossing_audit, lift_segment, merge_radius, preimage_circle, preimage_real_axis, AuditReport,
    LiftEnd, LiftResult,
};
pub use engine::{branch_continue, seeds_for, trace, trace_fn};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Rectangle of interest in the z-plane; unbounded curves are truncated at
/// its edges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Window {
    pub fn new(sigma_min: f64, sigma_max: f64, t_min: f64, t_max: f64) -> Window {
        assert!(sigma_min < sigma_max && t_min < t_max, "degenerate window");
        Window { sigma_min, sigma_max, t_min, t_max }
    }

    #[inline]
    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.sigma_min && z.re <= self.sigma_max && z.im >= self.t_min && z.im <= self.t_max
    }

    /// Clip the segment from `inside` to `outside` against the boundary.
    pub fn clip(&self, inside: Complex64, outside: Complex64) -> Complex64 {
        let d = outside - inside;
        let mut t = 1.0f64;
        if d.re > 0.0 {
            t = t.min((self.sigma_max - inside.re) / d.re);
        }
        if d.re < 0.0 {
            t = t.min((self.sigma_min - inside.re) / d.re);
        }
        if d.im > 0.0 {
            t = t.min((self.t_max - inside.im) / d.im);
        }
        if d.im < 0.0 {
            t = t.min((self.t_min - inside.im) / d.im);
        }
        inside + t.max(0.0) * d
    }

    pub fn width(&self) -> f64 {
        self.sigma_max - self.sigma_min
    }

    pub fn height(&self) -> f64 {
        self.t_max - self.t_min
    }
}

/// Which level set is being traced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum CurveKind {
    PreimageRealAxis,
    PreimageCircle { rho: f64 },
    PreimageRay { theta: f64 },
    LiftSegment { w0: [f64; 2], w1: [f64; 2] },
}

/// Half-axis color of a component: red maps into the negative real
/// half-axis, black into the positive one. Components whose image spans
/// both (through a zero) stay unclassified; their segments are colored
/// pointwise at render time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Color {
    Red,
    Black,
    NA,
}

/// Which sub-interval of the real axis the component maps into; the
/// boundary value is the quasi-lacunary 1 of the zeta geometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImageInterval {
    BelowOne,
    AboveOne,
    WholeAxis,
    NA,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Endpoint {
    /// truncated at the window edge; `essential_guard` marks a refusal to
    /// enter the guard disk around an essential singularity instead
    WindowBoundary { essential_guard: bool },
    Pole { re: f64, im: f64 },
    BranchPointCrossing { re: f64, im: f64 },
    ClosedLoop,
    /// corrector stalled below min_step; the last good point is kept
    Stalled,
}

/// One traced connected component.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveComponent {
    pub kind: CurveKind,
    pub points: Vec<[f64; 2]>,
    pub color: Color,
    pub image_interval: ImageInterval,
    pub start_end: [Endpoint; 2],
    /// interior branch-point passages (the curve continues straight
    /// through; the crossing pair is spawned separately)
    pub branch_crossings: Vec<[f64; 2]>,
}

impl CurveComponent {
    pub fn point(&self, i: usize) -> Complex64 {
        Complex64::new(self.points[i][0], self.points[i][1])
    }

    pub fn points_c(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.start_end[0], Endpoint::ClosedLoop)
            || matches!(self.start_end[1], Endpoint::ClosedLoop)
    }
}

/// Step-size and tolerance knobs for the continuation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StepControl {
    pub max_step: f64,
    pub min_step: f64,
    /// corrector target, applied relative to max(1, |f|)
    pub corrector_tol: f64,
    /// aimed arc-length-times-curvature per step
    pub curvature_target: f64,
    pub max_points: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            max_step: 0.05,
            min_step: 1e-6,
            corrector_tol: 1e-10,
            curvature_target: 0.02,
            max_points: 200_000,
        }
    }
}

#[derive(Debug, Error, Clone)]
pub enum TraceError {
    #[error("window contains no component of the requested pre-image")]
    NoSeedsFound,
    #[error("corrector stalled at min_step near {last}")]
    StepCollapse { last: Complex64 },
    #[error("seed {seed} does not satisfy the constraint")]
    SeedInvalid { seed: Complex64 },
    #[error("higher-order critical point at {at}: |f''| below tolerance too")]
    HigherOrderCritical { at: Complex64 },
    #[error("function evaluation failed: {0}")]
    Eval(#[from] crate::funcval::FuncError),
}

#[cfg(test)]
mod tests;
