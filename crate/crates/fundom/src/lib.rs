//! Numerical toolkit for the branched coverings of the plane by the Euler
//! Gamma function and the Riemann zeta function.
//!
//! The crate evaluates the functions and their derivatives ([`funcval`]),
//! traces pre-images of the real axis and of circles by adaptive
//! predictor-corrector continuation ([`tracer`]), locates and certifies
//! zeros, derivative zeros and one-points ([`critpoints`]), assembles the
//! fundamental-domain atlases ([`domains`]), evaluates the covering
//! transformation group ([`covergroup`]) and renders domain-coloring images
//! and curve overlays ([`render`]).

pub mod covergroup;
pub mod critpoints;
pub mod dd;
pub mod domains;
pub mod funcval;
pub mod geom;
pub mod oracle;
pub mod render;
pub mod rng;
pub mod store;
pub mod tracer;

pub use funcval::{EvalConfig, EvalResult, FuncError, FunctionId};

