//! Evaluation of Gamma, zeta, their derivatives and the derived functions,
//! as pure reentrant functions with error estimates.

pub mod consts;
pub mod gamma;
pub mod zeta;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use consts::EULER_GAMMA;

/// Which analytic function is under study. Fixes the pole set, the symmetry
/// and the evaluation route.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FunctionId {
    /// Euler Gamma: simple poles at 0, -1, -2, ..., no zeros.
    Gamma,
    /// Riemann zeta: one simple pole at s = 1.
    Zeta,
    /// Truncated canonical product with n factors; poles at 0..=-n.
    GammaPartial(u32),
    /// Gamma(1/(z - a)): poles at a - 1/n, essential point at a.
    GammaShift { a_re: f64, a_im: f64 },
    /// Gamma(z) + Gamma(1/z): poles at -n and -1/n, essential point at 0.
    GammaPlusGammaInv,
}

impl FunctionId {
    pub fn gamma_shift(a: Complex64) -> FunctionId {
        FunctionId::GammaShift { a_re: a.re, a_im: a.im }
    }

    pub fn shift_center(&self) -> Option<Complex64> {
        match self {
            FunctionId::GammaShift { a_re, a_im } => Some(Complex64::new(*a_re, *a_im)),
            _ => None,
        }
    }

    /// short tag used in stores and file names
    pub fn tag(&self) -> String {
        match self {
            FunctionId::Gamma => "gamma".into(),
            FunctionId::Zeta => "zeta".into(),
            FunctionId::GammaPartial(n) => format!("gamma-partial-{n}"),
            FunctionId::GammaShift { a_re, a_im } => format!("gamma-shift-{a_re}-{a_im}"),
            FunctionId::GammaPlusGammaInv => "gamma-plus-gamma-inv".into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuncError {
    #[error("evaluation at a pole: {at}")]
    Pole { at: Complex64 },
    #[error("evaluation at an essential singular point: {at}")]
    EssentialPoint { at: Complex64 },
    #[error("requested point exceeds the validity height: |Im| = {height}, limit {limit}")]
    Accuracy { height: f64, limit: f64 },
    #[error("domain error: {what}")]
    Domain { what: String },
}

/// Evaluation settings shared across the toolkit.
#[derive(Clone, Copy, Debug)]
pub struct EvalConfig {
    /// |Im s| beyond which the accuracy claim is refused (AccuracyError).
    pub validity_height: f64,
    /// distance to the nearest pole below which `near_pole` is flagged
    pub near_pole_dist: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { validity_height: 120.0, near_pole_dist: 1e-3 }
    }
}

impl EvalConfig {
    /// Same evaluator with the accuracy claim extended to larger heights;
    /// the Euler-Maclaurin term count scales with t, so this is the
    /// "high-t" switch.
    pub fn with_height(height: f64) -> Self {
        EvalConfig { validity_height: height, ..Default::default() }
    }
}

/// Value, derivative and bookkeeping for one evaluation.
#[derive(Clone, Copy, Debug)]
pub struct EvalResult {
    pub value: Complex64,
    pub derivative: Complex64,
    pub near_pole: bool,
    pub est_abs_error: f64,
}

/// Value with first and second derivative.
#[derive(Clone, Copy, Debug)]
pub struct Jet2 {
    pub f: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
}

/// A function the tracer and the critical-point finders can drive: value
/// plus two derivatives, and enough pole information to classify endpoints.
pub trait AnalyticFn: Sync {
    fn eval2(&self, z: Complex64) -> Result<Jet2, FuncError>;
    /// Nearest pole when one is relevant to `z` (used to classify curve
    /// endpoints); None for entire functions.
    fn nearest_pole(&self, z: Complex64) -> Option<Complex64>;
    fn essential_points(&self) -> Vec<Complex64> {
        Vec::new()
    }
}

impl AnalyticFn for FunctionId {
    fn eval2(&self, z: Complex64) -> Result<Jet2, FuncError> {
        // the trait powers the internal machinery (tracer, root finders,
        // winding walks), which manages its own validity; the height
        // guard applies to the public evaluation API
        eval_jet_cfg(*self, z, &EvalConfig { validity_height: f64::INFINITY, ..Default::default() })
    }

    fn nearest_pole(&self, z: Complex64) -> Option<Complex64> {
        match self {
            FunctionId::Gamma => {
                let n = (-z.re).round().max(0.0);
                let candidates = [n - 1.0, n, n + 1.0];
                candidates
                    .iter()
                    .filter(|&&k| k >= 0.0)
                    .map(|&k| Complex64::new(-k, 0.0))
                    .min_by(|a, b| (z - a).norm().total_cmp(&(z - b).norm()))
            }
            FunctionId::Zeta => Some(Complex64::new(1.0, 0.0)),
            FunctionId::GammaPartial(nmax) => {
                let n = (-z.re).round().clamp(0.0, *nmax as f64);
                Some(Complex64::new(-n, 0.0))
            }
            FunctionId::GammaShift { .. } => {
                let a = self.shift_center().unwrap();
                let w = 1.0 / (z - a);
                let k = (-w.re).round().max(1.0);
                [k - 1.0, k, k + 1.0]
                    .iter()
                    .filter(|&&k| k >= 1.0)
                    .map(|&k| a - 1.0 / k)
                    .min_by(|p, q| (z - p).norm().total_cmp(&(z - q).norm()))
            }
            FunctionId::GammaPlusGammaInv => {
                let mut best: Option<Complex64> = None;
                let mut push = |p: Complex64| {
                    if best.is_none() || (z - p).norm() < (z - best.unwrap()).norm() {
                        best = Some(p);
                    }
                };
                let n = (-z.re).round().max(0.0);
                for k in [n - 1.0, n, n + 1.0] {
                    if k >= 0.0 {
                        push(Complex64::new(-k, 0.0));
                    }
                }
                // the -1/n family accumulates at the essential point 0
                let w = 1.0 / z;
                let m = (-w.re).round().max(1.0);
                for k in [m - 1.0, m, m + 1.0] {
                    if k >= 1.0 {
                        push(Complex64::new(-1.0 / k, 0.0));
                    }
                }
                best
            }
        }
    }

    fn essential_points(&self) -> Vec<Complex64> {
        match self {
            FunctionId::GammaShift { .. } => vec![self.shift_center().unwrap()],
            FunctionId::GammaPlusGammaInv => vec![Complex64::new(0.0, 0.0)],
            _ => Vec::new(),
        }
    }
}

/// The Euler constant gamma.
pub fn euler_gamma_constant() -> f64 {
    EULER_GAMMA
}

/// Gamma with derivative and error estimate.
pub fn gamma_eval(z: Complex64) -> Result<EvalResult, FuncError> {
    gamma_eval_cfg(z, &EvalConfig::default())
}

pub fn gamma_eval_cfg(z: Complex64, cfg: &EvalConfig) -> Result<EvalResult, FuncError> {
    let v = gamma::gamma(z)?;
    let d = v * gamma::digamma_unchecked(z);
    Ok(EvalResult {
        value: v,
        derivative: d,
        near_pole: gamma::gamma_pole_distance(z) < cfg.near_pole_dist,
        est_abs_error: v.norm() * 5e-14,
    })
}

/// psi(z) = Gamma'(z)/Gamma(z).
pub fn gamma_log_deriv(z: Complex64) -> Result<Complex64, FuncError> {
    gamma::digamma(z)
}

/// Truncated canonical product with n factors.
pub fn gamma_partial(n: u32, z: Complex64) -> Result<Complex64, FuncError> {
    gamma::gamma_partial(n, z)
}

/// zeta with derivative and error estimate.
pub fn zeta_eval(s: Complex64) -> Result<EvalResult, FuncError> {
    zeta_eval_cfg(s, &EvalConfig::default())
}

pub fn zeta_eval_cfg(s: Complex64, cfg: &EvalConfig) -> Result<EvalResult, FuncError> {
    if s.im.abs() > cfg.validity_height {
        return Err(FuncError::Accuracy { height: s.im.abs(), limit: cfg.validity_height });
    }
    let r = zeta::zeta_jet(s)?;
    Ok(EvalResult {
        value: r.value,
        derivative: r.d1,
        near_pole: (s - 1.0).norm() < cfg.near_pole_dist,
        est_abs_error: r.err,
    })
}

/// Laurent expansion about s = 1 with `n_terms` Stieltjes terms.
pub fn zeta_laurent(s: Complex64, n_terms: usize) -> Result<Complex64, FuncError> {
    zeta::zeta_laurent(s, n_terms)
}

/// Cross-validation of the evaluators through the functional equation.
pub fn functional_equation_residual(s: Complex64) -> Result<f64, FuncError> {
    zeta::functional_equation_residual(s)
}

/// Dispatching evaluator over all function variants.
pub fn eval(fid: FunctionId, z: Complex64) -> Result<EvalResult, FuncError> {
    eval_cfg(fid, z, &EvalConfig::default())
}

pub fn eval_cfg(fid: FunctionId, z: Complex64, cfg: &EvalConfig) -> Result<EvalResult, FuncError> {
    let jet = eval_jet_cfg(fid, z, cfg)?;
    let near = fid
        .nearest_pole(z)
        .map(|p| (z - p).norm() < cfg.near_pole_dist)
        .unwrap_or(false);
    let est = match fid {
        FunctionId::Zeta => zeta::zeta_jet(z).map(|r| r.err).unwrap_or(f64::NAN),
        _ => jet.f.norm() * 5e-14,
    };
    Ok(EvalResult { value: jet.f, derivative: jet.d1, near_pole: near, est_abs_error: est })
}

/// Value plus two derivatives for any variant; the workhorse of the tracer.
pub fn eval_jet(fid: FunctionId, z: Complex64) -> Result<Jet2, FuncError> {
    eval_jet_cfg(fid, z, &EvalConfig::default())
}

pub fn eval_jet_cfg(fid: FunctionId, z: Complex64, cfg: &EvalConfig) -> Result<Jet2, FuncError> {
    match fid {
        FunctionId::Gamma => {
            let f = gamma::gamma(z)?;
            let psi = gamma::digamma_unchecked(z);
            let psi1 = gamma::trigamma_unchecked(z);
            Ok(Jet2 { f, d1: f * psi, d2: f * (psi * psi + psi1) })
        }
        FunctionId::Zeta => {
            if z.im.abs() > cfg.validity_height {
                return Err(FuncError::Accuracy {
                    height: z.im.abs(),
                    limit: cfg.validity_height,
                });
            }
            let r = zeta::zeta_jet(z)?;
            Ok(Jet2 { f: r.value, d1: r.d1, d2: r.d2 })
        }
        FunctionId::GammaPartial(n) => {
            let f = gamma::gamma_partial(n, z)?;
            let l1 = gamma::gamma_partial_log_deriv(n, z);
            let l2 = gamma::gamma_partial_log_deriv2(n, z);
            Ok(Jet2 { f, d1: f * l1, d2: f * (l1 * l1 + l2) })
        }
        FunctionId::GammaShift { .. } => {
            let a = fid.shift_center().unwrap();
            if z == a {
                return Err(FuncError::EssentialPoint { at: z });
            }
            let w = 1.0 / (z - a);
            if gamma::is_gamma_pole(w) || is_shift_pole(a, z) {
                return Err(FuncError::Pole { at: z });
            }
            let g = gamma::gamma(w)?;
            let psi = gamma::digamma_unchecked(w);
            let psi1 = gamma::trigamma_unchecked(w);
            let g1 = g * psi;
            let g2 = g * (psi * psi + psi1);
            let u = -w * w; // dw/dz
            let u1 = 2.0 * w * w * w; // d2w/dz2
            Ok(Jet2 { f: g, d1: g1 * u, d2: g2 * u * u + g1 * u1 })
        }
        FunctionId::GammaPlusGammaInv => {
            if z.re == 0.0 && z.im == 0.0 {
                return Err(FuncError::EssentialPoint { at: z });
            }
            if gamma::is_gamma_pole(z) || is_inv_pole(z) {
                return Err(FuncError::Pole { at: z });
            }
            let ga = {
                let f = gamma::gamma(z)?;
                let psi = gamma::digamma_unchecked(z);
                let psi1 = gamma::trigamma_unchecked(z);
                (f, f * psi, f * (psi * psi + psi1))
            };
            let w = 1.0 / z;
            let gb = {
                let f = gamma::gamma(w)?;
                let psi = gamma::digamma_unchecked(w);
                let psi1 = gamma::trigamma_unchecked(w);
                (f, f * psi, f * (psi * psi + psi1))
            };
            let z2 = z * z;
            Ok(Jet2 {
                f: ga.0 + gb.0,
                d1: ga.1 - gb.1 / z2,
                d2: ga.2 + gb.2 / (z2 * z2) + 2.0 * gb.1 / (z2 * z),
            })
        }
    }
}

fn is_shift_pole(a: Complex64, z: Complex64) -> bool {
    // z = a - 1/n exactly, for some positive integer n
    let d = z - a;
    if d.im != 0.0 || d.re >= 0.0 {
        return false;
    }
    let n = -1.0 / d.re;
    n.round() >= 1.0 && (n - n.round()).abs() == 0.0
}

fn is_inv_pole(z: Complex64) -> bool {
    if z.im != 0.0 || z.re >= 0.0 {
        return false;
    }
    let n = -1.0 / z.re;
    n >= 1.0 && n.fract() == 0.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn euler_constant_five_digits() {
        assert!((euler_gamma_constant() - 0.57722).abs() < 5e-6);
    }

    #[test]
    fn euler_constant_against_accelerated_oracle() {
        let oracle = crate::oracle::stieltjes_constants(0, 4000, 10)[0];
        assert!((euler_gamma_constant() - oracle).abs() < 1e-10);
    }

    #[test]
    fn gamma_against_spouge_reference() {
        // production route vs the double-double Spouge evaluator, up to the
        // heights the functional-equation factor needs
        for i in 0..12 {
            for j in 0..14 {
                let z = C::new(-5.75 + 1.5 * i as f64, 0.3 + 8.5 * j as f64);
                let a = eval_jet(FunctionId::Gamma, z).unwrap().f;
                let b = crate::oracle::gamma_dd_any(z);
                let rel = (a - b).norm() / b.norm().max(1e-290);
                // phase rounding of (z-1/2) ln z grows like t ln t; the
                // reflection zone stacks sin_pi rounding on top
                let phase = 3.3e-16 * z.im.abs() * z.norm().ln().max(1.0);
                let tol = if z.re >= 0.5 { 3e-14 + phase } else { 4e-12 };
                assert!(rel < tol, "z={z} rel={rel:e}");
            }
        }
    }

    #[test]
    fn zeta_against_alternating_series() {
        for &s in &[
            C::new(2.0, 0.0),
            C::new(0.5, 14.0),
            C::new(1.5, 8.0),
            C::new(-0.5, 3.0),
            C::new(-1.8, 11.0),
            C::new(3.0, -6.0),
        ] {
            let a = zeta_eval(s).unwrap().value;
            let b = crate::oracle::zeta_alternating(s);
            assert!((a - b).norm() < 1e-10 * (1.0 + a.norm()), "s={s}");
        }
    }

    #[test]
    fn derivative_finite_difference_sweep() {
        // spec window [-10,10]x[-40,40], 100 samples per variant, h = 1e-6
        let fids = [
            FunctionId::Gamma,
            FunctionId::Zeta,
            FunctionId::GammaPlusGammaInv,
        ];
        let mut rng = crate::rng::Rng::new(42);
        for fid in fids {
            let mut checked = 0;
            while checked < 100 {
                let z = C::new(rng.range(-10.0, 10.0), rng.range(-40.0, 40.0));
                let near = fid
                    .nearest_pole(z)
                    .map(|p| (z - p).norm() < 0.05)
                    .unwrap_or(false);
                let near_ess = fid
                    .essential_points()
                    .iter()
                    .any(|&e| (z - e).norm() < 0.2);
                if near || near_ess {
                    continue;
                }
                let h = 1e-6;
                let j = match eval_jet(fid, z) {
                    Ok(j) => j,
                    Err(_) => continue,
                };
                let fd = (eval_jet(fid, z + h).unwrap().f - eval_jet(fid, z - h).unwrap().f)
                    / (2.0 * h);
                assert!(
                    (j.d1 - fd).norm() <= 1e-5 * (1.0 + j.d1.norm()),
                    "{fid:?} z={z}"
                );
                checked += 1;
            }
        }
    }

    #[test]
    fn euler_constant_is_harmonic_limit() {
        // H_m - ln m approaches the constant from above
        let mut prev = f64::INFINITY;
        for m in [100u64, 10_000, 1_000_000] {
            let mut h = 0.0;
            for k in 1..=m {
                h += 1.0 / k as f64;
            }
            let approx = h - (m as f64).ln();
            let err = (approx - euler_gamma_constant()).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-5);
    }

    #[test]
    fn eval_dispatch_gamma_shift() {
        // shift center 0: f(1) = Gamma(1/1) = 1
        let fid = FunctionId::gamma_shift(C::new(0.0, 0.0));
        let r = eval(fid, C::new(1.0, 0.0)).unwrap();
        assert!((r.value - 1.0).norm() < 1e-13);
        // poles at a - 1/n
        let bad = eval(fid, C::new(-0.5, 0.0));
        assert!(matches!(bad, Err(FuncError::Pole { .. })));
        // essential point
        let ess = eval(fid, C::new(0.0, 0.0));
        assert!(matches!(ess, Err(FuncError::EssentialPoint { .. })));
    }

    #[test]
    fn eval_dispatch_sum_variant() {
        // f(2) = Gamma(2) + Gamma(1/2) = 1 + sqrt(pi)
        let r = eval(FunctionId::GammaPlusGammaInv, C::new(2.0, 0.0)).unwrap();
        assert!((r.value.re - (1.0 + 1.7724538509055160273)).abs() < 1e-12);
        assert!(matches!(
            eval(FunctionId::GammaPlusGammaInv, C::new(-0.25, 0.0)),
            Err(FuncError::Pole { .. })
        ));
    }

    #[test]
    fn shift_derivative_chain_rule() {
        let fid = FunctionId::gamma_shift(C::new(0.5, 0.25));
        let z = C::new(2.0, 1.0);
        let h = 1e-6;
        let j = eval_jet(fid, z).unwrap();
        let fd = (eval_jet(fid, z + h).unwrap().f - eval_jet(fid, z - h).unwrap().f) / (2.0 * h);
        assert!((j.d1 - fd).norm() < 1e-6 * (1.0 + j.d1.norm()));
    }

    #[test]
    fn conjugate_symmetry_all_variants() {
        let fids = [
            FunctionId::Gamma,
            FunctionId::Zeta,
            FunctionId::GammaPartial(50),
            FunctionId::gamma_shift(C::new(0.5, 0.0)),
            FunctionId::GammaPlusGammaInv,
        ];
        let z = C::new(1.7, 2.3);
        for fid in fids {
            let a = eval_jet(fid, z).unwrap().f;
            let b = eval_jet(fid, z.conj()).unwrap().f;
            assert!(
                (a.conj() - b).norm() <= 1e-12 * a.norm().max(1e-12),
                "{fid:?}"
            );
        }
    }

    #[test]
    fn near_pole_flagging() {
        let r = zeta_eval(C::new(1.0005, 0.0)).unwrap();
        assert!(r.near_pole);
        let r = zeta_eval(C::new(1.5, 0.0)).unwrap();
        assert!(!r.near_pole);
        let g = gamma_eval(C::new(-3.0001, 0.0)).unwrap();
        assert!(g.near_pole);
    }

    #[test]
    fn accuracy_height_guard() {
        assert!(matches!(
            zeta_eval(C::new(0.5, 200.0)),
            Err(FuncError::Accuracy { .. })
        ));
        let cfg = EvalConfig::with_height(1100.0);
        assert!(zeta_eval_cfg(C::new(0.5, 1000.0), &cfg).is_ok());
    }

    #[test]
    fn est_error_within_tolerance_off_poles() {
        // the 1e-10 claim on the documented window (sigma >= -2, |t| <= 120)
        for i in 0..10 {
            for j in 0..12 {
                let s = C::new(-2.0 + 0.7 * i as f64, 0.5 + 10.0 * j as f64);
                if (s - 1.0).norm() < 0.1 {
                    continue;
                }
                let r = zeta_eval(s).unwrap();
                assert!(
                    r.est_abs_error <= 1e-10,
                    "s={s} est={:e}",
                    r.est_abs_error
                );
            }
        }
    }
}
