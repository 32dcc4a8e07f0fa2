//! Location and certification of the special points: zeros of the Gamma
//! derivative on the real axis, trivial and non-trivial zeta zeros,
//! one-points (zeta = 1) and zeros of the zeta derivative, each with an
//! argument-principle simplicity certificate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::funcval::{self, AnalyticFn, FuncError, FunctionId};
use crate::tracer::Window;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CritKind {
    ZeroOfF,
    ZeroOfFPrime,
    OnePoint,
}

/// A located zero of f, zero of f', or solution of f = 1, with its
/// residual and a winding-number simplicity certificate.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CritPoint {
    #[serde(with = "complex_serde")]
    pub location: Complex64,
    pub fid: FunctionId,
    pub kind: CritKind,
    pub residual: f64,
    pub simple: bool,
    pub winding: i32,
}

pub(crate) mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

#[derive(Debug, Error)]
pub enum CritError {
    #[error("bracket failure in ({lo}, {hi}): the sign change promised by theory is missing")]
    BracketFailure { lo: f64, hi: f64 },
    #[error("zero count mismatch: argument principle says {expected}, scan found {found}")]
    CountMismatch { expected: i64, found: usize },
    #[error("another zero within 2 r_cert of {at}; shrink the certificate radius")]
    IsolationFailure { at: Complex64 },
    #[error(transparent)]
    Eval(#[from] FuncError),
}

/// Which function the simplicity certificate runs the winding count on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    F,
    FPrime,
    FMinusOne,
}

fn target_value<F: AnalyticFn + ?Sized>(
    f: &F,
    t: Target,
    z: Complex64,
) -> Result<Complex64, FuncError> {
    let jet = f.eval2(z)?;
    Ok(match t {
        Target::F => jet.f,
        Target::FPrime => jet.d1,
        Target::FMinusOne => jet.f - 1.0,
    })
}

/// Argument-principle winding of `target` along the circle of radius r
/// around `center`, sampled adaptively so consecutive increments stay
/// below pi/2.
pub fn circle_winding<F: AnalyticFn + ?Sized>(
    f: &F,
    t: Target,
    center: Complex64,
    r: f64,
) -> Result<f64, CritError> {
    let mut n = 64usize;
    'retry: loop {
        let mut total = 0.0f64;
        let mut prev = target_value(f, t, center + Complex64::new(r, 0.0))?;
        for k in 1..=n {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let z = center + Complex64::from_polar(r, th);
            let v = target_value(f, t, z)?;
            let inc = (v / prev).arg();
            if inc.abs() > std::f64::consts::FRAC_PI_2 {
                n *= 2;
                if n > 1 << 16 {
                    return Ok(f64::NAN);
                }
                continue 'retry;
            }
            total += inc;
            prev = v;
        }
        return Ok(total / (2.0 * std::f64::consts::PI));
    }
}

/// Winding certificate: `(simple, winding)` for the target function around
/// `location`. The isolation precondition is checked by comparing the
/// count on the doubled radius.
pub fn simplicity_check<F: AnalyticFn + ?Sized>(
    f: &F,
    t: Target,
    location: Complex64,
    r_cert: f64,
) -> Result<(bool, i32), CritError> {
    let w_inner = circle_winding(f, t, location, r_cert)?;
    let w_outer = circle_winding(f, t, location, 2.0 * r_cert)?;
    let wi = w_inner.round();
    let wo = w_outer.round();
    if !w_inner.is_finite()
        || !w_outer.is_finite()
        || (w_inner - wi).abs() > 0.01
        || (w_outer - wo).abs() > 0.01
        || wi != wo
    {
        return Err(CritError::IsolationFailure { at: location });
    }
    Ok((wi as i32 == 1, wi as i32))
}

fn certify<F: AnalyticFn + ?Sized>(
    f: &F,
    t: Target,
    location: Complex64,
    mut r: f64,
) -> Result<(bool, i32), CritError> {
    // shrink by halving on isolation failures
    for _ in 0..8 {
        match simplicity_check(f, t, location, r) {
            Ok(res) => return Ok(res),
            Err(CritError::IsolationFailure { .. }) => r *= 0.5,
            Err(e) => return Err(e),
        }
    }
    Err(CritError::IsolationFailure { at: location })
}

/// Newton refinement of a zero of the target, with step damping.
fn newton_polish<F: AnalyticFn + ?Sized>(
    f: &F,
    t: Target,
    mut z: Complex64,
    max_iter: usize,
) -> Option<Complex64> {
    let mut best = z;
    let mut best_r = f64::INFINITY;
    for _ in 0..max_iter {
        let jet = f.eval2(z).ok()?;
        let (v, d) = match t {
            Target::F => (jet.f, jet.d1),
            Target::FPrime => (jet.d1, jet.d2),
            Target::FMinusOne => (jet.f - 1.0, jet.d1),
        };
        let r = v.norm();
        if r < best_r {
            best_r = r;
            best = z;
        }
        if r < 1e-13 {
            return Some(z);
        }
        if d.norm() < 1e-280 {
            return None;
        }
        let full = v / d;
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..20 {
            let cand = z - lambda * full;
            if let Ok(j2) = f.eval2(cand) {
                let r2 = match t {
                    Target::F => j2.f.norm(),
                    Target::FPrime => j2.d1.norm(),
                    Target::FMinusOne => (j2.f - 1.0).norm(),
                };
                if r2 < r {
                    z = cand;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if best_r < 1e-9 {
        Some(best)
    } else {
        None
    }
}

/// Real zeros of the Gamma derivative: one in (1, 2) and one in each
/// (-n, -n+1), found by bisection on the sign of the log-derivative and
/// certified simple.
pub fn gamma_crit_points(n_max: u32) -> Result<Vec<CritPoint>, CritError> {
    let fid = FunctionId::Gamma;
    let psi_sign = |x: f64| -> Result<f64, CritError> {
        Ok(funcval::gamma_log_deriv(Complex64::new(x, 0.0))?.re)
    };
    let mut out = Vec::new();
    let mut brackets = vec![(1.0 + 1e-9, 2.0 - 1e-9)];
    for n in 1..=n_max {
        brackets.push((-(n as f64) + 1e-9, -(n as f64) + 1.0 - 1e-9));
    }
    for (lo0, hi0) in brackets {
        let (mut lo, mut hi) = (lo0, hi0);
        let (slo, shi) = (psi_sign(lo)?, psi_sign(hi)?);
        if slo * shi > 0.0 {
            return Err(CritError::BracketFailure { lo, hi });
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if psi_sign(mid)? * slo <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let x = newton_polish(&fid, Target::FPrime, Complex64::new(0.5 * (lo + hi), 0.0), 30)
            .unwrap_or(Complex64::new(0.5 * (lo + hi), 0.0));
        let jet = fid.eval2(x)?;
        let (simple, winding) = certify(&fid, Target::FPrime, x, 0.1)?;
        out.push(CritPoint {
            location: x,
            fid,
            kind: CritKind::ZeroOfFPrime,
            residual: jet.d1.norm(),
            simple,
            winding,
        });
    }
    Ok(out)
}

/// Trivial zeros -2m, verified small and certified simple.
pub fn zeta_trivial_zeros(m_max: u32) -> Result<Vec<CritPoint>, CritError> {
    let fid = FunctionId::Zeta;
    let mut out = Vec::new();
    for m in 1..=m_max {
        let z = Complex64::new(-2.0 * m as f64, 0.0);
        let jet = fid.eval2(z)?;
        let (simple, winding) = certify(&fid, Target::F, z, 0.05)?;
        out.push(CritPoint {
            location: z,
            fid,
            kind: CritKind::ZeroOfF,
            residual: jet.f.norm(),
            simple,
            winding,
        });
    }
    Ok(out)
}

/// The rotated zeta on the critical line, real-valued: its sign changes
/// bracket the non-trivial zeros. The phase comes from the log-Gamma
/// route, so nothing under- or overflows at large t.
pub fn riemann_siegel_z(t: f64) -> f64 {
    let theta = funcval::gamma::ln_gamma(Complex64::new(0.25, t / 2.0)).im
        - t / 2.0 * std::f64::consts::PI.ln();
    let z = funcval::zeta::zeta_em_f64(Complex64::new(0.5, t)).value;
    (Complex64::from_polar(1.0, theta) * z).re
}

/// Non-trivial zeros with 0 < t <= t_max: sign scan of the rotated zeta on
/// the critical line, Newton polish in the complex plane, completeness
/// check by the argument principle over the rectangle, simplicity
/// certificates.
pub fn zeta_nontrivial_zeros(t_max: f64) -> Result<Vec<CritPoint>, CritError> {
    zeta_nontrivial_zeros_in(1.0, t_max)
}

/// Same scan over t in [t_lo, t_hi].
pub fn zeta_nontrivial_zeros_in(t_lo: f64, t_hi: f64) -> Result<Vec<CritPoint>, CritError> {
    let fid = FunctionId::Zeta;
    let mut step = 0.1f64;
    let mut found = Vec::new();
    for attempt in 0..3 {
        found = scan_zeros(fid, t_lo, t_hi, step)?;
        // completeness: winding of zeta around [-1, 2] x [.., t_hi]; the
        // bottom edge sits below the first zero so the pole stays outside
        let bottom = if t_lo <= 1.0 { 0.5 } else { t_lo };
        let expected = rectangle_zero_count(&fid, -1.0, 2.0, bottom, t_hi)?;
        if expected == found.len() as i64 {
            return Ok(found);
        }
        if attempt == 2 {
            return Err(CritError::CountMismatch { expected, found: found.len() });
        }
        step /= 2.0;
    }
    Ok(found)
}

fn scan_zeros(
    fid: FunctionId,
    t_lo: f64,
    t_hi: f64,
    step: f64,
) -> Result<Vec<CritPoint>, CritError> {
    let mut out: Vec<CritPoint> = Vec::new();
    let n = ((t_hi - t_lo) / step).ceil() as usize;
    let mut prev = riemann_siegel_z(t_lo);
    for k in 1..=n {
        let t = t_lo + (t_hi - t_lo) * k as f64 / n as f64;
        let cur = riemann_siegel_z(t);
        if prev * cur < 0.0 {
            let (mut a, mut b) = (t - (t_hi - t_lo) / n as f64, t);
            let mut fa = prev;
            for _ in 0..40 {
                let m = 0.5 * (a + b);
                let fm = riemann_siegel_z(m);
                if fa * fm <= 0.0 {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            let guess = Complex64::new(0.5, 0.5 * (a + b));
            if let Some(z) = newton_polish(&fid, Target::F, guess, 40) {
                if out.iter().all(|c| (c.location - z).norm() > 1e-6) {
                    let jet = fid.eval2(z)?;
                    let (simple, winding) = certify(&fid, Target::F, z, 0.05)?;
                    out.push(CritPoint {
                        location: z,
                        fid,
                        kind: CritKind::ZeroOfF,
                        residual: jet.f.norm(),
                        simple,
                        winding,
                    });
                }
            }
        }
        prev = cur;
    }
    out.sort_by(|a, b| a.location.im.total_cmp(&b.location.im));
    Ok(out)
}

/// Argument-principle count of zeros inside a rectangle, walked with
/// adaptive argument increments.
pub fn rectangle_zero_count<F: AnalyticFn + ?Sized>(
    f: &F,
    s_lo: f64,
    s_hi: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<i64, CritError> {
    let corners = [
        Complex64::new(s_lo, t_lo),
        Complex64::new(s_hi, t_lo),
        Complex64::new(s_hi, t_hi),
        Complex64::new(s_lo, t_hi),
    ];
    let mut total = 0.0f64;
    for i in 0..4 {
        total += edge_arg_change(f, corners[i], corners[(i + 1) % 4])?;
    }
    let w = total / (2.0 * std::f64::consts::PI);
    let wr = w.round();
    if (w - wr).abs() > 0.05 {
        return Err(CritError::CountMismatch { expected: wr as i64, found: usize::MAX });
    }
    Ok(wr as i64)
}

fn edge_arg_change<F: AnalyticFn + ?Sized>(
    f: &F,
    a: Complex64,
    b: Complex64,
) -> Result<f64, CritError> {
    // a small principal-arg increment can hide a full turn, so the
    // acceptance also bounds the phase speed |f'/f| times the segment
    // length at both endpoints
    let probe = |z: Complex64| -> Result<(Complex64, f64), CritError> {
        let jet = f.eval2(z)?;
        Ok((jet.f, (jet.d1 / jet.f).norm()))
    };
    let pa = probe(a)?;
    let pb = probe(b)?;
    let mut stack = vec![(a, pa, b, pb, 0u32)];
    let mut total = 0.0;
    while let Some((za, (va, sa), zb, (vb, sb), depth)) = stack.pop() {
        let inc = (vb / va).arg();
        let len = (zb - za).norm();
        let safe = inc.abs() < std::f64::consts::FRAC_PI_2 && sa.max(sb) * len < 1.0;
        if (safe && depth >= 4) || depth > 44 {
            total += inc;
            continue;
        }
        let m = 0.5 * (za + zb);
        let pm = probe(m)?;
        stack.push((za, (va, sa), m, pm, depth + 1));
        stack.push((m, pm, zb, (vb, sb), depth + 1));
    }
    Ok(total)
}

/// Solutions of zeta(s) = 1 inside the window: grid cells where both real
/// and imaginary parts of zeta - 1 change sign seed a Newton iteration.
pub fn zeta_one_points(window: &Window) -> Result<Vec<CritPoint>, CritError> {
    grid_roots(FunctionId::Zeta, Target::FMinusOne, window, 0.05, CritKind::OnePoint)
}

/// Zeros of the zeta derivative inside the window, certified simple.
pub fn zeta_prime_zeros(window: &Window) -> Result<Vec<CritPoint>, CritError> {
    grid_roots(FunctionId::Zeta, Target::FPrime, window, 0.05, CritKind::ZeroOfFPrime)
}

fn grid_roots(
    fid: FunctionId,
    t: Target,
    window: &Window,
    grid_step: f64,
    kind: CritKind,
) -> Result<Vec<CritPoint>, CritError> {
    use rayon::prelude::*;
    let nx = (window.width() / grid_step).ceil() as usize + 1;
    let ny = (window.height() / grid_step).ceil() as usize + 1;
    let rows: Vec<Vec<Option<Complex64>>> = (0..ny)
        .into_par_iter()
        .map(|j| {
            (0..nx)
                .map(|i| {
                    let z = Complex64::new(
                        window.sigma_min + window.width() * i as f64 / (nx - 1) as f64,
                        window.t_min + window.height() * j as f64 / (ny - 1) as f64,
                    );
                    target_value(&fid, t, z).ok()
                })
                .collect()
        })
        .collect();
    let mut candidates = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let quad = [rows[j][i], rows[j][i + 1], rows[j + 1][i + 1], rows[j + 1][i]];
            if quad.iter().any(|v| v.is_none()) {
                continue;
            }
            let vals: Vec<Complex64> = quad.into_iter().map(Option::unwrap).collect();
            let re0 = vals[0].re > 0.0;
            let im0 = vals[0].im > 0.0;
            let re_mixed = vals.iter().any(|v| (v.re > 0.0) != re0);
            let im_mixed = vals.iter().any(|v| (v.im > 0.0) != im0);
            if re_mixed && im_mixed {
                candidates.push(Complex64::new(
                    window.sigma_min + window.width() * (i as f64 + 0.5) / (nx - 1) as f64,
                    window.t_min + window.height() * (j as f64 + 0.5) / (ny - 1) as f64,
                ));
            }
        }
    }
    let polished: Vec<Complex64> = candidates
        .par_iter()
        .filter_map(|&cand| newton_polish(&fid, t, cand, 40))
        .collect();
    let mut out: Vec<CritPoint> = Vec::new();
    for z in polished {
        if !window.contains(z) {
            continue;
        }
        if out.iter().any(|c| (c.location - z).norm() < 1e-6) {
            continue;
        }
        let jet = fid.eval2(z)?;
        let residual = match t {
            Target::F => jet.f.norm(),
            Target::FPrime => jet.d1.norm(),
            Target::FMinusOne => (jet.f - 1.0).norm(),
        };
        let (simple, winding) = certify(&fid, t, z, 0.05)?;
        out.push(CritPoint { location: z, fid, kind, residual, simple, winding });
    }
    out.sort_by(|a, b| {
        (a.location.im, a.location.re)
            .partial_cmp(&(b.location.im, b.location.re))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}
