//! Riemann zeta by Euler-Maclaurin summation, with the functional equation
//! covering the left half-plane.
//!
//! Two independent machine routes exist on purpose:
//!   * `zeta_em_f64` — Euler-Maclaurin at `s` directly, reliable for
//!     Re s >= 0.4 where the partial sums carry no cancellation blow-up;
//!   * `zeta_em_dd` — the same continuation in double-double arithmetic,
//!     valid down to Re s > -(2M-1); this is the route the
//!     functional-equation cross-validation uses on the left of the
//!     critical line, so the identity is never checked against itself.
//! The production evaluator uses the f64 sum for Re s >= 1/2 and the
//! functional equation otherwise.

use num_complex::Complex64;
use std::sync::OnceLock;

use super::consts::{bernoulli_over_factorial, STIELTJES};
use super::gamma::{cos_pi, digamma_unchecked, gamma_unchecked, ln_gamma, sin_pi, trigamma_unchecked};
use super::FuncError;
use crate::dd::{Cdd, Dd};

const LN_2PI: f64 = 1.8378770664093453;

fn ln_table() -> &'static Vec<f64> {
    static T: OnceLock<Vec<f64>> = OnceLock::new();
    T.get_or_init(|| (0..4096).map(|n| (n as f64).ln()).collect())
}

fn ln_dd_table() -> &'static Vec<Dd> {
    static T: OnceLock<Vec<Dd>> = OnceLock::new();
    T.get_or_init(|| {
        (0..768)
            .map(|n| if n == 0 { Dd::ZERO } else { Dd::from(n as f64).ln() })
            .collect()
    })
}

#[inline]
fn ln_n(n: usize) -> f64 {
    let t = ln_table();
    if n < t.len() { t[n] } else { (n as f64).ln() }
}

/// Term counts for the Euler-Maclaurin evaluation at `s`.
fn em_params(s: Complex64, m: usize, ratio: f64) -> usize {
    let need = (s.norm() + 2.0 * m as f64) / (2.0 * std::f64::consts::PI * ratio);
    (need.ceil() as usize).max(m + 4).max(18)
}

pub struct EmResult {
    pub value: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    /// truncation bound plus a rounding model, absolute
    pub err: f64,
}

/// Euler-Maclaurin at `s` in f64. Intended for Re s >= 0.4; the formula is
/// the analytic continuation so nothing breaks further left, but the
/// cancellation in the power sum then eats the accuracy budget.
pub fn zeta_em_f64(s: Complex64) -> EmResult {
    const M: usize = 18;
    let n = em_params(s, M, 0.33);
    let coef = bern();

    // power sum 1..N-1 with compensated accumulation
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut d1 = Complex64::new(0.0, 0.0);
    let mut d2 = Complex64::new(0.0, 0.0);
    let mut max_term = 0.0f64;
    for k in 1..n {
        let l = ln_n(k);
        let term = (-s * l).exp();
        max_term = max_term.max(term.norm());
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        d1 -= l * term;
        d2 += l * l * term;
    }

    let nf = n as f64;
    let ln_nf = ln_n(n);
    let tn = (-s * ln_nf).exp(); // N^{-s}
    let sm1 = s - 1.0;

    // N^{-s}/2
    let mut v = sum + 0.5 * tn;
    let mut v1 = d1 - 0.5 * ln_nf * tn;
    let mut v2 = d2 + 0.5 * ln_nf * ln_nf * tn;

    // N^{1-s}/(s-1)
    let tail = tn * nf / sm1;
    v += tail;
    v1 += -ln_nf * tail - tn * nf / (sm1 * sm1);
    v2 += ln_nf * ln_nf * tail + 2.0 * ln_nf * tn * nf / (sm1 * sm1)
        + 2.0 * tn * nf / (sm1 * sm1 * sm1);

    // Bernoulli corrections: coef_k * N^{1-2k} * N^{-s} * P_k(s),
    // P_k(s) = s(s+1)...(s+2k-2) tracked with first and second derivative
    let mut p = s;
    let mut p1 = Complex64::new(1.0, 0.0);
    let mut p2 = Complex64::new(0.0, 0.0);
    let mut npow = 1.0 / nf; // N^{1-2k}
    let mut last = f64::INFINITY;
    let mut trunc = f64::NAN;
    for (ki, &c) in coef.iter().enumerate().take(M) {
        let scale = c * npow;
        let term = scale * tn * p;
        let tnorm = term.norm();
        if tnorm > last {
            // asymptotic series started to grow; stop before it diverges
            trunc = tnorm;
            break;
        }
        v += term;
        v1 += scale * tn * (p1 - ln_nf * p);
        v2 += scale * tn * (p2 - 2.0 * ln_nf * p1 + ln_nf * ln_nf * p);
        last = tnorm;
        // extend P by the factors (s+2k-1)(s+2k)
        for j in 0..2 {
            let f = s + (2.0 * (ki as f64) + 1.0 + j as f64);
            p2 = p2 * f + 2.0 * p1;
            p1 = p1 * f + p;
            p = p * f;
        }
        npow /= nf * nf;
    }
    if trunc.is_nan() {
        // first omitted term as the truncation estimate
        trunc = (coef[M] * npow * tn * p).norm();
    }
    let sigma = s.re;
    let fudge = ((s + 2.0 * M as f64 + 1.0).norm() / (sigma + 2.0 * M as f64 + 1.0)).abs();
    let err = trunc * fudge.min(10.0) * 2.0
        + (max_term * (n as f64).sqrt() + v.norm()) * 3.0e-16;
    EmResult { value: v, d1: v1, d2: v2, err }
}

/// Euler-Maclaurin continuation in double-double arithmetic: value only.
/// Valid for Re s > -(2M - 1) = -69; accuracy limited by truncation, not
/// by cancellation.
pub fn zeta_em_dd(s: Complex64) -> (Complex64, f64) {
    const M: usize = 35;
    let n = em_params(s, M, 0.23);
    let coef = bern_dd();
    let sd = Cdd::from_f64(s.re, s.im);
    let tbl = ln_dd_table();

    let mut sum = Cdd::ZERO;
    let mut max_term = 0.0f64;
    for k in 1..n {
        let l = if k < tbl.len() { tbl[k] } else { Dd::from(k as f64).ln() };
        let term = (-(sd * Cdd::new(l, Dd::ZERO))).exp();
        max_term = max_term.max(term.to_complex().norm());
        sum = sum + term;
    }

    let nf = n as f64;
    let ln_nf = if n < tbl.len() { tbl[n] } else { Dd::from(nf).ln() };
    let tn = (-(sd * Cdd::new(ln_nf, Dd::ZERO))).exp();
    let sm1 = sd - Cdd::ONE;

    let mut v = sum + tn * Dd::from(0.5);
    v = v + tn * Dd::from(nf) / sm1;

    let mut p = sd;
    let mut npow = Dd::ONE / Dd::from(nf);
    let n2 = Dd::from(nf).sqr();
    let mut last = f64::INFINITY;
    let mut trunc = f64::NAN;
    for (ki, &c) in coef.iter().enumerate().take(M) {
        let term = p * tn * (npow * c);
        let tnorm = term.to_complex().norm();
        max_term = max_term.max(tnorm);
        if tnorm > last {
            trunc = tnorm;
            break;
        }
        v = v + term;
        last = tnorm;
        for j in 0..2 {
            let f = sd + Cdd::from_f64(2.0 * ki as f64 + 1.0 + j as f64, 0.0);
            p = p * f;
        }
        npow = npow / n2;
    }
    if trunc.is_nan() {
        trunc = (p * tn * (npow * coef[M])).to_complex().norm();
    }
    let err = trunc * 2.0 + max_term * 1e-30 * (n as f64).sqrt() + v.to_complex().norm() * 1e-28;
    (v.to_complex(), err)
}

fn bern() -> &'static Vec<f64> {
    static B: OnceLock<Vec<f64>> = OnceLock::new();
    B.get_or_init(|| bernoulli_over_factorial(40))
}

fn bern_dd() -> &'static Vec<Dd> {
    static B: OnceLock<Vec<Dd>> = OnceLock::new();
    B.get_or_init(|| super::consts::bernoulli_over_factorial_dd(40))
}

/// The factor chi(s) of the functional equation zeta(s) = chi(s) zeta(1-s),
/// with its first two derivatives. Regular at the trivial zeros (the sin
/// factor is kept unexponentiated there) and overflow-safe at large |t|
/// (log-space for |Im(pi s/2)| beyond 30).
pub fn chi_jet(s: Complex64) -> (Complex64, Complex64, Complex64) {
    let w = 1.0 - s;
    let a_log = s * std::f64::consts::LN_2 + (s - 1.0) * std::f64::consts::PI.ln();
    let psi_w = digamma_unchecked(w);
    let psi1_w = trigamma_unchecked(w);
    let a_fac = LN_2PI - psi_w; // A'/A
    let half_pi = std::f64::consts::FRAC_PI_2;
    let pi2_4 = half_pi * half_pi;

    if (s.im * half_pi).abs() < 30.0 {
        let a = a_log.exp() * gamma_unchecked(w);
        let sv = sin_pi(s / 2.0);
        let cv = cos_pi(s / 2.0);
        let chi = a * sv;
        let chi1 = a * (a_fac * sv + half_pi * cv);
        let chi2 = a * ((a_fac * a_fac + psi1_w - pi2_4) * sv
            + std::f64::consts::PI * a_fac * cv);
        (chi, chi1, chi2)
    } else {
        // sin(pi s/2) = sign * i/2 * exp(-sign * i * pi s/2) * (1 - e(2 sign i pi s /2))
        // with sign chosen so the leading exponential is the growing one
        let sgn = if s.im > 0.0 { 1.0 } else { -1.0 };
        let iw = Complex64::new(0.0, sgn);
        let small = (iw * std::f64::consts::PI * s).exp(); // |.| < e^-60
        let ln_sin = -iw * half_pi * s + (iw * 0.5).ln() + (1.0 - small).ln();
        let cot = -iw * (1.0 + small) / (1.0 - small);
        let chi = (a_log + ln_gamma(w) + ln_sin).exp();
        let l = a_fac + half_pi * cot;
        let chi1 = chi * l;
        let chi2 = chi * (l * l + psi1_w - pi2_4 * (1.0 + cot * cot));
        (chi, chi1, chi2)
    }
}

/// zeta and two derivatives through the functional equation; for Re s < 1/2.
pub fn zeta_fe(s: Complex64) -> EmResult {
    let w = 1.0 - s;
    let zw = zeta_em_f64(w);
    let (chi, chi1, chi2) = chi_jet(s);
    let value = chi * zw.value;
    // d/ds zeta(1-s) = -zeta'(1-s)
    let d1 = chi1 * zw.value - chi * zw.d1;
    let d2 = chi2 * zw.value - 2.0 * chi1 * zw.d1 + chi * zw.d2;
    // the phase of chi is the dominant rounding source; |Im ln chi| grows
    // like t ln(|s|/2 pi e)
    let phase = s.im.abs() * (s.norm() / 17.08).ln().max(1.0);
    let err = chi.norm() * zw.err + value.norm() * (3e-15 + phase * 2.3e-16);
    EmResult { value, d1, d2, err }
}

/// Production evaluator: Euler-Maclaurin right of the critical line, the
/// functional equation left of it. A disk around the origin stays on the
/// direct sum as well, because there the reflected argument 1-s would sit
/// on the zeta pole.
pub fn zeta_jet(s: Complex64) -> Result<EmResult, FuncError> {
    if s.im == 0.0 && s.re == 1.0 {
        return Err(FuncError::Pole { at: s });
    }
    if s.re >= 0.5 || s.norm() < 0.75 {
        Ok(zeta_em_f64(s))
    } else {
        Ok(zeta_fe(s))
    }
}

/// Truncated Laurent expansion about the pole, using the embedded
/// Stieltjes table. Only trustworthy inside the unit disk around 1.
pub fn zeta_laurent(s: Complex64, n_terms: usize) -> Result<Complex64, FuncError> {
    let u = s - 1.0;
    let r = u.norm();
    if r == 0.0 {
        return Err(FuncError::Pole { at: s });
    }
    if r >= 1.0 {
        return Err(FuncError::Domain {
            what: format!("laurent expansion needs 0 < |s-1| < 1, got |s-1| = {r}"),
        });
    }
    let n_terms = n_terms.min(STIELTJES.len());
    let mut v = 1.0 / u;
    let mut pow = Complex64::new(1.0, 0.0);
    let mut fact = 1.0f64;
    for (n, &g) in STIELTJES.iter().enumerate().take(n_terms) {
        if n > 0 {
            fact *= n as f64;
            pow *= u;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        v += sign / fact * g * pow;
    }
    Ok(v)
}

/// |zeta(s) - 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)| with the two
/// sides produced by independent routes: the left by direct Euler-Maclaurin
/// continuation at `s` (double-double left of the critical line), the right
/// by the chi factor times Euler-Maclaurin at `1-s`.
pub fn functional_equation_residual(s: Complex64) -> Result<f64, FuncError> {
    // s = 1 is the pole of the left side, s = 0 the pole of the right side
    // (the identity holds there only as a limit)
    if s.im == 0.0 && (s.re == 1.0 || s.re == 0.0) {
        return Err(FuncError::Pole { at: s });
    }
    let lhs = if s.re >= 0.5 {
        zeta_em_f64(s).value
    } else {
        zeta_em_dd(s).0
    };
    let w = 1.0 - s;
    let zw = if w.re >= 0.5 {
        zeta_em_f64(w).value
    } else {
        zeta_em_dd(w).0
    };
    let (chi, _, _) = chi_jet(s);
    Ok((lhs - chi * zw).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    #[test]
    fn zeta_classical_values() {
        // zeta(2) = pi^2/6
        let z2 = zeta_em_f64(C::new(2.0, 0.0)).value;
        assert!((z2.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert!(z2.im.abs() < 1e-15);
        // zeta(0) = -1/2: the dispatcher must keep the direct sum there,
        // the reflected argument would sit on the pole
        let z0 = zeta_jet(C::new(0.0, 0.0)).unwrap().value;
        assert!((z0.re + 0.5).abs() < 1e-12, "zeta(0) = {z0}");
        // zeta(-1) = -1/12
        let zm1 = zeta_fe(C::new(-1.0, 0.0)).value;
        assert!((zm1.re + 1.0 / 12.0).abs() < 1e-12);
        // trivial zero: sin factor reduces exactly
        let zm2 = zeta_fe(C::new(-2.0, 0.0)).value;
        assert!(zm2.norm() < 1e-10, "zeta(-2) = {zm2}");
    }

    #[test]
    fn dd_and_f64_routes_agree() {
        for &s in &[
            C::new(2.0, 10.0),
            C::new(0.5, 14.0),
            C::new(0.6, 120.0),
            C::new(1.5, -3.0),
        ] {
            let a = zeta_em_f64(s).value;
            let (b, _) = zeta_em_dd(s);
            assert!((a - b).norm() < 1e-11 * (1.0 + a.norm()), "s={s}");
        }
    }

    #[test]
    fn dd_continuation_matches_functional_equation() {
        // deep in the left half-plane the dd sum must agree with chi * EM(1-s)
        for &s in &[C::new(-3.0, 7.0), C::new(-5.0, 50.0), C::new(-11.5, 33.0)] {
            let (direct, err) = zeta_em_dd(s);
            let fe = zeta_fe(s).value;
            let d = (direct - fe).norm();
            assert!(
                d < 1e-9 * (1.0 + fe.norm()),
                "s={s} d={d:e} err={err:e} |fe|={}",
                fe.norm()
            );
        }
    }

    #[test]
    fn pole_behaviour() {
        assert!(matches!(
            zeta_jet(C::new(1.0, 0.0)),
            Err(FuncError::Pole { .. })
        ));
        // (s-1) zeta(s) -> 1
        let s = C::new(1.0 + 1e-6, 0.0);
        let v = zeta_jet(s).unwrap().value;
        assert!(((s - 1.0) * v - 1.0).norm() < 1e-5);
    }

    #[test]
    fn laurent_consistency() {
        // gamma_0 is the Euler constant
        assert!((STIELTJES[0] - super::super::consts::EULER_GAMMA).abs() < 1e-15);
        let v = zeta_laurent(C::new(1.1, 0.0), 8).unwrap();
        let z = zeta_em_f64(C::new(1.1, 0.0)).value;
        assert!((v - z).norm() < 1e-6);
        // on the circle |s-1| = 0.1 with 10 terms
        for k in 0..12 {
            let th = k as f64 * 0.5236;
            let s = C::new(1.0 + 0.1 * th.cos(), 0.1 * th.sin());
            let a = zeta_laurent(s, 10).unwrap();
            let b = zeta_jet(s).unwrap().value;
            assert!((a - b).norm() < 1e-6, "s={s}");
        }
        assert!(matches!(
            zeta_laurent(C::new(2.5, 0.0), 8),
            Err(FuncError::Domain { .. })
        ));
    }

    #[test]
    fn functional_equation_spot_checks() {
        // both sides vanish at the trivial zero
        assert!(functional_equation_residual(C::new(-2.0, 0.0)).unwrap() < 1e-10);
        assert!(functional_equation_residual(C::new(0.5, 10.0)).unwrap() < 1e-8);
        assert!(functional_equation_residual(C::new(2.5, 0.0)).unwrap() < 1e-9);
    }

    #[test]
    fn derivative_against_finite_difference() {
        let h = 1e-6;
        for &s in &[C::new(2.0, 3.0), C::new(0.7, 20.0), C::new(-1.5, 8.0)] {
            let j = zeta_jet(s).unwrap();
            let fd = (zeta_jet(s + h).unwrap().value - zeta_jet(s - h).unwrap().value)
                / (2.0 * h);
            assert!(
                (j.d1 - fd).norm() <= 1e-5 * (1.0 + j.d1.norm()),
                "s={s} d1={} fd={fd}",
                j.d1
            );
            let fd2 = (zeta_jet(s + h).unwrap().d1 - zeta_jet(s - h).unwrap().d1) / (2.0 * h);
            assert!((j.d2 - fd2).norm() <= 1e-4 * (1.0 + j.d2.norm()), "s={s}");
        }
    }

    #[test]
    fn high_t_evaluation_stays_consistent() {
        // the t-scaled term count keeps Euler-Maclaurin valid around t ~ 1000
        let s = C::new(0.5, 1009.0);
        let a = zeta_em_f64(s);
        let (b, _) = zeta_em_dd(s);
        assert!((a.value - b).norm() < 1e-9 * (1.0 + a.value.norm()));
        // and the functional equation still closes there
        let r = functional_equation_residual(C::new(0.3, 1009.0)).unwrap();
        let scale = zeta_jet(C::new(0.3, 1009.0)).unwrap().value.norm();
        assert!(r < 1e-9 * (1.0 + scale), "r={r:e} scale={scale:e}");
    }
}
