//! Slow reference evaluators, independent of the production routes.
//!
//! These exist so the tests never check an implementation against itself:
//! `zeta_alternating` continues zeta through the eta function with the
//! Cohen-Rodriguez Villegas-Zagier acceleration, `gamma_dd` is a Spouge
//! approximation with coefficients generated at startup in double-double
//! arithmetic, and `stieltjes_constants` evaluates the defining limit of
//! the Laurent coefficients with Euler-Maclaurin tail corrections.

use num_complex::Complex64;

use crate::dd::{Cdd, Dd, DD_TWO_PI};

/// zeta through the alternating (eta) series with Chebyshev acceleration:
/// a third route, unrelated to both Euler-Maclaurin and the functional
/// equation. Good to ~1e-13 for Re s > -3 and moderate |Im s|.
pub fn zeta_alternating(s: Complex64) -> Complex64 {
    let n = 48usize;
    let nf = n as f64;
    let mut d = (3.0 + 8.0f64.sqrt()).powi(n as i32);
    d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0f64;
    let mut c = -d;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let kf = k as f64;
        c = b - c;
        sum += c * (-(s) * ((k + 1) as f64).ln()).exp();
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    let eta = sum / d;
    // zeta = eta / (1 - 2^(1-s))
    let denom = 1.0 - ((1.0 - s) * std::f64::consts::LN_2).exp();
    eta / denom
}

/// Spouge-series Gamma in double-double arithmetic (a = 24), coefficients
/// generated on first use. Valid for Re z > 0; callers reflect as needed.
pub fn gamma_dd(z: Cdd) -> Cdd {
    let a = 24usize;
    let coefs = spouge_coefs(a);
    let zm1 = z - Cdd::ONE;
    let mut s = Cdd::new(coefs[0], Dd::ZERO);
    for (k, &c) in coefs.iter().enumerate().skip(1) {
        s = s + Cdd::new(c, Dd::ZERO) / (zm1 + Cdd::from_f64(k as f64, 0.0));
    }
    let base = zm1 + Cdd::from_f64(a as f64, 0.0);
    let half = Cdd::from_f64(0.5, 0.0);
    let expo = (zm1 + half) * base.ln() - base;
    expo.exp() * s
}

/// Gamma for any complex argument off the poles, through dd reflection.
pub fn gamma_dd_any(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        return gamma_dd(Cdd::from_f64(z.re, z.im)).to_complex();
    }
    // Gamma(z) = pi / (sin(pi z) Gamma(1-z)), sin reduced mod 1 in dd
    let zr = Cdd::from_f64(z.re - z.re.round(), z.im);
    let k = z.re.round() as i64;
    let arg = zr * crate::dd::DD_PI;
    // sin of complex dd argument
    let (sr, cr) = arg.re.sin_cos();
    let (sh_half, ch) = {
        // sinh/cosh via exp
        let e = arg.im.exp();
        let ei = Dd::ONE / e;
        ((e - ei) * Dd::from(0.5), (e + ei) * Dd::from(0.5))
    };
    let mut sin_pi_z = Cdd::new(sr * ch, cr * sh_half);
    if k % 2 != 0 {
        sin_pi_z = -sin_pi_z;
    }
    let g1mz = gamma_dd(Cdd::from_f64(1.0 - z.re, -z.im));
    (Cdd::new(crate::dd::DD_PI, Dd::ZERO) / (sin_pi_z * g1mz)).to_complex()
}

fn spouge_coefs(a: usize) -> Vec<Dd> {
    let mut out = Vec::with_capacity(a);
    out.push((DD_TWO_PI).sqrt()); // c_0 = sqrt(2 pi)
    let mut fact = Dd::ONE; // (k-1)!
    for k in 1..a {
        if k > 1 {
            fact = fact * Dd::from((k - 1) as f64);
        }
        let ak = Dd::from((a - k) as f64);
        // c_k = (-1)^(k-1) (a-k)^(k-1/2) e^(a-k) / (k-1)!
        let mag = ((Dd::from(k as f64 - 0.5)) * ak.ln()).exp() * ak.exp() / fact;
        out.push(if k % 2 == 1 { mag } else { -mag });
    }
    out
}

/// Stieltjes constants by tail-corrected partial sums of the defining
/// limit, in double-double arithmetic:
/// `g_n = lim_m [ sum_{k<=m} ln^n k / k  -  ln^{n+1} m / (n+1) ]`.
/// The naive limit converges like ln^n(m)/m; the Euler-Maclaurin tail
/// correction turns m = 20000 into ~25 significant digits.
pub fn stieltjes_constants(n_max: usize, m: usize, correction_terms: usize) -> Vec<f64> {
    let mut sums = vec![Dd::ZERO; n_max + 1];
    for k in 1..=m {
        let l = Dd::from(k as f64).ln();
        let inv_k = Dd::ONE / Dd::from(k as f64);
        let mut p = inv_k; // ln^n k / k
        for s in sums.iter_mut() {
            *s = *s + p;
            p = p * l;
        }
    }
    let lm = Dd::from(m as f64).ln();
    let bern = crate::funcval::consts::bernoulli_over_factorial(correction_terms + 1);
    let mut out = Vec::with_capacity(n_max + 1);
    for (n, &sum_n) in sums.iter().enumerate() {
        // subtract the integral: ln^{n+1} m / (n+1)
        let mut g = sum_n - lm.powi(n as i32 + 1) / Dd::from(n as f64 + 1.0);
        // f(x) = ln^n x / x, tail correction -f(m)/2 - sum B_2j/(2j)! f^(2j-1)(m)
        let f_m = lm.powi(n as i32) / Dd::from(m as f64);
        g = g - f_m * Dd::from(0.5);
        // derivatives of ln^n x / x as polynomials in ln x over x^p
        // f = Q(ln x)/x^p  =>  f' = (Q'(ln x) - p Q(ln x)) / x^{p+1}
        let mut q = vec![Dd::ZERO; n + 1];
        q[n] = Dd::ONE;
        let mut p_pow = 1i32;
        let m_dd = Dd::from(m as f64);
        for (j, &bj) in bern.iter().enumerate().take(correction_terms) {
            // advance to the (2j+1)-th derivative
            let steps = if j == 0 { 1 } else { 2 };
            for _ in 0..steps {
                let mut nq = vec![Dd::ZERO; q.len()];
                for (i, &qi) in q.iter().enumerate() {
                    if i > 0 {
                        nq[i - 1] = nq[i - 1] + qi * Dd::from(i as f64);
                    }
                    nq[i] = nq[i] - qi * Dd::from(p_pow as f64);
                }
                q = nq;
                p_pow += 1;
            }
            // evaluate Q(ln m)/m^p
            let mut val = Dd::ZERO;
            let mut lp = Dd::ONE;
            for &qi in &q {
                val = val + qi * lp;
                lp = lp * lm;
            }
            let deriv = val / m_dd.powi(p_pow);
            g = g - Dd::from(bj) * deriv;
        }
        out.push(g.f64());
    }
    out
}
