//! Complex Gamma, log-Gamma, digamma and trigamma, plus the truncated
//! canonical product.
//!
//! The main evaluator is a Lanczos approximation (Pugh's 11-term set,
//! g = 10.900511, ~16 significant digits in the right half-plane) with the
//! reflection formula covering Re z < 1/2. The slowly convergent canonical
//! product is kept as `gamma_partial` for convergence checks only.

use num_complex::Complex64;

use super::consts::EULER_GAMMA;
use super::FuncError;

/// Lanczos coefficients, g = 10.900511 (Pugh 2004). The same set that
/// several double-precision libraries embed; accuracy ~1e-15 relative.
const LANCZOS_G: f64 = 10.900511;
const LANCZOS_D: [f64; 11] = [
    2.4857408913875355e-5,
    1.0514237858172197,
    -3.4568709722201625,
    4.512277094668948,
    -2.9828522532357664,
    1.056397115771267,
    -1.9542877319164587e-1,
    1.709705434044412e-2,
    -5.719261174043057e-4,
    4.633994733599057e-6,
    -2.7199490848860772e-9,
];
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657;


#[inline]
fn lanczos_sum(z: Complex64) -> Complex64 {
    // sum over d_k / (z + k - 1), valid away from non-positive integers
    let mut s = Complex64::new(LANCZOS_D[0], 0.0);
    for (k, d) in LANCZOS_D.iter().enumerate().skip(1) {
        s += d / (z + (k as f64 - 1.0));
    }
    s
}

/// `sin(pi z)` with exact integer reduction, so it vanishes exactly at
/// integers and stays fully accurate near them.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let k = z.re.round();
    let r = Complex64::new(z.re - k, z.im);
    let s = (std::f64::consts::PI * r).sin();
    if (k as i64) % 2 == 0 { s } else { -s }
}

/// `cos(pi z)` via the same reduction.
pub fn cos_pi(z: Complex64) -> Complex64 {
    let k = z.re.round();
    let r = Complex64::new(z.re - k, z.im);
    let c = (std::f64::consts::PI * r).cos();
    if (k as i64) % 2 == 0 { c } else { -c }
}

/// True when `z` is exactly a pole of Gamma (0, -1, -2, ...).
#[inline]
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// Distance from `z` to the nearest pole of Gamma.
pub fn gamma_pole_distance(z: Complex64) -> f64 {
    let n = (-z.re).round().max(0.0);
    let d0 = (z + n).norm();
    let d1 = (z + (n + 1.0)).norm();
    if n >= 1.0 {
        d0.min(d1).min((z + (n - 1.0)).norm())
    } else {
        d0.min(d1)
    }
}

/// Residue of Gamma at the pole -n: (-1)^n / n!.
pub fn gamma_residue(n: u32) -> f64 {
    let mut f = 1.0f64;
    for k in 2..=n as u64 {
        f *= k as f64;
    }
    if n % 2 == 0 { 1.0 / f } else { -1.0 / f }
}

/// Gamma(z) for z off the pole set.
pub fn gamma(z: Complex64) -> Result<Complex64, FuncError> {
    if is_gamma_pole(z) {
        return Err(FuncError::Pole { at: z });
    }
    Ok(gamma_unchecked(z))
}

pub(crate) fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        std::f64::consts::PI / (sin_pi(z) * gamma_right(1.0 - z))
    } else {
        gamma_right(z)
    }
}

fn gamma_right(z: Complex64) -> Complex64 {
    if z.im.abs() <= 8.0 {
        // the Lanczos sum is excellent near the real axis but cancels
        // internally as |Im z| grows (its value decays like Gamma itself
        // while the terms stay O(1))
        let s = lanczos_sum(z);
        let base = (z - 0.5 + LANCZOS_G) / std::f64::consts::E;
        s * TWO_SQRT_E_OVER_PI * base.powc(z - 0.5)
    } else {
        ln_gamma(z).exp()
    }
}

/// Stirling coefficients B_{2n} / (2n (2n-1)).
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
];

/// Log-Gamma for Re z > 0 by the Stirling series after a recurrence shift
/// to |z| >= 16. No internal cancellation, so the relative accuracy stays
/// ~1e-15 arbitrarily high in the strip. The imaginary part is continuous
/// in t for |z| already >= 16 (no shift); shifted branches may jump by
/// 2 pi, which the callers only feed into exponentials.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if !z.is_finite() {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    debug_assert!(z.re > 0.0, "ln_gamma needs Re z > 0, got {z}");
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < 16.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    const HALF_LN_2PI: f64 = 0.9189385332046728;
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series - shift
}

/// Digamma psi(z) = Gamma'(z)/Gamma(z).
pub fn digamma(z: Complex64) -> Result<Complex64, FuncError> {
    if is_gamma_pole(z) {
        return Err(FuncError::Pole { at: z });
    }
    Ok(digamma_unchecked(z))
}

pub(crate) fn digamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // psi(z) = psi(1-z) - pi cot(pi z)
        let cot = cos_pi(z) / sin_pi(z);
        return digamma_shifted(1.0 - z) - std::f64::consts::PI * cot;
    }
    digamma_shifted(z)
}

fn digamma_shifted(mut z: Complex64) -> Complex64 {
    // recurrence up to |z| >= 10, then the asymptotic series
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm() < 10.0 {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // psi(z) ~ ln z - 1/(2z) - sum B_{2n}/(2n z^{2n})
    const COEF: [f64; 7] = [
        -1.0 / 12.0,
        1.0 / 120.0,
        -1.0 / 252.0,
        1.0 / 240.0,
        -1.0 / 132.0,
        691.0 / 32760.0,
        -1.0 / 12.0,
    ];
    let inv2 = 1.0 / (z * z);
    let mut s = z.ln() - 0.5 / z;
    let mut p = inv2;
    for c in COEF {
        s += c * p;
        p *= inv2;
    }
    acc + s
}

/// Trigamma psi'(z).
pub fn trigamma(z: Complex64) -> Result<Complex64, FuncError> {
    if is_gamma_pole(z) {
        return Err(FuncError::Pole { at: z });
    }
    Ok(trigamma_unchecked(z))
}

pub(crate) fn trigamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // psi'(z) + psi'(1-z) = pi^2 / sin^2(pi z)
        let s = sin_pi(z);
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        return pi2 / (s * s) - trigamma_shifted(1.0 - z);
    }
    trigamma_shifted(z)
}

fn trigamma_shifted(mut z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    while z.norm() < 10.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    // psi'(z) ~ 1/z + 1/(2z^2) + sum B_{2n} / z^{2n+1}
    const B2N: [f64; 7] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut s = inv + 0.5 * inv2;
    let mut p = inv * inv2;
    for c in B2N {
        s += c * p;
        p *= inv2;
    }
    acc + s
}

/// The truncated canonical product
/// `Gamma_n(z) = (e^{-gamma z}/z) prod_{k=1..n} (1 + z/k)^{-1} e^{z/k}`.
pub fn gamma_partial(n: u32, z: Complex64) -> Result<Complex64, FuncError> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 && -z.re <= n as f64 {
        return Err(FuncError::Pole { at: z });
    }
    // accumulate in log space to avoid over/underflow for large n
    let mut log_acc = -EULER_GAMMA * z - z.ln();
    for k in 1..=n {
        let k = k as f64;
        log_acc += z / k - (1.0 + z / k).ln();
    }
    Ok(log_acc.exp())
}

/// Log-derivative of the truncated product (the partial digamma).
pub fn gamma_partial_log_deriv(n: u32, z: Complex64) -> Complex64 {
    let mut s = Complex64::new(-EULER_GAMMA, 0.0) - 1.0 / z;
    for k in 1..=n {
        let k = k as f64;
        s += 1.0 / k - 1.0 / (z + k);
    }
    s
}

pub(crate) fn gamma_partial_log_deriv2(n: u32, z: Complex64) -> Complex64 {
    let mut s = 1.0 / (z * z);
    for k in 1..=n {
        let k = k as f64;
        s += 1.0 / ((z + k) * (z + k));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    const SQRT_PI: f64 = 1.7724538509055160273;

    #[test]
    fn gamma_identity_values() {
        assert!((gamma(C::new(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((gamma(C::new(0.5, 0.0)).unwrap().re - SQRT_PI).abs() < 1e-14);
        assert!((gamma(C::new(5.0, 0.0)).unwrap().re - 24.0).abs() < 1e-12);
        // residue 1 at the origin: z Gamma(z) -> 1
        let z = C::new(1e-6, 0.0);
        assert!((z * gamma(z).unwrap() - 1.0).norm() < 1e-5);
    }

    #[test]
    fn gamma_conjugate_symmetry() {
        let z = C::new(2.0, 3.0);
        let a = gamma(z).unwrap();
        let b = gamma(z.conj()).unwrap();
        assert!((a.conj() - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn gamma_recurrence_residual_grid() {
        // Gamma(z+1) = z Gamma(z) across the window of interest
        for i in 0..20 {
            for j in 0..20 {
                let z = C::new(-9.5 + i as f64, -9.5 + j as f64 + 0.25);
                if gamma_pole_distance(z) < 0.1 {
                    continue;
                }
                let g = gamma(z).unwrap();
                let g1 = gamma(z + 1.0).unwrap();
                let rel = (g1 - z * g).norm() / g1.norm().max(1e-300);
                assert!(rel < 1e-12, "z={z} rel={rel:e}");
            }
        }
    }

    #[test]
    fn gamma_pole_rejection() {
        assert!(matches!(gamma(C::new(0.0, 0.0)), Err(FuncError::Pole { .. })));
        assert!(matches!(gamma(C::new(-3.0, 0.0)), Err(FuncError::Pole { .. })));
        assert!(gamma(C::new(-3.0, 1e-9)).is_ok());
    }

    #[test]
    fn digamma_values() {
        // psi(1) = -gamma
        let p1 = digamma(C::new(1.0, 0.0)).unwrap();
        assert!((p1.re + EULER_GAMMA).abs() < 1e-13);
        // psi real on the real axis off poles
        let p2 = digamma(C::new(2.0, 0.0)).unwrap();
        assert!(p2.im.abs() < 1e-12);
        assert!((p2.re - (1.0 - EULER_GAMMA)).abs() < 1e-13);
        // sign change inside (1, 2)
        let a = digamma(C::new(1.05, 0.0)).unwrap().re;
        let b = digamma(C::new(1.95, 0.0)).unwrap().re;
        assert!(a < 0.0 && b > 0.0);
    }

    #[test]
    fn digamma_recurrence() {
        for &z in &[C::new(0.3, 1.7), C::new(-4.2, 0.9), C::new(3.0, -8.0)] {
            let d = digamma(z + 1.0).unwrap() - digamma(z).unwrap() - 1.0 / z;
            assert!(d.norm() < 1e-11, "z={z} d={:e}", d.norm());
        }
    }

    #[test]
    fn trigamma_values() {
        // psi'(1) = pi^2/6
        let t = trigamma(C::new(1.0, 0.0)).unwrap();
        assert!((t.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        // recurrence psi'(z) = psi'(z+1) + 1/z^2
        let z = C::new(-2.3, 1.1);
        let d = trigamma(z).unwrap() - trigamma(z + 1.0).unwrap() - 1.0 / (z * z);
        assert!(d.norm() < 1e-11);
    }

    #[test]
    fn partial_product_converges() {
        let z = C::new(1.5, 0.0);
        let exact = gamma(z).unwrap();
        let mut prev = f64::INFINITY;
        for n in [10u32, 100, 1000] {
            let err = (gamma_partial(n, z).unwrap() - exact).norm();
            assert!(err < prev, "n={n}");
            prev = err;
        }
        // O(1/n) convergence: n=1000 within 1e-2 at z = 0.5
        let e = (gamma_partial(1000, C::new(0.5, 0.0)).unwrap().re - SQRT_PI).abs();
        assert!(e < 1e-2, "e={e}");
    }

    #[test]
    fn partial_product_conjugate_symmetry() {
        let z = C::new(0.7, 2.2);
        let a = gamma_partial(200, z).unwrap();
        let b = gamma_partial(200, z.conj()).unwrap();
        assert!((a.conj() - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn sin_pi_exact_at_integers() {
        assert_eq!(sin_pi(C::new(-4.0, 0.0)).norm(), 0.0);
        assert_eq!(sin_pi(C::new(7.0, 0.0)).norm(), 0.0);
        let z = C::new(0.25, 0.5);
        let direct = (std::f64::consts::PI * z).sin();
        assert!((sin_pi(z) - direct).norm() < 1e-14);
    }

    #[test]
    fn ln_gamma_consistent_with_gamma() {
        for &z in &[C::new(0.25, 7.0), C::new(3.0, 50.0), C::new(1.0, 0.5)] {
            let lg = ln_gamma(z);
            let g = gamma(z).unwrap();
            assert!((lg.exp() - g).norm() / g.norm() < 1e-12, "z={z}");
        }
    }
}
