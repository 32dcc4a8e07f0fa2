//! Double-double arithmetic (~31 significant digits).
//!
//! Used where plain f64 loses too many digits to cancellation: the analytic
//! continuation of the zeta sum at negative real part, the Stieltjes-constant
//! limit, and the reference gamma evaluator. The algorithms are the classic
//! error-free transformations (Dekker splitting, Knuth two-sum) plus
//! argument-reduced Taylor kernels for exp/ln/sin/cos.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// An unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134217729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

pub const DD_PI: Dd = Dd { hi: 3.141592653589793, lo: 1.2246467991473532e-16 };
pub const DD_TWO_PI: Dd = Dd { hi: 6.283185307179586, lo: 2.4492935982947064e-16 };
pub const DD_PI_2: Dd = Dd { hi: 1.5707963267948966, lo: 6.123233995736766e-17 };
pub const DD_LN2: Dd = Dd { hi: 0.6931471805599453, lo: 2.3190468138462996e-17 };
pub const DD_E: Dd = Dd { hi: 2.718281828459045, lo: 1.4456468917292502e-16 };

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn from_u64(n: u64) -> Dd {
        // split into two 32-bit halves, each exact in f64
        let hi32 = (n >> 32) as f64 * 4294967296.0;
        let lo32 = (n & 0xffff_ffff) as f64;
        Dd::from(hi32) + Dd::from(lo32)
    }

    #[inline]
    pub fn f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) { -self } else { self }
    }

    pub fn sqr(self) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        p2 += self.lo * self.lo;
        let (s, e) = quick_two_sum(p1, p2);
        Dd { hi: s, lo: e }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        let y = self.hi.sqrt();
        // one Newton step in dd: y + (a - y^2) / (2y)
        let yd = Dd::from(y);
        let r = (self - yd.sqr()) / Dd::from(2.0 * y);
        yd + r
    }

    pub fn powi(self, n: i32) -> Dd {
        let mut result = Dd::ONE;
        let mut base = if n < 0 { Dd::ONE / self } else { self };
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base.sqr();
            e >>= 1;
        }
        result
    }

    /// exp with |a| up to ~700; reduction exp(a) = 2^m exp(r)^(2^9).
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from(f64::INFINITY);
        }
        if self.hi < -709.0 {
            return Dd::ZERO;
        }
        let m = (self.hi / std::f64::consts::LN_2).round();
        let r = (self - DD_LN2 * Dd::from(m)) * Dd::from(1.0 / 512.0);
        // Taylor of exp(r) - 1, |r| <= ln2/1024
        let mut term = r;
        let mut sum = r;
        for k in 2..=10 {
            term = term * r / Dd::from(k as f64);
            sum = sum + term;
        }
        // undo the /512 by nine squarings of (1+x): x <- x^2 + 2x
        for _ in 0..9 {
            sum = sum.sqr() + sum * Dd::from(2.0);
        }
        let result = sum + Dd::ONE;
        result * Dd::from(f64::exp2(m))
    }

    /// natural log for positive values; Newton refinement of the f64 estimate.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let y = Dd::from(self.hi.ln());
        // y + a*exp(-y) - 1
        y + self * (-y).exp() - Dd::ONE
    }

    /// simultaneous sin/cos with argument reduction mod 2*pi then pi/2.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let q = (self.f64() / DD_TWO_PI.f64()).round();
        let r = self - DD_TWO_PI * Dd::from(q);
        let j = (r.f64() / DD_PI_2.f64()).round();
        let x = r - DD_PI_2 * Dd::from(j);
        let (s, c) = sin_cos_taylor(x);
        match (j as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }

    pub fn cos(self) -> Dd {
        self.sin_cos().1
    }

    /// two-argument arctangent, refined from the f64 value by one rotation.
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        let th0 = y.hi.atan2(x.hi);
        let (s, c) = Dd::from(th0).sin_cos();
        // rotate (x, y) by -th0; the residual angle is tiny
        let xr = x * c + y * s;
        let yr = y * c - x * s;
        if xr.hi == 0.0 {
            return Dd::from(th0);
        }
        Dd::from(th0) + yr / xr
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, o: Dd) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, o.hi);
        p2 += self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r2 = r - o * Dd::from(q2);
        let q3 = r2.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + Dd::from(q3)
    }
}

fn sin_cos_taylor(x: Dd) -> (Dd, Dd) {
    // |x| <= pi/4
    let x2 = x.sqr();
    let mut s = x;
    let mut term = x;
    let mut k = 1.0f64;
    for _ in 0..14 {
        term = -(term * x2) / Dd::from((k + 1.0) * (k + 2.0));
        s = s + term;
        k += 2.0;
        if term.hi.abs() < 1e-35 {
            break;
        }
    }
    let mut c = Dd::ONE;
    term = Dd::ONE;
    k = 0.0;
    for _ in 0..14 {
        term = -(term * x2) / Dd::from((k + 1.0) * (k + 2.0));
        c = c + term;
        k += 2.0;
        if term.hi.abs() < 1e-35 {
            break;
        }
    }
    (s, c)
}

/// Complex number with double-double components.
#[derive(Clone, Copy, Debug)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: Cdd = Cdd { re: Dd::ONE, im: Dd::ZERO };

    #[inline]
    pub fn new(re: Dd, im: Dd) -> Cdd {
        Cdd { re, im }
    }

    #[inline]
    pub fn from_f64(re: f64, im: f64) -> Cdd {
        Cdd { re: Dd::from(re), im: Dd::from(im) }
    }

    #[inline]
    pub fn to_complex(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.f64(), self.im.f64())
    }

    pub fn norm(self) -> Dd {
        (self.re.sqr() + self.im.sqr()).sqrt()
    }

    pub fn exp(self) -> Cdd {
        let r = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cdd { re: r * c, im: r * s }
    }

    pub fn ln(self) -> Cdd {
        Cdd { re: self.norm().ln(), im: Dd::atan2(self.im, self.re) }
    }

    /// w^z = exp(z ln w), principal branch.
    pub fn pow(self, z: Cdd) -> Cdd {
        (z * self.ln()).exp()
    }

    pub fn recip(self) -> Cdd {
        let d = self.re.sqr() + self.im.sqr();
        Cdd { re: self.re / d, im: -self.im / d }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    #[inline]
    fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    #[inline]
    fn sub(self, o: Cdd) -> Cdd {
        Cdd { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    #[inline]
    fn neg(self) -> Cdd {
        Cdd { re: -self.re, im: -self.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    #[inline]
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, o: Cdd) -> Cdd {
        self * o.recip()
    }
}

impl Mul<Dd> for Cdd {
    type Output = Cdd;
    #[inline]
    fn mul(self, o: Dd) -> Cdd {
        Cdd { re: self.re * o, im: self.im * o }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Dd, b: f64, tol: f64) -> bool {
        (a.f64() - b).abs() <= tol
    }

    #[test]
    fn add_mul_identities() {
        let a = Dd::from(0.1) + Dd::from(0.2);
        let b = Dd::from(0.3);
        // 0.1 + 0.2 != 0.3 in f64, but the dd difference is the true rounding gap
        assert!((a - b).f64().abs() < 1e-16);
        let x = Dd::from(1.0) / Dd::from(3.0);
        assert!(close(x * Dd::from(3.0), 1.0, 1e-31));
    }

    #[test]
    fn exp_ln_roundtrip() {
        for &v in &[1.0e-3, 0.5, 1.0, 2.5, 10.0, 100.0, 650.0] {
            let x = Dd::from(v);
            let r = x.ln().exp();
            let rel = ((r - x) / x).f64().abs();
            assert!(rel < 1e-29, "v={v} rel={rel:e}");
        }
        // exp(1) = e
        assert!((Dd::ONE.exp() - DD_E).f64().abs() < 1e-31);
    }

    #[test]
    fn trig_identities() {
        for k in 0..40 {
            let x = Dd::from(k as f64 * 0.7 - 11.0);
            let (s, c) = x.sin_cos();
            let one = s.sqr() + c.sqr();
            assert!((one - Dd::ONE).f64().abs() < 1e-30);
            assert!((s.f64() - x.f64().sin()).abs() < 1e-15);
        }
        // large-argument reduction
        let big = Dd::from(6400.0);
        let (s, _) = big.sin_cos();
        assert!((s.f64() - 6400.0f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn atan2_agrees_with_f64() {
        for k in 0..24 {
            let th = k as f64 * 0.26 - 3.0;
            let (s, c) = Dd::from(th).sin_cos();
            let back = Dd::atan2(s, c).f64();
            let mut d = back - th;
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            assert!(d.abs() < 1e-15, "th={th} d={d:e}");
        }
    }

    #[test]
    fn complex_pow() {
        // n^(-s) for s = -5 + 50i, n = 20 against the f64 route (loose check)
        let s = Cdd::from_f64(5.0, -50.0);
        let w = Cdd::from_f64(20.0, 0.0).pow(s);
        let f = num_complex::Complex64::new(20.0, 0.0).powc(num_complex::Complex64::new(5.0, -50.0));
        assert!((w.to_complex() - f).norm() / f.norm() < 1e-12);
    }

    #[test]
    fn sqrt_newton() {
        let two = Dd::from(2.0).sqrt();
        assert!((two.sqr() - Dd::from(2.0)).f64().abs() < 1e-31);
    }
}
