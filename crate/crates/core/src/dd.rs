//! Double-double arithmetic (about 32 significant digits).
//!
//! Used where the multiplet sums cancel heavily: the characteristic function of
//! a weakly squeezed high-`m` member is an O(1) quantity assembled from terms
//! scaled by a normalization in the thousands.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) const PI: Dd = Dd {
    hi: std::f64::consts::PI,
    lo: 1.224_646_799_147_353_2e-16,
};
const FRAC_PI_2: Dd = Dd {
    hi: std::f64::consts::FRAC_PI_2,
    lo: 6.123_233_995_736_766e-17,
};
const LN_2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Self {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        Dd::renorm(p, e + self.lo * b)
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let (s, f) = two_sum(self.hi, -p);
        let q2 = (s + (f - e + self.lo)) / b;
        Dd::renorm(q1, q2)
    }

    /// Multiplication by `2^k`; exact away from overflow and subnormals.
    #[inline]
    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let y = Dd::new(self.hi.sqrt());
        y + (self - y * y) / y.mul_f64(2.0)
    }

    pub fn exp(self) -> Self {
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        let k = (self.hi / LN_2.hi).round();
        // |reduced| <= ln2/2 / 512, so ten Taylor terms exceed double-double precision.
        let reduced = (self - LN_2.mul_f64(k)).ldexp(-9);
        let mut term = reduced;
        let mut expm1 = reduced;
        for n in 2..=12 {
            term = (term * reduced).div_f64(n as f64);
            expm1 = expm1 + term;
        }
        for _ in 0..9 {
            expm1 = expm1.mul_f64(2.0) + expm1 * expm1;
        }
        (expm1 + Dd::ONE).ldexp(k as i32)
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(self) -> (Self, Self) {
        let j = (self.hi / FRAC_PI_2.hi).round();
        let t = self - FRAC_PI_2.mul_f64(j);
        let t2 = t * t;
        let mut sin = t;
        let mut cos = Dd::ONE;
        let mut term_s = t;
        let mut term_c = Dd::ONE;
        let mut n = 1.0;
        loop {
            term_s = -(term_s * t2).div_f64((n + 1.0) * (n + 2.0));
            term_c = -(term_c * t2).div_f64(n * (n + 1.0));
            sin = sin + term_s;
            cos = cos + term_c;
            n += 2.0;
            if term_s.hi.abs() < 1e-34 && term_c.hi.abs() < 1e-34 {
                break;
            }
        }
        match (j as i64).rem_euclid(4) {
            0 => (sin, cos),
            1 => (cos, -sin),
            2 => (-sin, -cos),
            _ => (-cos, sin),
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Dd::renorm(s1, s2 + t2)
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        Dd::renorm(p, e + (self.hi * b.lo + self.lo * b.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        Dd::renorm(q1, q2) + Dd::new(q3)
    }
}

/// Complex double-double.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

/// `exp(i pi num / den)` with the angle reduced exactly before rounding.
pub(crate) fn cis_pi_fraction(num: i64, den: usize) -> Cdd {
    let reduced = num.rem_euclid(2 * den as i64);
    Cdd::cis((PI.mul_f64(reduced as f64)).div_f64(den as f64))
}

impl Cdd {
    pub const ZERO: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: Cdd = Cdd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    pub fn new(re: Dd, im: Dd) -> Self {
        Cdd { re, im }
    }

    #[cfg(test)]
    pub fn from_c64(z: Complex64) -> Self {
        Cdd::new(Dd::new(z.re), Dd::new(z.im))
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `exp(i * angle)`.
    pub fn cis(angle: Dd) -> Self {
        let (s, c) = angle.sin_cos();
        Cdd::new(c, s)
    }

    pub fn conj(self) -> Self {
        Cdd::new(self.re, -self.im)
    }

    pub fn scale(self, k: Dd) -> Self {
        Cdd::new(self.re * k, self.im * k)
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn recip(self) -> Self {
        let d = self.norm_sqr();
        Cdd::new(self.re / d, -self.im / d)
    }

    pub fn exp(self) -> Self {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Cdd::new(m * c, m * s)
    }

    /// Principal square root.
    pub fn sqrt(self) -> Self {
        let m = self.norm_sqr().sqrt();
        if self.re.hi >= 0.0 {
            let t = ((m + self.re).mul_f64(0.5)).sqrt();
            if t.hi == 0.0 {
                return Cdd::ZERO;
            }
            Cdd::new(t, self.im / t.mul_f64(2.0))
        } else {
            let t = ((m - self.re).mul_f64(0.5)).sqrt();
            let re = self.im.abs() / t.mul_f64(2.0);
            let im = if self.im.hi < 0.0 { -t } else { t };
            Cdd::new(re, im)
        }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, b: Cdd) -> Cdd {
        Cdd::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, b: Cdd) -> Cdd {
        Cdd::new(self.re - b.re, self.im - b.im)
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd::new(-self.re, -self.im)
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, b: Cdd) -> Cdd {
        Cdd::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl Div for Cdd {
    type Output = Cdd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, b: Cdd) -> Cdd {
        self * b.recip()
    }
}
