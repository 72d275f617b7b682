//! Double-double arithmetic: an unevaluated sum `hi + lo` of two `f64`s with
//! `|lo| <= ulp(hi) / 2`, giving roughly 31 significant decimal digits.
//!
//! The error-free transformations and the transcendental kernels follow the
//! classic QD library layout (Hida, Li, Bailey). Transcendentals are computed
//! by one Newton correction of an `f64` seed (`ln`, `atan2`) or by argument
//! reduction plus Taylor series (`exp`, `sin`, `cos`).

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_traits::{Num, One, Zero};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

const PI: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::PI, 1.2246467991473532e-16);
const TAU: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::TAU, 2.4492935982947064e-16);
const FRAC_PI_2: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::FRAC_PI_2, 6.123233995736766e-17);
const LN_2: DoubleDouble = DoubleDouble::from_parts(std::f64::consts::LN_2, 2.3190468138462996e-17);

/// 2^-104, half an ulp of the low word relative to the high word.
pub const EPSILON: f64 = 4.930380657631324e-32;

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

impl DoubleDouble {
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn pi() -> Self {
        PI
    }

    pub fn tau() -> Self {
        TAU
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    fn ldexp(self, e: i32) -> Self {
        let s = 2f64.powi(e);
        Self { hi: self.hi * s, lo: self.lo * s }
    }

    fn sqr(self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        p2 += self.lo * self.lo;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    pub fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let (hi, lo) = quick_two_sum(hi, self.lo.floor());
            Self { hi, lo }
        } else {
            Self { hi, lo: 0.0 }
        }
    }

    pub fn round(self) -> Self {
        (self + Self::from_f64(0.5)).floor()
    }

    pub fn sqrt(self) -> Self {
        if self.hi == 0.0 {
            return Self::zero();
        }
        if self.hi < 0.0 {
            return Self::from_f64(f64::NAN);
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        Self::from_f64(ax) + Self::from_f64((self - Self::from_f64(ax).sqr()).hi * (x * 0.5))
    }

    pub fn exp(self) -> Self {
        const K: i32 = 9;
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::zero();
        }
        if self.hi == 0.0 {
            return Self::one();
        }
        let m = (self.hi / LN_2.hi + 0.5).floor();
        let r = (self - LN_2.mul_f64(m)).ldexp(-K);
        // Taylor series for exp(r) - 1 with |r| <= ln2 / 1024.
        let mut s = r;
        let mut term = r;
        let mut i = 2.0;
        loop {
            term = term * r / Self::from_f64(i);
            s += term;
            if term.hi.abs() <= EPSILON * 1e-3 * s.hi.abs() || i > 30.0 {
                break;
            }
            i += 1.0;
        }
        for _ in 0..K {
            s = s.mul_f64(2.0) + s.sqr();
        }
        (s + Self::one()).ldexp(m as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 {
                Self::from_f64(f64::NEG_INFINITY)
            } else {
                Self::from_f64(f64::NAN)
            };
        }
        if self == Self::one() {
            return Self::zero();
        }
        let x = Self::from_f64(self.hi.ln());
        x + self * (-x).exp() - Self::one()
    }

    /// Taylor kernel for |r| <= pi/4.
    fn sin_cos_kernel(r: Self) -> (Self, Self) {
        let r2 = r.sqr();
        let mut sin = r;
        let mut term = r;
        let mut k = 1.0;
        while term.hi.abs() > EPSILON * 1e-3 {
            term = -(term * r2) / Self::from_f64((k + 1.0) * (k + 2.0));
            sin += term;
            k += 2.0;
            if k > 60.0 {
                break;
            }
        }
        let mut cos = Self::one();
        let mut term = Self::one();
        let mut k = 0.0;
        while term.hi.abs() > EPSILON * 1e-3 {
            term = -(term * r2) / Self::from_f64((k + 1.0) * (k + 2.0));
            cos += term;
            k += 2.0;
            if k > 60.0 {
                break;
            }
        }
        (sin, cos)
    }

    pub fn sin_cos(self) -> (Self, Self) {
        if self.hi == 0.0 {
            return (Self::zero(), Self::one());
        }
        let z = (self / TAU).round();
        let r = self - TAU * z;
        let q = (r.hi / FRAC_PI_2.hi + 0.5).floor();
        let t = r - FRAC_PI_2.mul_f64(q);
        let (s, c) = Self::sin_cos_kernel(t);
        match (q as i64).rem_euclid(4) {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }

    pub fn sin(self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(self) -> Self {
        self.sin_cos().1
    }

    /// Principal `atan2(self, x)` in `(-pi, pi]`.
    pub fn atan2(self, x: Self) -> Self {
        let y = self;
        if x.hi == 0.0 && y.hi == 0.0 {
            return Self::zero();
        }
        if x.hi == 0.0 {
            return if y.hi > 0.0 { FRAC_PI_2 } else { -FRAC_PI_2 };
        }
        if y.hi == 0.0 {
            return if x.hi > 0.0 { Self::zero() } else { PI };
        }
        let z = Self::from_f64(y.hi.atan2(x.hi));
        let r = (x.sqr() + y.sqr()).sqrt();
        let xx = x / r;
        let yy = y / r;
        let (s, c) = z.sin_cos();
        if xx.hi.abs() > yy.hi.abs() {
            z + (yy - s) / c
        } else {
            z - (xx - c) / s
        }
    }

    pub fn powf(self, e: Self) -> Self {
        if self.hi == 0.0 {
            return if e.hi > 0.0 { Self::zero() } else { Self::from_f64(f64::INFINITY) };
        }
        (e * self.ln()).exp()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let mut r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        r -= b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Self { hi: q1, lo: q2 } + Self::from_f64(q3)
    }
}

impl Rem for DoubleDouble {
    type Output = Self;
    fn rem(self, b: Self) -> Self {
        let q = self / b;
        let q = if q.hi < 0.0 { -((-q).floor()) } else { q.floor() };
        self - b * q
    }
}

macro_rules! assign_op {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for DoubleDouble {
            fn $m(&mut self, b: Self) {
                *self = *self $op b;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);
assign_op!(RemAssign, rem_assign, %);

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Zero for DoubleDouble {
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0
    }
}

impl One for DoubleDouble {
    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Num for DoubleDouble {
    type FromStrRadixErr = std::num::ParseFloatError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        // Only decimal input is meaningful here; parse through f64.
        let _ = radix;
        s.parse::<f64>().map(Self::from_f64)
    }
}

impl Sum for DoubleDouble {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl Product for DoubleDouble {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == 0.0 {
            write!(f, "{:e}", self.hi)
        } else {
            write!(f, "{:e}{:+e}", self.hi, self.lo)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(x: f64) -> DoubleDouble {
        DoubleDouble::from_f64(x)
    }

    fn close(a: DoubleDouble, hi: f64, lo: f64, tol: f64) {
        let d = (a - DoubleDouble::from_parts(hi, lo)).abs();
        assert!(d.hi <= tol * hi.abs().max(1e-300), "{a} vs {hi:e}{lo:+e}");
    }

    // Reference hi/lo pairs computed with 50-digit mpmath.
    #[test]
    fn transcendentals_match_reference() {
        close(dd(2.0).ln(), std::f64::consts::LN_2, 2.3190468138462996e-17, 1e-30);
        close(dd(0.75).exp(), 2.117000016612675, -1.1571006249440234e-16, 1e-30);
        close(dd(2.0).powf(dd(0.75)), 1.681792830507429, 8.199010020581497e-17, 1e-30);
        close(dd(0.75).sin(), 0.6816387600233341, 4.410467313197903e-17, 1e-30);
        close(dd(2.5).cos(), -0.8011436155469337, -1.8674742705085553e-17, 1e-30);
        close(dd(0.75).atan2(dd(-0.3)), 1.9513027039072615, 3.2870159425220876e-17, 1e-30);
        close(dd(2.0).sqrt(), std::f64::consts::SQRT_2, -9.667293313452913e-17, 1e-30);
    }

    #[test]
    fn division_round_trips() {
        let a = dd(1.0) / dd(3.0);
        let back = a * dd(3.0);
        assert!((back - dd(1.0)).abs().hi < 1e-31);
    }

    #[test]
    fn sin_cos_identity_over_wide_range() {
        for i in -40..40 {
            let x = dd(i as f64 * 0.37 + 0.01);
            let (s, c) = x.sin_cos();
            let one = s * s + c * c;
            assert!((one - dd(1.0)).abs().hi < 1e-30, "x = {x}");
        }
    }

    #[test]
    fn ln_exp_round_trip() {
        for &x in &[1e-8, 0.013, 0.5, 1.5, 7.0, 1e5] {
            let v = dd(x);
            let back = v.ln().exp();
            // exp amplifies the absolute error of ln x by |ln x|.
            let tol = 1e-31 * (1.0 + x.ln().abs());
            assert!(((back - v) / v).abs().hi < tol, "x = {x}");
        }
    }

    #[test]
    fn atan2_quadrants() {
        let pi = DoubleDouble::pi();
        assert_eq!(dd(0.0).atan2(dd(-1.0)), pi);
        assert_eq!(dd(1.0).atan2(dd(0.0)), FRAC_PI_2);
        let q3 = dd(-1.0).atan2(dd(-1.0));
        close(q3, -2.356194490192345, -9.184850993605148e-17, 1e-30);
    }
}
