//! Scalar backends.
//!
//! Every numerically sensitive stage (spectra, inversion, extrapolation) is
//! generic over [`Real`]. `f64` is the reference backend; [`DoubleDouble`]
//! is the extended backend selected with `--precision extended`.

mod double_double;

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_complex::Complex;
use num_traits::NumAssign;
use serde::{Deserialize, Serialize};

pub use double_double::DoubleDouble;

pub type Complex64 = Complex<f64>;

/// Real field used by the precision-generic parts of the crate.
pub trait Real:
    Copy
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + NumAssign
    + Neg<Output = Self>
    + 'static
{
    const PRECISION: Precision;

    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    /// Unit roundoff.
    fn epsilon() -> Self;
    fn pi() -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan2(self, x: Self) -> Self;
    fn powf(self, e: Self) -> Self;
    fn is_finite(self) -> bool;

    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn hypot(self, other: Self) -> Self {
        let (a, b) = (self.abs(), other.abs());
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big == Self::zero() {
            return big;
        }
        let r = small / big;
        big * (Self::one() + r * r).sqrt()
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Hardware;

    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn epsilon() -> Self {
        f64::EPSILON / 2.0
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    fn powf(self, e: Self) -> Self {
        f64::powf(self, e)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn hypot(self, other: Self) -> Self {
        f64::hypot(self, other)
    }
}

impl Real for DoubleDouble {
    const PRECISION: Precision = Precision::Extended;

    fn from_f64(x: f64) -> Self {
        DoubleDouble::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }
    fn epsilon() -> Self {
        DoubleDouble::from_f64(double_double::EPSILON)
    }
    fn pi() -> Self {
        DoubleDouble::pi()
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    fn exp(self) -> Self {
        DoubleDouble::exp(self)
    }
    fn ln(self) -> Self {
        DoubleDouble::ln(self)
    }
    fn sin(self) -> Self {
        DoubleDouble::sin(self)
    }
    fn cos(self) -> Self {
        DoubleDouble::cos(self)
    }
    fn atan2(self, x: Self) -> Self {
        DoubleDouble::atan2(self, x)
    }
    fn powf(self, e: Self) -> Self {
        DoubleDouble::powf(self, e)
    }
    fn is_finite(self) -> bool {
        DoubleDouble::is_finite(self)
    }
}

/// Scalar backend selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// 64-bit IEEE binary floating point.
    #[serde(rename = "hw")]
    Hardware,
    /// Double-double, about 31 significant digits.
    Extended,
}

impl Precision {
    pub fn tag(self) -> &'static str {
        match self {
            Precision::Hardware => "hw",
            Precision::Extended => "extended",
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hw" | "f64" | "hardware" => Ok(Precision::Hardware),
            "extended" | "dd" | "double-double" => Ok(Precision::Extended),
            other => Err(format!("unknown precision `{other}` (expected hw or extended)")),
        }
    }
}

impl Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

// Complex helpers. `num_complex` only offers transcendental functions for
// `T: Float`, so the generic paths go through these.

pub fn cabs<R: Real>(z: Complex<R>) -> R {
    z.re.hypot(z.im)
}

/// Principal argument in `(-pi, pi]`. A signed zero imaginary part is read as
/// `+0`, so the negative real axis always maps to `+pi`.
pub fn carg<R: Real>(z: Complex<R>) -> R {
    if z.im == R::zero() {
        if z.re < R::zero() {
            R::pi()
        } else {
            R::zero()
        }
    } else {
        z.im.atan2(z.re)
    }
}

pub fn cln<R: Real>(z: Complex<R>) -> Complex<R> {
    Complex::new(cabs(z).ln(), carg(z))
}

pub fn cexp<R: Real>(z: Complex<R>) -> Complex<R> {
    let m = z.re.exp();
    Complex::new(m * z.im.cos(), m * z.im.sin())
}

pub fn from_polar<R: Real>(r: R, theta: R) -> Complex<R> {
    Complex::new(r * theta.cos(), r * theta.sin())
}

/// Principal power `z^p` for real `p`, with `arg z` in `(-pi, pi]`.
pub fn cpowf<R: Real>(z: Complex<R>, p: R) -> Complex<R> {
    let r = cabs(z);
    if r == R::zero() {
        return Complex::new(R::zero(), R::zero());
    }
    from_polar(r.powf(p), carg(z) * p)
}

pub fn to_c64<R: Real>(z: Complex<R>) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

pub fn from_c64<R: Real>(z: Complex64) -> Complex<R> {
    Complex::new(R::from_f64(z.re), R::from_f64(z.im))
}

/// `exp(-2 pi i j / n)`, the j-th power of the clockwise n-th root of unity.
pub fn root_of_unity<R: Real>(n: usize, j: i64) -> Complex<R> {
    let n = n as i64;
    let j = j.rem_euclid(n);
    let theta = -(R::from_f64(2.0) * R::pi() * R::from_f64(j as f64)) / R::from_f64(n as f64);
    from_polar(R::one(), theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_real_axis_has_argument_pi() {
        let z = Complex64::new(-0.05, -0.0);
        assert_eq!(carg(z), std::f64::consts::PI);
        let w = cpowf(Complex64::new(-1.0, 0.0), 0.5);
        assert!((w - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn roots_of_unity_wrap() {
        let a: Complex64 = root_of_unity(8, 2);
        assert!((a - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let b: Complex64 = root_of_unity(8, 10);
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn backends_agree_on_complex_log() {
        let z = Complex64::new(-0.3, 0.8);
        let zd: Complex<DoubleDouble> = from_c64(z);
        let l = cln(z);
        let ld = to_c64(cln(zd));
        assert!((l - ld).norm() < 1e-15);
    }

    #[test]
    fn precision_parses() {
        assert_eq!("hw".parse::<Precision>().unwrap(), Precision::Hardware);
        assert_eq!("extended".parse::<Precision>().unwrap(), Precision::Extended);
        assert!("quad".parse::<Precision>().is_err());
    }
}
