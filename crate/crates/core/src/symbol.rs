//! The generating function `a(t) = t^{-1} (1 - t)^alpha f(t)`.
//!
//! `(1 - t)^alpha` is taken on the principal branch, `arg(1 - t)` in
//! `(-pi, pi]`, so the cut is the real ray `t > 1` and the value there is the
//! limit from below (`Im t -> 0-`). `f` is a polynomial with `f(0) != 0`.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cabs, carg, cpowf, from_c64, Complex64, Real};

const NEWTON_MAX_ITERATIONS: usize = 100;
const NEWTON_MAX_HALVINGS: usize = 60;
const CURVE_PROXIMITY: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolParams {
    alpha: f64,
    f_series: Vec<Complex64>,
}

impl SymbolParams {
    pub fn new(alpha: f64, f_series: Vec<Complex64>) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha = {alpha} is not in (0, 1)")));
        }
        match f_series.first() {
            None => return Err(Error::InvalidParameter("f has no coefficients".into())),
            Some(f0) if *f0 == Complex64::zero() => {
                return Err(Error::InvalidParameter("f(0) must be nonzero".into()))
            }
            _ => {}
        }
        if f_series.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("f has non-finite coefficients".into()));
        }
        Ok(Self { alpha, f_series })
    }

    /// `a(t) = t^{-1} (1 - t)^alpha`, i.e. `f = 1`.
    pub fn model(alpha: f64) -> Result<Self> {
        Self::new(alpha, vec![Complex64::one()])
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn f_series(&self) -> &[Complex64] {
        &self.f_series
    }

    /// True when every coefficient of `f` is real, so `T_n(a)` is a real matrix.
    pub fn is_real(&self) -> bool {
        self.f_series.iter().all(|c| c.im == 0.0)
    }

    fn f_and_derivative<R: Real>(&self, t: Complex<R>) -> (Complex<R>, Complex<R>) {
        // Horner for f and f' together.
        let mut f = Complex::<R>::zero();
        let mut df = Complex::<R>::zero();
        for c in self.f_series.iter().rev() {
            df = df * t + f;
            f = f * t + from_c64::<R>(*c);
        }
        (f, df)
    }

    pub fn f_at<R: Real>(&self, t: Complex<R>) -> Complex<R> {
        self.f_and_derivative(t).0
    }

    /// `(1 - t)^alpha` on the principal branch.
    fn singular_factor<R: Real>(&self, t: Complex<R>) -> Complex<R> {
        let one_minus = Complex::new(R::one() - t.re, -t.im);
        cpowf(one_minus, R::from_f64(self.alpha))
    }

    pub fn evaluate<R: Real>(&self, t: Complex<R>) -> Result<Complex<R>> {
        if t.is_zero() {
            return Err(Error::domain("evaluate", "t = 0"));
        }
        Ok(self.singular_factor(t) * self.f_at(t) / t)
    }

    pub fn derivative<R: Real>(&self, t: Complex<R>) -> Result<Complex<R>> {
        if t.is_zero() {
            return Err(Error::domain("derivative", "t = 0"));
        }
        let one_minus = Complex::new(R::one() - t.re, -t.im);
        if one_minus.is_zero() {
            return Err(Error::domain("derivative", "t = 1"));
        }
        let b = self.singular_factor(t);
        let (f, df) = self.f_and_derivative(t);
        let alpha = R::from_f64(self.alpha);
        let inv_t = Complex::<R>::one() / t;
        // a' = -b f / t^2 - alpha b f / ((1 - t) t) + b f' / t
        let term = -f * inv_t - f * alpha / one_minus + df;
        Ok(b * term * inv_t)
    }

    /// `a_{-1}, a_0, ..., a_{j_max}`: the binomial series of `(1 - t)^alpha`
    /// convolved with `f`, shifted by `t^{-1}`.
    pub fn fourier_coefficients(&self, j_max: i64) -> Result<FourierCoefficients> {
        self.fourier_coefficients_in::<f64>(j_max)
    }

    pub fn fourier_coefficients_in<R: Real>(&self, j_max: i64) -> Result<FourierCoefficients<R>> {
        if j_max < -1 {
            return Err(Error::InvalidParameter(format!("j_max = {j_max} < -1")));
        }
        let len = (j_max + 2) as usize;
        let alpha = R::from_f64(self.alpha);
        // (-1)^i binom(alpha, i) by the ratio recursion.
        let mut binomial = Vec::with_capacity(len);
        let mut c = R::one();
        binomial.push(c);
        for i in 1..len {
            let i_r = R::from_usize(i);
            c = -(c * (alpha - i_r + R::one())) / i_r;
            binomial.push(c);
        }
        let f: Vec<Complex<R>> = self.f_series.iter().map(|c| from_c64::<R>(*c)).collect();
        let values = (0..len)
            .map(|m| {
                let mut acc = Complex::<R>::zero();
                for (d, fd) in f.iter().enumerate().take(m + 1) {
                    acc += *fd * binomial[m - d];
                }
                acc
            })
            .collect();
        Ok(FourierCoefficients { values })
    }

    /// Solve `a(t) = lambda` by damped Newton iteration from `seed`.
    ///
    /// Converges when `|a(t) - lambda| <= tol (1 + |lambda|)` with
    /// `tol = 512 u` (`u` the unit roundoff of `R`, so about `5.7e-14` for
    /// `f64`). A step is halved while it fails to reduce the residual.
    pub fn invert<R: Real>(&self, lambda: Complex<R>, seed: Complex<R>) -> Result<Complex<R>> {
        if lambda.is_zero() {
            return Err(Error::domain("invert", "lambda = 0 is the image of the branch point t = 1"));
        }
        let tol = R::epsilon() * R::from_f64(512.0) * (R::one() + cabs(lambda));
        let mut t = seed;
        let mut residual = cabs(self.evaluate(t)? - lambda);
        let mut polish = 0;
        for iteration in 0..NEWTON_MAX_ITERATIONS {
            if residual <= tol {
                // A couple of extra steps squeeze out the last bits.
                polish += 1;
                if polish > 2 {
                    return Ok(t);
                }
            }
            let fval = self.evaluate(t)? - lambda;
            let dval = match self.derivative(t) {
                Ok(d) if !d.is_zero() && d.re.is_finite() && d.im.is_finite() => d,
                _ => return self.no_convergence(iteration, t, residual, tol),
            };
            let step = fval / dval;
            let mut scale = R::one();
            let mut accepted = None;
            for _ in 0..=NEWTON_MAX_HALVINGS {
                let candidate = t - step * scale;
                if !candidate.is_zero() {
                    if let Ok(v) = self.evaluate(candidate) {
                        let r = cabs(v - lambda);
                        if r.is_finite() && r < residual {
                            accepted = Some((candidate, r));
                            break;
                        }
                    }
                }
                scale /= R::from_f64(2.0);
            }
            match accepted {
                Some((candidate, r)) => {
                    t = candidate;
                    residual = r;
                }
                None => {
                    return if residual <= tol {
                        Ok(t)
                    } else {
                        self.no_convergence(iteration, t, residual, tol)
                    }
                }
            }
        }
        if residual <= tol {
            Ok(t)
        } else {
            self.no_convergence(NEWTON_MAX_ITERATIONS, t, residual, tol)
        }
    }

    fn no_convergence<R: Real>(&self, iterations: usize, t: Complex<R>, residual: R, _tol: R) -> Result<Complex<R>> {
        Err(Error::NoConvergence {
            iterations,
            last_re: t.re.to_f64(),
            last_im: t.im.to_f64(),
            residual: residual.to_f64(),
        })
    }

    /// Discrete winding integral of `a - lambda` over `samples` equispaced
    /// points of the unit circle traversed counterclockwise: the sum of the
    /// principal argument increments divided by `2 pi`.
    pub fn winding_integral(&self, lambda: Complex64, samples: usize) -> Result<f64> {
        if samples < 3 {
            return Err(Error::InvalidParameter(format!("samples = {samples} < 3")));
        }
        let points: Vec<Complex64> = (0..samples)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                self.evaluate(Complex64::from_polar(1.0, theta)).map(|v| v - lambda)
            })
            .collect::<Result<_>>()?;
        let distance = points.iter().map(|p| p.norm()).fold(f64::INFINITY, f64::min);
        if distance < CURVE_PROXIMITY {
            return Err(Error::CurveProximity { distance });
        }
        let total: f64 = (0..samples)
            .map(|k| carg(points[(k + 1) % samples] / points[k]))
            .sum();
        Ok(total / (2.0 * std::f64::consts::PI))
    }

    /// Winding number of the symbol curve around `lambda`; nonzero exactly
    /// when `lambda` lies in the region enclosed by the range of `a`.
    pub fn is_inside_range(&self, lambda: Complex64, samples: usize) -> Result<i64> {
        Ok(self.winding_integral(lambda, samples)?.round() as i64)
    }
}

/// Fourier coefficients `a_{-1}, a_0, ..., a_{j_max}`; `a_j = 0` for `j < -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients<R: Real = f64> {
    values: Vec<Complex<R>>,
}

impl<R: Real> FourierCoefficients<R> {
    pub const J_MIN: i64 = -1;

    pub fn j_max(&self) -> i64 {
        self.values.len() as i64 - 2
    }

    /// `a_j`. Indices below -1 are structurally zero; indices above `j_max`
    /// are not stored and give `None`.
    pub fn get(&self, j: i64) -> Option<Complex<R>> {
        if j < Self::J_MIN {
            Some(Complex::zero())
        } else {
            self.values.get((j + 1) as usize).copied()
        }
    }

    /// Coefficients starting at `a_{-1}`.
    pub fn values(&self) -> &[Complex<R>] {
        &self.values
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn model() -> SymbolParams {
        SymbolParams::model(0.75).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SymbolParams::model(0.0).is_err());
        assert!(SymbolParams::model(1.0).is_err());
        assert!(SymbolParams::new(0.5, vec![c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(SymbolParams::new(0.5, vec![]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let s = model();
        assert_eq!(s.evaluate(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        let v = s.evaluate(c(-1.0, 0.0)).unwrap();
        assert!((v - c(-2f64.powf(0.75), 0.0)).norm() < 1e-15);
        assert!((v.re + 1.6817928).abs() < 1e-7);
        let half = SymbolParams::model(0.5).unwrap();
        let w = half.evaluate(c(2.0, 0.0)).unwrap();
        assert!((w - c(0.0, 0.5)).norm() < 1e-15);
        assert!(matches!(s.evaluate(c(0.0, 0.0)), Err(Error::Domain { .. })));
    }

    #[test]
    fn derivative_examples() {
        let s = model();
        let d = s.derivative(c(-1.0, 0.0)).unwrap();
        let expected = -2f64.powf(0.75) + 0.75 * 2f64.powf(-0.25);
        assert!((d - c(expected, 0.0)).norm() < 1e-14);
        assert!((d.re + 1.0511205).abs() < 1e-7);
        let half = SymbolParams::model(0.5).unwrap();
        assert!(half.derivative(c(2.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(s.derivative(c(1.0, 0.0)).is_err());
        assert!(s.derivative(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn derivative_matches_central_difference_on_test_set() {
        let syms = [model(), SymbolParams::new(0.4, vec![c(2.0, 0.0), c(0.3, -0.2), c(0.1, 0.0)]).unwrap()];
        let h = 1e-6;
        for s in &syms {
            for k in 0..100 {
                // Points on three circles, kept away from the cut t > 1.
                let radius = [0.6, 1.0, 1.3][k % 3];
                let theta = 0.05 + (2.0 * std::f64::consts::PI - 0.1) * k as f64 / 100.0;
                let t = Complex64::from_polar(radius, theta);
                if (t - c(1.0, 0.0)).norm() < 0.05 {
                    continue;
                }
                let d = s.derivative(t).unwrap();
                let fd = (s.evaluate(t + h).unwrap() - s.evaluate(t - h).unwrap()) / (2.0 * h);
                assert!((d - fd).norm() <= 1e-6 * (1.0 + d.norm()), "t = {t}: {d} vs {fd}");
            }
        }
    }

    #[test]
    fn fourier_coefficients_of_model_symbol() {
        let fc = model().fourier_coefficients(2).unwrap();
        assert_eq!(fc.get(-1).unwrap(), c(1.0, 0.0));
        assert!((fc.get(0).unwrap() - c(-0.75, 0.0)).norm() < 1e-16);
        assert!((fc.get(1).unwrap() - c(-3.0 / 32.0, 0.0)).norm() < 1e-16);
        assert!((fc.get(2).unwrap() - c(-5.0 / 128.0, 0.0)).norm() < 1e-16);
        assert_eq!(fc.get(-5).unwrap(), c(0.0, 0.0));
        assert_eq!(fc.get(3), None);
        assert_eq!(fc.j_max(), 2);
    }

    #[test]
    fn fourier_coefficients_reproduce_symbol_inside_disk() {
        // Laurent series converges for 0 < |t| < 1.
        let s = SymbolParams::new(0.3, vec![c(1.0, 0.5), c(-0.4, 0.0), c(0.0, 0.2)]).unwrap();
        let fc = s.fourier_coefficients(400).unwrap();
        let t = c(0.3, 0.25);
        let series: Complex64 = (-1..=400).map(|j| fc.get(j).unwrap() * t.powi(j as i32)).sum();
        assert!((series - s.evaluate(t).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn invert_examples() {
        let s = model();
        let lambda = s.evaluate(c(-1.0, 0.0)).unwrap();
        let t = s.invert(lambda, c(-1.0, 0.01)).unwrap();
        assert!((t - c(-1.0, 0.0)).norm() < 1e-12);

        let lambda = s.evaluate(c(1.05, 0.0)).unwrap();
        assert!((lambda - c(-0.0712071, 0.0712071)).norm() < 1e-7);
        let t = s.invert(lambda, c(1.02, 0.05)).unwrap();
        assert!((t - c(1.05, 0.0)).norm() < 1e-10, "{t}");

        assert!(matches!(s.invert(c(0.0, 0.0), c(1.1, 0.0)), Err(Error::Domain { .. })));
    }

    #[test]
    fn winding_examples() {
        let s = model();
        assert_eq!(s.is_inside_range(c(10.0, 0.0), 4096).unwrap(), 0);
        assert_eq!(s.is_inside_range(c(-0.5, 0.0), 4096).unwrap(), -1);
        let w = s.winding_integral(c(-0.5, 0.0), 4096).unwrap();
        assert!((w - w.round()).abs() <= 0.1);
        assert!(matches!(s.is_inside_range(c(-2f64.powf(0.75), 0.0), 4096), Err(Error::CurveProximity { .. })));
    }

    #[test]
    fn extended_backend_agrees() {
        use crate::scalar::{to_c64, DoubleDouble};
        let s = model();
        let t = c(0.3, -1.2);
        let v64 = s.evaluate(t).unwrap();
        let vdd = to_c64(s.evaluate(from_c64::<DoubleDouble>(t)).unwrap());
        assert!((v64 - vdd).norm() < 1e-15);
        let fc = s.fourier_coefficients_in::<DoubleDouble>(3).unwrap();
        assert_eq!(fc.get(1).unwrap().re, DoubleDouble::from_f64(-3.0 / 32.0));
    }
}
