//! `T_n(a) = (a_{j-k})_{j,k=0}^{n-1}`, built from `a_{-1}, ..., a_{n-1}`. Since `a_j = 0` for `j < -1`, the
//! matrix is lower Hessenberg: only the first superdiagonal (constant
//! `a_{-1}`) is nonzero above the diagonal.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;
use crate::symbol::{FourierCoefficients, SymbolParams};

#[derive(Clone, Debug)]
pub struct ToeplitzOperator<R: Real = f64> {
    coeffs: FourierCoefficients<R>,
    n: usize,
}

impl<R: Real> ToeplitzOperator<R> {
    pub fn new(coeffs: FourierCoefficients<R>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("matrix size must be positive".into()));
        }
        let needed = n as i64 - 1;
        if coeffs.j_max() < needed {
            return Err(Error::InsufficientCoefficients { n, needed, available: coeffs.j_max() });
        }
        Ok(Self { coeffs, n })
    }

    pub fn from_symbol(symbol: &SymbolParams, n: usize) -> Result<Self> {
        let j_max = n as i64 - 1;
        Self::new(symbol.fourier_coefficients_in::<R>(j_max)?, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &FourierCoefficients<R> {
        &self.coeffs
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex<R> {
        self.coeffs.get(row as i64 - col as i64).unwrap_or_else(Complex::zero)
    }

    pub fn build_dense(&self) -> DenseMatrix<R> {
        DenseMatrix::from_fn(self.n, |i, j| self.entry(i, j))
    }

    /// `y_j = sum_k a_{j-k} x_k` using only the Hessenberg band (`k <= j + 1`).
    pub fn matvec(&self, x: &[Complex<R>]) -> Result<Vec<Complex<R>>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        let a = self.coeffs.values();
        Ok((0..self.n)
            .map(|j| {
                let last = (j + 1).min(self.n - 1);
                // a_{j-k} is stored at offset j - k + 1.
                (0..=last).fold(Complex::zero(), |acc, k| acc + a[j + 1 - k] * x[k])
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex64;

    fn op(n: usize) -> ToeplitzOperator {
        ToeplitzOperator::from_symbol(&SymbolParams::model(0.75).unwrap(), n).unwrap()
    }

    #[test]
    fn two_by_two_matrix() {
        let m = op(2).build_dense();
        let expect = [[-0.75, 1.0], [-0.09375, -0.75]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[(i, j)] - Complex64::new(expect[i][j], 0.0)).norm() < 1e-16);
            }
        }
        let one = op(1).build_dense();
        assert_eq!(one[(0, 0)], Complex64::new(-0.75, 0.0));
    }

    #[test]
    fn hessenberg_support_and_superdiagonal() {
        let m = op(12).build_dense();
        for i in 0..12 {
            for j in 0..12 {
                if j > i + 1 {
                    assert_eq!(m[(i, j)], Complex64::zero());
                }
                if j == i + 1 {
                    assert_eq!(m[(i, j)], Complex64::new(1.0, 0.0));
                }
            }
        }
        assert!(m.is_real());
    }

    #[test]
    fn insufficient_coefficients() {
        let s = SymbolParams::model(0.75).unwrap();
        let fc = s.fourier_coefficients(3).unwrap();
        assert!(ToeplitzOperator::new(fc.clone(), 4).is_ok());
        assert!(matches!(
            ToeplitzOperator::new(fc, 6),
            Err(Error::InsufficientCoefficients { needed: 5, available: 3, .. })
        ));
    }

    #[test]
    fn matvec_examples() {
        let t = op(2);
        let e0 = [Complex64::new(1.0, 0.0), Complex64::zero()];
        let e1 = [Complex64::zero(), Complex64::new(1.0, 0.0)];
        let y0 = t.matvec(&e0).unwrap();
        let y1 = t.matvec(&e1).unwrap();
        assert_eq!(y0, vec![Complex64::new(-0.75, 0.0), Complex64::new(-0.09375, 0.0)]);
        assert_eq!(y1, vec![Complex64::new(1.0, 0.0), Complex64::new(-0.75, 0.0)]);
        assert_eq!(t.matvec(&[Complex64::zero(); 2]).unwrap(), vec![Complex64::zero(); 2]);
        assert!(matches!(t.matvec(&e0[..1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn matvec_reproduces_dense_columns() {
        let s = SymbolParams::new(0.3, vec![Complex64::new(1.0, 0.2), Complex64::new(0.5, -0.1)]).unwrap();
        let t: ToeplitzOperator = ToeplitzOperator::from_symbol(&s, 9).unwrap();
        let m = t.build_dense();
        for col in 0..9 {
            let mut e = vec![Complex64::zero(); 9];
            e[col] = Complex64::new(1.0, 0.0);
            let y = t.matvec(&e).unwrap();
            for row in 0..9 {
                assert_eq!(y[row], m[(row, col)]);
            }
        }
    }
}
