//! Small dense linear algebra: a row-major square matrix and an LU solve with
//! partial pivoting. The extrapolation systems are at most a dozen unknowns.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{cabs, Real};

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<R: Real = f64> {
    n: usize,
    data: Vec<Complex<R>>,
}

impl<R: Real> DenseMatrix<R> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::zero(); n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<R>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex<R>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// True when every entry has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == R::zero())
    }

    pub fn mul_vec(&self, x: &[Complex<R>]) -> Result<Vec<Complex<R>>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok((0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Complex::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect())
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> R {
        self.data
            .iter()
            .fold(R::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
            .sqrt()
    }
}

impl<R: Real> Index<(usize, usize)> for DenseMatrix<R> {
    type Output = Complex<R>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        &self.data[i * self.n + j]
    }
}

impl<R: Real> IndexMut<(usize, usize)> for DenseMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        &mut self.data[i * self.n + j]
    }
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
pub fn lu_solve<R: Real>(a: &DenseMatrix<R>, b: &[Complex<R>]) -> Result<Vec<Complex<R>>> {
    let n = a.n();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = m.data.iter().fold(R::zero(), |acc, z| acc.max(cabs(*z)));
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, cabs(m[(r, col)])))
            .fold((col, R::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot == R::zero() || pivot <= scale * R::epsilon() * R::from_usize(n) {
            return Err(Error::SingularSystem { size: n, pivot: pivot.to_f64() });
        }
        if pivot_row != col {
            for k in 0..n {
                m.data.swap(col * n + k, pivot_row * n + k);
            }
            x.swap(col, pivot_row);
        }
        let p = m[(col, col)];
        for r in col + 1..n {
            let factor = m[(r, col)] / p;
            if factor.is_zero() {
                continue;
            }
            for k in col..n {
                let v = m[(col, k)];
                m[(r, k)] -= factor * v;
            }
            let xc = x[col];
            x[r] -= factor * xc;
        }
    }
    for col in (0..n).rev() {
        let mut acc = x[col];
        for k in col + 1..n {
            acc -= m[(col, k)] * x[k];
        }
        x[col] = acc / m[(col, col)];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex64;

    #[test]
    fn solves_permuted_system() {
        let a = DenseMatrix::from_fn(3, |i, j| {
            let v = [[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]][i][j];
            Complex64::new(v, 0.0)
        });
        let x_true = [Complex64::new(1.0, 1.0), Complex64::new(-2.0, 0.5), Complex64::new(0.25, 0.0)];
        let b = a.mul_vec(&x_true).unwrap();
        let x = lu_solve(&a, &b).unwrap();
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).norm() < 1e-14);
        }
    }

    #[test]
    fn singular_system_is_reported() {
        let a = DenseMatrix::from_fn(2, |_, j| Complex64::new(j as f64 + 1.0, 0.0));
        let b = [Complex64::new(1.0, 0.0); 2];
        assert!(matches!(lu_solve(&a, &b), Err(Error::SingularSystem { .. })));
    }
}
