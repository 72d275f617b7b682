//! Extreme eigenvalues: the `j`-th eigenvalue from either end of the
//! spectrum behaves like
//!
//! ```text
//! lambda_j(T_n) = sum_{m=1}^{k} q_m(j) / (n + 1)^{alpha + m - 1} + E_{k,j,n}
//! ```
//!
//! and the `q_m(j)` are fitted per index from `k` dense spectra.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::eigensolver::Spectrum;
use crate::error::{Error, Result};
use crate::scalar::{to_c64, Complex64, Real};

/// Fitted power-law coefficients for the first `j0` indices at each end.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremeTable {
    pub alpha: f64,
    pub j0: usize,
    pub k: usize,
    pub sizes: Vec<usize>,
    /// `low[j - 1][m - 1] = q_m(j)` for `lambda_j`.
    pub low: Vec<Vec<Complex64>>,
    /// Same for `lambda_{n + 1 - j}`. `None` for real symbols, whose high end
    /// is the conjugate of the low end.
    pub high: Option<Vec<Vec<Complex64>>>,
}

/// Which end of the spectrum an index is counted from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Low,
    High,
}

/// Solve `sum_m q_m h_l^{alpha + m - 1} = values[l]`, `h_l = 1 / (sizes[l] + 1)`.
///
/// Dividing row `l` by `h_l^alpha` leaves a Vandermonde system in `h_l`,
/// solved with the Bjorck-Pereyra recurrences on the nodes `h_l / h_1`.
pub fn solve_power_law<R: Real>(sizes: &[usize], values: &[Complex<R>], alpha: f64) -> Result<Vec<Complex<R>>> {
    let k = sizes.len();
    if values.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: values.len() });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut sorted = sizes.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::SingularSystem { size: k, pivot: 0.0 });
    }
    let alpha = R::from_f64(alpha);
    let h: Vec<R> = sizes.iter().map(|&n| R::one() / R::from_usize(n + 1)).collect();
    let h1 = h[0];
    let x: Vec<R> = h.iter().map(|&hl| hl / h1).collect();
    let mut c: Vec<Complex<R>> = values
        .iter()
        .zip(&h)
        .map(|(v, &hl)| *v / (alpha * hl.ln()).exp())
        .collect();
    // Newton divided differences, then conversion to monomial coefficients.
    for level in 0..k - 1 {
        for i in (level + 1..k).rev() {
            c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - level - 1]);
        }
    }
    for level in (0..k - 1).rev() {
        for i in level..k - 1 {
            let next = c[i + 1];
            c[i] -= next * x[level];
        }
    }
    let mut scale = R::one();
    for qm in c.iter_mut() {
        *qm /= scale;
        scale *= h1;
    }
    Ok(c)
}

/// `q_1(j), ..., q_k(j)` from the first `k` spectra, `j` counted from the low end.
pub fn extrapolate_extreme<R: Real>(spectra: &[Spectrum<R>], j: usize, alpha: f64, k: usize) -> Result<Vec<Complex<R>>> {
    extrapolate_extreme_at(spectra, j, End::Low, alpha, k)
}

/// As [`extrapolate_extreme`], counting `j` from either end.
pub fn extrapolate_extreme_at<R: Real>(
    spectra: &[Spectrum<R>],
    j: usize,
    end: End,
    alpha: f64,
    k: usize,
) -> Result<Vec<Complex<R>>> {
    if spectra.len() < k {
        return Err(Error::InvalidParameter(format!("{k} levels need {k} spectra, got {}", spectra.len())));
    }
    let spectra = &spectra[..k];
    let sizes: Vec<usize> = spectra.iter().map(Spectrum::n).collect();
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(format!("extreme sizes must increase strictly: {sizes:?}")));
    }
    let values: Vec<Complex<R>> = spectra
        .iter()
        .map(|s| {
            if j == 0 || j > s.n() {
                return Err(Error::InvalidParameter(format!("index {j} outside 1..={}", s.n())));
            }
            Ok(match end {
                End::Low => s.get(j),
                End::High => s.get(s.n() + 1 - j),
            })
        })
        .collect::<Result<_>>()?;
    solve_power_law(&sizes, &values, alpha)
}

/// Fit `q` for `j = 1..=j0` at both ends (only the low end when `real`).
/// Indices are solved in parallel.
pub fn build_extreme_table<R: Real>(spectra: &[Spectrum<R>], alpha: f64, j0: usize, real: bool) -> Result<ExtremeTable> {
    use rayon::prelude::*;
    let k = spectra.len();
    if k == 0 {
        return Err(Error::InvalidParameter("an extreme table needs at least one size".into()));
    }
    if j0 == 0 || j0 > spectra[0].n() {
        return Err(Error::InvalidParameter(format!("j0 = {j0} outside 1..={}", spectra[0].n())));
    }
    let fit = |end: End| -> Result<Vec<Vec<Complex64>>> {
        (1..=j0)
            .into_par_iter()
            .map(|j| {
                extrapolate_extreme_at(spectra, j, end, alpha, k)
                    .map(|q| q.into_iter().map(to_c64).collect())
                    .map_err(|e| e.at(spectra[0].n(), j))
            })
            .collect()
    };
    Ok(ExtremeTable {
        alpha,
        j0,
        k,
        sizes: spectra.iter().map(Spectrum::n).collect(),
        low: fit(End::Low)?,
        high: if real { None } else { Some(fit(End::High)?) },
    })
}

impl ExtremeTable {
    pub fn check_complete(&self) -> Result<()> {
        let rows_ok = |rows: &Vec<Vec<Complex64>>| rows.len() == self.j0 && rows.iter().all(|q| q.len() == self.k);
        if self.sizes.len() != self.k || !rows_ok(&self.low) || !self.high.as_ref().is_none_or(rows_ok) {
            return Err(Error::IncompleteTable(format!("extreme table is not {} x {}", self.j0, self.k)));
        }
        Ok(())
    }

    /// Coefficients for index `j` of an `n`-sized spectrum, with the end it
    /// is counted from and whether they must be conjugated.
    fn coefficients(&self, n: usize, j: usize) -> Result<(&[Complex64], bool)> {
        let untracked = Error::UntrackedIndex { j, n, window: self.j0 };
        if j == 0 || j > n {
            return Err(untracked);
        }
        if j <= self.j0 && j <= n / 2 {
            return Ok((&self.low[j - 1], false));
        }
        let from_top = n + 1 - j;
        if from_top <= self.j0 {
            return Ok(match &self.high {
                Some(high) => (&high[from_top - 1], false),
                None => (&self.low[from_top - 1], true),
            });
        }
        if j <= self.j0 {
            return Ok((&self.low[j - 1], false));
        }
        Err(untracked)
    }
}

/// `sum_{m<=k} q_m(j) / (n + 1)^{alpha + m - 1}`.
pub fn approx_extreme_eigenvalue(table: &ExtremeTable, n: usize, j: usize, k: usize) -> Result<Complex64> {
    if k == 0 || k > table.k {
        return Err(Error::InvalidParameter(format!("k = {k} but the table has {} levels", table.k)));
    }
    let (q, conjugate) = table.coefficients(n, j)?;
    let h = 1.0 / (n as f64 + 1.0);
    let mut power = h.powf(table.alpha);
    let mut sum = Complex64::zero();
    for qm in &q[..k] {
        sum += qm * power;
        power *= h;
    }
    Ok(if conjugate { sum.conj() } else { sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::toeplitz_spectrum;
    use crate::symbol::SymbolParams;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn synthetic(q: &[Complex64], sizes: &[usize], alpha: f64) -> Vec<Complex64> {
        sizes
            .iter()
            .map(|&n| {
                let h = 1.0 / (n as f64 + 1.0);
                q.iter().enumerate().map(|(m, qm)| qm * h.powf(alpha + m as f64)).sum()
            })
            .collect()
    }

    #[test]
    fn recovers_two_term_power_law() {
        let q = [c(1.0, 1.0), c(-2.0, 0.0)];
        let got = solve_power_law(&[100, 200], &synthetic(&q, &[100, 200], 0.75), 0.75).unwrap();
        for (g, w) in got.iter().zip(&q) {
            assert!((g - w).norm() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn recovers_five_term_power_law_in_extended_precision() {
        use crate::scalar::DoubleDouble;
        let dd = |re: f64, im: f64| Complex::new(DoubleDouble::from_f64(re), DoubleDouble::from_f64(im));
        let q = [dd(0.8, -0.3), dd(2.0, 1.0), dd(-5.0, 0.5), dd(3.0, 0.0), dd(0.0, -7.0)];
        let sizes = [100, 200, 300, 400, 500];
        let alpha = DoubleDouble::from_f64(0.75);
        let values: Vec<Complex<DoubleDouble>> = sizes
            .iter()
            .map(|&n| {
                let h = DoubleDouble::from_f64(1.0) / DoubleDouble::from_f64(n as f64 + 1.0);
                let mut power = h.powf(alpha);
                let mut sum = Complex::zero();
                for qm in &q {
                    sum += *qm * power;
                    power *= h;
                }
                sum
            })
            .collect();
        let got = solve_power_law(&sizes, &values, 0.75).unwrap();
        for (g, w) in got.iter().zip(&q) {
            assert!((to_c64(*g) - to_c64(*w)).norm() < 1e-10);
        }
    }

    #[test]
    fn three_terms_in_hardware_precision() {
        let q = [c(1.0, 1.0), c(-2.0, 0.0), c(0.5, 0.25)];
        let sizes = [100, 200, 300];
        let got = solve_power_law(&sizes, &synthetic(&q, &sizes, 0.75), 0.75).unwrap();
        for (g, w) in got.iter().zip(&q) {
            assert!((g - w).norm() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn one_level_is_a_rescaling() {
        let lambda = c(0.01, 0.02);
        let q = solve_power_law(&[100], &[lambda], 0.75).unwrap();
        assert!((q[0] - lambda * 101f64.powf(0.75)).norm() < 1e-14);
        assert!(solve_power_law(&[100, 100], &[lambda, lambda], 0.75).is_err());
    }

    #[test]
    fn approximation_and_mirror() {
        let table = ExtremeTable {
            alpha: 0.75,
            j0: 2,
            k: 2,
            sizes: vec![100, 200],
            low: vec![vec![c(1.0, 1.0), c(-2.0, 0.0)], vec![c(2.0, 1.0), c(0.0, 0.0)]],
            high: None,
        };
        table.check_complete().unwrap();
        let n = 500;
        let h = 1.0 / 501.0;
        let one = approx_extreme_eigenvalue(&table, n, 1, 1).unwrap();
        assert!((one - c(1.0, 1.0) * h.powf(0.75)).norm() < 1e-16);
        let low = approx_extreme_eigenvalue(&table, n, 2, 2).unwrap();
        let high = approx_extreme_eigenvalue(&table, n, n - 1, 2).unwrap();
        assert_eq!(high, low.conj());
        assert!(matches!(approx_extreme_eigenvalue(&table, n, 3, 2), Err(Error::UntrackedIndex { .. })));
    }

    #[test]
    fn leading_coefficient_is_stable_across_windows() {
        let s = SymbolParams::model(0.75).unwrap();
        let spectra: Vec<Spectrum> = (1..=6).map(|l| toeplitz_spectrum(&s, 100 * l).unwrap()).collect();
        let first = extrapolate_extreme(&spectra[..3], 1, 0.75, 3).unwrap()[0];
        let last = extrapolate_extreme(&spectra[3..], 1, 0.75, 3).unwrap()[0];
        assert!((first - last).norm() <= 0.05 * last.norm(), "{first} vs {last}");
    }
}
