//! Inner eigenvalues.
//!
//! For fixed `k`, `lambda_j(T_n) = a(t_{j,n})` with
//!
//! ```text
//! t_{j,n} = omega_n^j n^{(alpha+1)/n} (1 + sum_{s<k} c_s(omega_n^j) xi_s(n) + O(xi_k(n)))
//! ```
//!
//! where `xi_1, xi_2, ...` run through `log^l(n) / n^{alpha r + m}` ordered by
//! decay. The coefficients `c_s` are estimated on the grid
//! `sigma_{j1} = omega_{n1}^{j1}` from dense spectra at `n1, 2 n1, ...`
//! (since `omega_{l n1}^{l j1} = sigma_{j1}`) and interpolated in between.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::eigensolver::Spectrum;
use crate::error::{Error, Result};
use crate::linalg::{lu_solve, DenseMatrix};
use crate::scalar::{cln, root_of_unity, to_c64, Complex64, Real};
use crate::symbol::SymbolParams;

/// One asymptotic basis function `log^ell(n) / n^exponent`, `exponent = alpha r + m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisTerm {
    pub r: u32,
    pub m: u32,
    pub ell: u32,
    pub exponent: f64,
}

impl BasisTerm {
    pub fn eval(&self, n: usize) -> f64 {
        xi_eval(self, n)
    }

    /// Same as [`eval`](Self::eval) in the scalar type `R`.
    pub fn eval_in<R: Real>(&self, alpha: f64, n: usize) -> R {
        let n = R::from_usize(n);
        let exponent = R::from_f64(alpha) * R::from_f64(self.r as f64) + R::from_f64(self.m as f64);
        let mut v = R::one() / n.powf(exponent);
        let log_n = n.ln();
        for _ in 0..self.ell {
            v *= log_n;
        }
        v
    }
}

/// `log(n)^ell / n^exponent`, natural log.
pub fn xi_eval(term: &BasisTerm, n: usize) -> f64 {
    let n = n as f64;
    n.ln().powi(term.ell as i32) / n.powf(term.exponent)
}

/// The first `count` basis terms, slowest decay first.
///
/// Sorted by exponent, then by descending log power. Terms that coincide as
/// functions of `n` (same exponent and log power, which happens for rational
/// `alpha`) appear once, with the smallest `r`.
pub fn basis_ordering(alpha: f64, count: usize) -> Vec<BasisTerm> {
    if count == 0 {
        return Vec::new();
    }
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.max(b);
    // Every term with exponent <= bound is enumerated, so the prefix below
    // the bound is complete; grow the bound until it holds `count` terms.
    let mut bound = 1.0f64;
    loop {
        let mut terms = Vec::new();
        let r_max = (bound / alpha).floor() as u32;
        for r in 0..=r_max {
            for m in 1..=bound.floor() as u32 {
                let exponent = alpha * r as f64 + m as f64;
                if exponent > bound * (1.0 + 1e-12) {
                    continue;
                }
                for ell in 0..m {
                    terms.push(BasisTerm { r, m, ell, exponent });
                }
            }
        }
        terms.sort_by(|a, b| {
            a.exponent
                .total_cmp(&b.exponent)
                .then(b.ell.cmp(&a.ell))
                .then(a.r.cmp(&b.r))
        });
        let mut unique: Vec<BasisTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if !unique.iter().any(|u| u.ell == t.ell && same(u.exponent, t.exponent)) {
                unique.push(t);
            }
        }
        if unique.len() >= count {
            unique.truncate(count);
            return unique;
        }
        bound += 1.0;
    }
}

/// Extrapolated inner coefficients on the grid `sigma_{j1} = omega_{n1}^{j1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub alpha: f64,
    pub n1: usize,
    /// Number of levels; the table holds `k - 1` coefficients per node.
    pub k: usize,
    pub basis: Vec<BasisTerm>,
    /// `grid_values[s - 1][j1 - 1] = c_s(sigma_{j1})`.
    pub grid_values: Vec<Vec<Complex64>>,
}

impl CoefficientTable {
    pub fn check_complete(&self) -> Result<()> {
        if self.k == 0 || self.n1 == 0 {
            return Err(Error::IncompleteTable("no levels".into()));
        }
        if self.basis.len() != self.k - 1 || self.grid_values.len() != self.k - 1 {
            return Err(Error::IncompleteTable(format!(
                "{} levels need {} coefficient rows, found {} (basis {})",
                self.k,
                self.k - 1,
                self.grid_values.len(),
                self.basis.len()
            )));
        }
        for (s, row) in self.grid_values.iter().enumerate() {
            if row.len() != self.n1 {
                return Err(Error::IncompleteTable(format!("row {} has {} of {} nodes", s + 1, row.len(), self.n1)));
            }
            if let Some(j) = row.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::IncompleteTable(format!("c_{}(sigma_{}) is not finite", s + 1, j + 1)));
            }
        }
        Ok(())
    }

    /// The table restricted to its first `k` levels.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.k {
            return Err(Error::InvalidParameter(format!("cannot truncate a {}-level table to {k}", self.k)));
        }
        Ok(Self {
            alpha: self.alpha,
            n1: self.n1,
            k,
            basis: self.basis[..k - 1].to_vec(),
            grid_values: self.grid_values[..k - 1].to_vec(),
        })
    }

    /// `c_s(sigma_{j1})`, 1-based.
    pub fn get(&self, s: usize, j1: usize) -> Complex64 {
        self.grid_values[s - 1][j1 - 1]
    }
}

/// Solve the extrapolation system for one grid node from the preimages
/// `t[l - 1] = t_{l j1, l n1}`, `l = 1..=basis.len()`.
pub fn solve_inner_system<R: Real>(
    alpha: f64,
    basis: &[BasisTerm],
    n1: usize,
    j1: usize,
    t: &[Complex<R>],
) -> Result<Vec<Complex<R>>> {
    let dim = basis.len();
    if t.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: t.len() });
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    let sigma_inv = root_of_unity::<R>(n1, j1 as i64).conj();
    let exponent = R::from_f64(alpha) + R::one();
    let matrix = DenseMatrix::from_fn(dim, |l, s| Complex::new(basis[s].eval_in::<R>(alpha, (l + 1) * n1), R::zero()));
    let rhs: Vec<Complex<R>> = (0..dim)
        .map(|l| {
            let n_l = R::from_usize((l + 1) * n1);
            let radial = (-(exponent / n_l) * n_l.ln()).exp();
            sigma_inv * t[l] * radial - Complex::one()
        })
        .collect();
    lu_solve(&matrix, &rhs)
}

/// Extrapolated `c_1, ..., c_{k-1}` at `sigma_{j1}` from the spectra at
/// `n1, 2 n1, ..., (k - 1) n1`.
pub fn extrapolate_inner<R: Real>(
    symbol: &SymbolParams,
    spectra: &[Spectrum<R>],
    j1: usize,
    k: usize,
) -> Result<Vec<Complex<R>>> {
    let levels = k.saturating_sub(1);
    if spectra.len() < levels {
        return Err(Error::InvalidParameter(format!("{k} levels need {levels} spectra, got {}", spectra.len())));
    }
    if levels == 0 {
        return Ok(Vec::new());
    }
    let n1 = spectra[0].n();
    if j1 == 0 || j1 > n1 {
        return Err(Error::InvalidParameter(format!("grid index {j1} outside 1..={n1}")));
    }
    let alpha = symbol.alpha();
    let exponent = R::from_f64(alpha) + R::one();
    let mut t = Vec::with_capacity(levels);
    for (l, spectrum) in spectra[..levels].iter().enumerate() {
        let (n_l, j_l) = ((l + 1) * n1, (l + 1) * j1);
        if spectrum.n() != n_l {
            return Err(Error::DimensionMismatch { expected: n_l, found: spectrum.n() });
        }
        // Seed on the circle of radius n^{(alpha+1)/n}: at sigma = 1 the
        // grid point itself is the branch point.
        let radius = (exponent / R::from_usize(n_l) * R::from_usize(n_l).ln()).exp();
        let seed = root_of_unity::<R>(n_l, j_l as i64) * radius;
        let tl = symbol.invert(spectrum.get(j_l), seed).map_err(|e| e.at(n_l, j_l))?;
        t.push(tl);
    }
    solve_inner_system(alpha, &basis_ordering(alpha, levels), n1, j1, &t)
}

/// Build the full coefficient table from the spectra at `n1, ..., (k-1) n1`.
/// Grid nodes are solved in parallel.
pub fn build_inner_table<R: Real>(symbol: &SymbolParams, spectra: &[Spectrum<R>], k: usize) -> Result<CoefficientTable> {
    use rayon::prelude::*;
    if k < 2 {
        return Err(Error::InvalidParameter("an inner table needs k >= 2".into()));
    }
    if spectra.is_empty() {
        return Err(Error::InvalidParameter("no spectra".into()));
    }
    let n1 = spectra[0].n();
    let columns: Vec<Vec<Complex<R>>> = (1..=n1)
        .into_par_iter()
        .map(|j1| extrapolate_inner(symbol, spectra, j1, k))
        .collect::<Result<_>>()?;
    let grid_values = (0..k - 1)
        .map(|s| columns.iter().map(|c| to_c64(c[s])).collect())
        .collect();
    Ok(CoefficientTable { alpha: symbol.alpha(), n1, k, basis: basis_ordering(symbol.alpha(), k - 1), grid_values })
}

/// `c = Gamma(alpha + 1) sin(alpha pi) f(1) / pi`.
pub fn leading_constant(symbol: &SymbolParams) -> Complex64 {
    let alpha = symbol.alpha();
    let g = libm::tgamma(alpha + 1.0) * (alpha * std::f64::consts::PI).sin() / std::f64::consts::PI;
    symbol.f_at(Complex64::new(1.0, 0.0)) * g
}

/// `p_{0,1,0}(z) = log(a(z)^2 / (c a'(z) z^2))`, principal log. The leading
/// coefficient `c_1` approaches this function.
pub fn exact_first_coefficient(symbol: &SymbolParams, z: Complex64) -> Result<Complex64> {
    if z.is_zero() || z == Complex64::one() {
        return Err(Error::domain("exact_first_coefficient", "z must avoid 0 and 1"));
    }
    let a = symbol.evaluate(z)?;
    let da = symbol.derivative(z)?;
    let denom = leading_constant(symbol) * da * z * z;
    if denom.norm() == 0.0 {
        return Err(Error::DivisionByZero(denom.norm()));
    }
    Ok(cln(a * a / denom))
}

/// Relative deviation of an estimate of `c_1` from `p_{0,1,0}`, allowing for
/// the principal log jumping by `2 pi i`: the curve `a^2 / (c a' z^2)`
/// crosses the negative axis while `z` runs around the circle, and `c_1` is
/// continuous there.
pub fn first_coefficient_deviation(estimate: Complex64, exact: Complex64) -> f64 {
    let tau = Complex64::new(0.0, std::f64::consts::TAU);
    [-1.0, 0.0, 1.0]
        .iter()
        .map(|&k| {
            let p = exact + tau * k;
            (estimate - p).norm() / p.norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Angular distance on the circle.
fn circle_distance(a: f64, b: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

/// Lagrange interpolation of `c_s` at `omega` through the `k - s + 8` grid
/// nodes nearest to it, `k` the number of levels of `table`.
pub fn interpolate_coefficient(table: &CoefficientTable, s: usize, omega: Complex64) -> Result<Complex64> {
    check_row(table, s)?;
    let count = (table.k - s + 8).min(table.n1);
    Ok(select_nodes(table.n1, omega, count).interpolate(&table.grid_values[s - 1], omega, count))
}

fn check_row(table: &CoefficientTable, s: usize) -> Result<()> {
    if s == 0 || s >= table.k || table.grid_values.len() < s {
        return Err(Error::IncompleteTable(format!("no coefficient c_{s} in a {}-level table", table.k)));
    }
    let row = table.grid_values[s - 1].len();
    if row != table.n1 {
        return Err(Error::IncompleteTable(format!("row {s} has {row} of {} nodes", table.n1)));
    }
    Ok(())
}

enum Nodes {
    /// `omega` coincides with grid node `j1`.
    Hit(usize),
    /// Nearest nodes first, ties to the smaller index.
    Nearest(Vec<(usize, Complex64)>),
}

impl Nodes {
    fn interpolate(&self, values: &[Complex64], omega: Complex64, count: usize) -> Complex64 {
        let nodes = match self {
            Nodes::Hit(j1) => return values[j1 - 1],
            Nodes::Nearest(all) => &all[..count.min(all.len())],
        };
        let mut acc = Complex64::zero();
        for (i, &(j, xi)) in nodes.iter().enumerate() {
            let (mut num, mut den) = (Complex64::one(), Complex64::one());
            for (m, &(_, x)) in nodes.iter().enumerate() {
                if m != i {
                    num *= omega - x;
                    den *= xi - x;
                }
            }
            acc += values[j - 1] * num / den;
        }
        acc
    }
}

/// Up to `count` grid nodes nearest to `omega`. Node `j1` sits at angle
/// `2 pi j1 / n1`, clockwise.
fn select_nodes(n1: usize, omega: Complex64, count: usize) -> Nodes {
    use std::f64::consts::TAU;
    let theta = (-omega.im.atan2(omega.re)).rem_euclid(TAU);
    let step = TAU / n1 as f64;
    let nearest = (theta / step).round() as i64;
    let node_angle = |j1: usize| step * j1 as f64;
    let wrap = |j: i64| (j - 1).rem_euclid(n1 as i64) as usize + 1;
    if circle_distance(step * nearest as f64, theta) < 1e-12 {
        return Nodes::Hit(wrap(nearest));
    }
    let half = count as i64 + 1;
    let mut candidates: Vec<(f64, usize)> = (nearest - half..=nearest + half)
        .map(wrap)
        .map(|j| (circle_distance(node_angle(j), theta), j))
        .collect();
    candidates.sort_unstable_by_key(|c| c.1);
    candidates.dedup_by_key(|c| c.1);
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    candidates.truncate(count);
    Nodes::Nearest(
        candidates
            .into_iter()
            .map(|(_, j)| (j, Complex64::from_polar(1.0, -node_angle(j))))
            .collect(),
    )
}

/// `a(omega_n^j n^{(alpha+1)/n} (1 + sum_{s<k} c_s(omega_n^j) xi_s(n)))`.
///
/// For real symbols the indices above `ceil(n/2)` reuse the conjugate of the
/// approximation at `n + 1 - j`, which makes the output conjugate-symmetric.
pub fn approx_inner_eigenvalue(
    symbol: &SymbolParams,
    table: &CoefficientTable,
    n: usize,
    j: usize,
    k: usize,
) -> Result<Complex64> {
    if n < 2 || j == 0 || j > n {
        return Err(Error::InvalidParameter(format!("index {j} outside 1..={n} (n >= 2)")));
    }
    if k == 0 || k > table.k {
        return Err(Error::InvalidParameter(format!("k = {k} but the table has {} levels", table.k)));
    }
    if symbol.is_real() && j > n.div_ceil(2) {
        return approx_inner_eigenvalue(symbol, table, n, n + 1 - j, k).map(|z| z.conj());
    }
    if symbol.is_real() && n % 2 == 1 && 2 * j == n + 1 {
        // Self-conjugate middle index: the eigenvalue is real.
        return Ok(Complex64::new(inner_raw(symbol, table, n, j, k)?.re, 0.0));
    }
    inner_raw(symbol, table, n, j, k)
}

fn inner_raw(symbol: &SymbolParams, table: &CoefficientTable, n: usize, j: usize, k: usize) -> Result<Complex64> {
    let omega: Complex64 = root_of_unity(n, j as i64);
    // Only the first k - 1 coefficients are used, with k - s + 8 nodes each;
    // the node sets are nested, so one selection serves every s.
    let nodes = select_nodes(table.n1, omega, (k + 7).min(table.n1));
    let mut correction = Complex64::one();
    for s in 1..k {
        check_row(table, s)?;
        let value = nodes.interpolate(&table.grid_values[s - 1], omega, (k - s + 8).min(table.n1));
        correction += value * table.basis[s - 1].eval(n);
    }
    let nf = n as f64;
    let radial = nf.powf((symbol.alpha() + 1.0) / nf);
    symbol.evaluate(omega * radial * correction)
}
