//! Dense eigenvalues of Hessenberg matrices and the canonical ordering of the
//! spectrum of `T_n(a)`.
//!
//! `T_n(a)` is lower Hessenberg, so it is transposed to upper Hessenberg form
//! (the spectrum is unchanged) and fed straight into shifted QR: Francis
//! double-shift steps in real arithmetic for real matrices, single-shift
//! complex QR with Wilkinson shifts otherwise. A diagonal balancing
//! similarity is applied first; it preserves the Hessenberg pattern.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::{cabs, to_c64, Complex64, Real};
use crate::symbol::SymbolParams;

const SWEEPS_PER_UNIT: usize = 100;
const EXCEPTIONAL_SHIFT_PERIOD: usize = 10;

fn is_upper_hessenberg<R: Real>(m: &DenseMatrix<R>) -> bool {
    let n = m.n();
    (0..n).all(|i| (0..i.saturating_sub(1)).all(|j| m[(i, j)].is_zero()))
}

/// All eigenvalues of a Hessenberg matrix, in no particular order.
///
/// Lower Hessenberg input is transposed internally; upper Hessenberg input is
/// used as is. Anything else is rejected: no Hessenberg reduction is done.
pub fn eigenvalues<R: Real>(matrix: &DenseMatrix<R>) -> Result<Vec<Complex<R>>> {
    let n = matrix.n();
    if n == 0 {
        return Ok(Vec::new());
    }
    let upper = if is_upper_hessenberg(matrix) {
        matrix.clone()
    } else {
        let t = matrix.transpose();
        if !is_upper_hessenberg(&t) {
            return Err(Error::InvalidParameter("matrix is not Hessenberg".into()));
        }
        t
    };
    if upper.is_real() {
        let mut h: Vec<R> = (0..n * n).map(|k| upper[(k / n, k % n)].re).collect();
        balance(&mut h, n, |x: R| x.abs());
        real_hessenberg_qr(&mut h, n)
    } else {
        let mut h: Vec<Complex<R>> = (0..n * n).map(|k| upper[(k / n, k % n)]).collect();
        balance(&mut h, n, |z: Complex<R>| z.re.abs() + z.im.abs());
        complex_hessenberg_qr(&mut h, n)
    }
}

/// Diagonal similarity scaling by powers of two until row and column norms
/// are comparable. Works for any entry type with a magnitude.
fn balance<T, R>(h: &mut [T], n: usize, mag: impl Fn(T) -> R)
where
    T: Copy + std::ops::MulAssign<R> + std::ops::DivAssign<R>,
    R: Real,
{
    let radix = R::from_f64(2.0);
    let radix2 = radix * radix;
    let gamma = R::from_f64(0.95);
    let mut done = false;
    let mut rounds = 0;
    while !done && rounds < 100 {
        done = true;
        rounds += 1;
        for i in 0..n {
            let mut r = R::zero();
            let mut c = R::zero();
            for j in 0..n {
                if j != i {
                    c += mag(h[j * n + i]);
                    r += mag(h[i * n + j]);
                }
            }
            if c == R::zero() || r == R::zero() {
                continue;
            }
            let s = c + r;
            let mut g = r / radix;
            let mut f = R::one();
            while c < g {
                f *= radix;
                c *= radix2;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix2;
            }
            if (c + r) / f < gamma * s {
                done = false;
                let g = R::one() / f;
                for j in 0..n {
                    h[i * n + j] *= g;
                }
                for j in 0..n {
                    h[j * n + i] *= f;
                }
            }
        }
    }
}

fn negligible<R: Real>(sub: R, neighbours: R) -> bool {
    sub <= R::epsilon() * neighbours
}

/// Eigenvalues of a real upper Hessenberg matrix (row-major, overwritten) by
/// Francis double-shift QR restricted to the active window.
fn real_hessenberg_qr<R: Real>(a: &mut [R], n: usize) -> Result<Vec<Complex<R>>> {
    let idx = |i: usize, j: usize| i * n + j;
    let half = R::from_f64(0.5);
    let mut anorm = R::zero();
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[idx(i, j)].abs();
        }
    }
    let mut wr = vec![R::zero(); n];
    let mut wi = vec![R::zero(); n];
    let max_sweeps = SWEEPS_PER_UNIT * n;
    let mut total_sweeps = 0usize;
    let mut nn = n as isize - 1;
    let mut shift_acc = R::zero();
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let nnu = nn as usize;
            // Look for a single small subdiagonal element.
            let mut l = nnu;
            while l >= 1 {
                let mut s = a[idx(l - 1, l - 1)].abs() + a[idx(l, l)].abs();
                if s == R::zero() {
                    s = anorm;
                }
                if negligible(a[idx(l, l - 1)].abs(), s) {
                    a[idx(l, l - 1)] = R::zero();
                    break;
                }
                l -= 1;
            }
            let x = a[idx(nnu, nnu)];
            if l == nnu {
                wr[nnu] = x + shift_acc;
                wi[nnu] = R::zero();
                nn -= 1;
                break;
            }
            let y = a[idx(nnu - 1, nnu - 1)];
            let w = a[idx(nnu, nnu - 1)] * a[idx(nnu - 1, nnu)];
            if l == nnu - 1 {
                // Trailing 2x2 block.
                let p = half * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x = x + shift_acc;
                if q >= R::zero() {
                    let z = if p >= R::zero() { p + z } else { p - z };
                    wr[nnu - 1] = x + z;
                    wr[nnu] = if z != R::zero() { x - w / z } else { x + z };
                    wi[nnu - 1] = R::zero();
                    wi[nnu] = R::zero();
                } else {
                    wr[nnu - 1] = x + p;
                    wr[nnu] = x + p;
                    wi[nnu - 1] = -z;
                    wi[nnu] = z;
                }
                nn -= 2;
                break;
            }
            if total_sweeps >= max_sweeps {
                return Err(Error::EigenNoConvergence { n, index: nnu + 1, sweeps: total_sweeps });
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its > 0 && its.is_multiple_of(EXCEPTIONAL_SHIFT_PERIOD) {
                shift_acc += x;
                for i in 0..=nnu {
                    a[idx(i, i)] -= x;
                }
                let s = a[idx(nnu, nnu - 1)].abs() + a[idx(nnu - 1, nnu - 2)].abs();
                x = R::from_f64(0.75) * s;
                y = x;
                w = R::from_f64(-0.4375) * s * s;
            }
            its += 1;
            total_sweeps += 1;
            // Find two consecutive small subdiagonal elements.
            let mut m = nnu - 2;
            let (mut p, mut q, mut r);
            loop {
                let z = a[idx(m, m)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[idx(m + 1, m)] + a[idx(m, m + 1)];
                q = a[idx(m + 1, m + 1)] - z - rr - ss;
                r = a[idx(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[idx(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[idx(m - 1, m - 1)].abs() + z.abs() + a[idx(m + 1, m + 1)].abs());
                if negligible(u, v) {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nnu {
                a[idx(i, i - 2)] = R::zero();
                if i != m + 2 {
                    a[idx(i, i - 3)] = R::zero();
                }
            }
            // Double-shift QR step on rows l..=nn and columns m..=nn.
            let mut k = m;
            while k < nnu {
                let mut xk = R::zero();
                if k != m {
                    p = a[idx(k, k - 1)];
                    q = a[idx(k + 1, k - 1)];
                    r = if k != nnu - 1 { a[idx(k + 2, k - 1)] } else { R::zero() };
                    xk = p.abs() + q.abs() + r.abs();
                    if xk != R::zero() {
                        p /= xk;
                        q /= xk;
                        r /= xk;
                    }
                }
                let norm = (p * p + q * q + r * r).sqrt();
                let s = if p >= R::zero() { norm } else { -norm };
                if s != R::zero() {
                    if k == m {
                        if l != m {
                            a[idx(k, k - 1)] = -a[idx(k, k - 1)];
                        }
                    } else {
                        a[idx(k, k - 1)] = -s * xk;
                    }
                    p += s;
                    let xr = p / s;
                    let yr = q / s;
                    let zr = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nnu {
                        let mut pp = a[idx(k, j)] + q * a[idx(k + 1, j)];
                        if k != nnu - 1 {
                            pp += r * a[idx(k + 2, j)];
                            a[idx(k + 2, j)] -= pp * zr;
                        }
                        a[idx(k + 1, j)] -= pp * yr;
                        a[idx(k, j)] -= pp * xr;
                    }
                    let mmin = if nnu < k + 3 { nnu } else { k + 3 };
                    for i in l..=mmin {
                        let mut pp = xr * a[idx(i, k)] + yr * a[idx(i, k + 1)];
                        if k != nnu - 1 {
                            pp += zr * a[idx(i, k + 2)];
                            a[idx(i, k + 2)] -= pp * r;
                        }
                        a[idx(i, k + 1)] -= pp * q;
                        a[idx(i, k)] -= pp;
                    }
                }
                k += 1;
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex::new(re, im)).collect())
}

fn cmag<R: Real>(z: Complex<R>) -> R {
    z.re.abs() + z.im.abs()
}

/// Complex square root on the principal branch.
fn csqrt<R: Real>(z: Complex<R>) -> Complex<R> {
    let r = cabs(z);
    if r == R::zero() {
        return Complex::zero();
    }
    let half = R::from_f64(0.5);
    let re = ((r + z.re) * half).sqrt();
    let im = ((r - z.re) * half).sqrt();
    Complex::new(re, if z.im < R::zero() { -im } else { im })
}

/// Eigenvalues of a complex upper Hessenberg matrix by single-shift QR with
/// Wilkinson shifts and Givens rotations, restricted to the active window.
fn complex_hessenberg_qr<R: Real>(h: &mut [Complex<R>], n: usize) -> Result<Vec<Complex<R>>> {
    let idx = |i: usize, j: usize| i * n + j;
    let mut eig = vec![Complex::zero(); n];
    let max_sweeps = SWEEPS_PER_UNIT * n;
    let mut total_sweeps = 0usize;
    let mut hi = n - 1;
    let mut its = 0usize;
    let mut rot: Vec<(R, Complex<R>)> = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            eig[0] = h[idx(0, 0)];
            break;
        }
        let mut l = hi;
        while l >= 1 {
            let s = cmag(h[idx(l - 1, l - 1)]) + cmag(h[idx(l, l)]);
            if negligible(cmag(h[idx(l, l - 1)]), s) {
                h[idx(l, l - 1)] = Complex::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[idx(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        if total_sweeps >= max_sweeps {
            return Err(Error::EigenNoConvergence { n, index: hi + 1, sweeps: total_sweeps });
        }
        its += 1;
        total_sweeps += 1;
        let a = h[idx(hi - 1, hi - 1)];
        let b = h[idx(hi - 1, hi)];
        let c = h[idx(hi, hi - 1)];
        let d = h[idx(hi, hi)];
        let mu = if its.is_multiple_of(EXCEPTIONAL_SHIFT_PERIOD) {
            d + Complex::new(cmag(c) * R::from_f64(0.75), R::zero())
        } else {
            // Eigenvalue of the trailing 2x2 block closest to d.
            let half = R::from_f64(0.5);
            let tr = (a + d) * half;
            let disc = csqrt(((a - d) * half) * ((a - d) * half) + b * c);
            let e1 = tr + disc;
            let e2 = tr - disc;
            if cabs(e1 - d) <= cabs(e2 - d) {
                e1
            } else {
                e2
            }
        };
        for k in l..=hi {
            h[idx(k, k)] -= mu;
        }
        rot.clear();
        for k in l..hi {
            let x = h[idx(k, k)];
            let y = h[idx(k + 1, k)];
            let nrm = cabs(x).hypot(cabs(y));
            let (cs, sn) = if nrm == R::zero() {
                (R::one(), Complex::zero())
            } else if cabs(x) == R::zero() {
                (R::zero(), (y / nrm).conj())
            } else {
                let ax = cabs(x);
                let phase = x / ax;
                (ax / nrm, phase * y.conj() / nrm)
            };
            // Rows k, k+1 <- G [row k; row k+1] with G = [[c, s], [-conj s, c]].
            for j in k..=hi {
                let u = h[idx(k, j)];
                let v = h[idx(k + 1, j)];
                h[idx(k, j)] = u * cs + sn * v;
                h[idx(k + 1, j)] = v * cs - sn.conj() * u;
            }
            rot.push((cs, sn));
        }
        for (offset, &(cs, sn)) in rot.iter().enumerate() {
            let k = l + offset;
            let top = (k + 2).min(hi);
            for i in l..=top {
                let u = h[idx(i, k)];
                let v = h[idx(i, k + 1)];
                h[idx(i, k)] = u * cs + v * sn.conj();
                h[idx(i, k + 1)] = v * cs - u * sn;
            }
        }
        for k in l..=hi {
            h[idx(k, k)] += mu;
        }
    }
    Ok(eig)
}

/// Eigenvalues of `T_n(a)` in canonical order together with their curve
/// parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<R: Real = f64> {
    values: Vec<Complex<R>>,
    angles: Vec<f64>,
}

impl<R: Real> Spectrum<R> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex<R>] {
        &self.values
    }

    /// Curve parameter `theta` in `(0, 2 pi)` of each eigenvalue; see
    /// [`order_spectrum`]. Nondecreasing.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `lambda_j` for the 1-based index `j`.
    pub fn get(&self, j: usize) -> Complex<R> {
        self.values[j - 1]
    }

    pub fn to_f64(&self) -> Spectrum<f64> {
        Spectrum { values: self.values.iter().map(|z| to_c64(*z)).collect(), angles: self.angles.clone() }
    }
}

const COARSE_SAMPLES: usize = 2048;
const REFINE_POINTS: usize = 32;
const REFINE_ROUNDS: usize = 5;

/// Parameter `theta` in `(0, 2 pi)` of the point of the curve
/// `theta -> a(exp(-i theta))` closest to `lambda`.
///
/// `curve` holds the coarse samples at `theta_m = 2 pi (m + 1/2) / M`.
fn curve_parameter(symbol: &SymbolParams, curve: &[Complex64], lambda: Complex64) -> f64 {
    use std::f64::consts::TAU;
    let m = curve.len();
    let step = TAU / m as f64;
    let (best, _) = curve
        .iter()
        .enumerate()
        .map(|(i, p)| (i, (p - lambda).norm_sqr()))
        .fold((0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
    let eval = |theta: f64| -> f64 {
        symbol
            .evaluate(Complex64::from_polar(1.0, -theta))
            .map(|v| (v - lambda).norm_sqr())
            .unwrap_or(f64::INFINITY)
    };
    let mut center = (best as f64 + 0.5) * step;
    let mut radius = step;
    let eps = 1e-14;
    for _ in 0..REFINE_ROUNDS {
        let lo = (center - radius).max(eps);
        let hi = (center + radius).min(TAU - eps);
        let h = (hi - lo) / REFINE_POINTS as f64;
        let (arg, _) = (0..=REFINE_POINTS)
            .map(|i| {
                let th = lo + h * i as f64;
                (th, eval(th))
            })
            .fold((center, eval(center)), |b, c| if c.1 < b.1 { c } else { b });
        center = arg;
        radius = 2.0 * h;
    }
    center
}

/// Canonical ordering of a raw spectrum.
///
/// Each eigenvalue is keyed by the parameter `theta` of the nearest point on
/// the curve `a(exp(-i theta))`, `theta` in `(0, 2 pi)`, and sorted
/// ascending (ties by modulus). Inner eigenvalues then line up with the grid
/// `omega_n^j = exp(-2 pi i j / n)`, and the extreme ones near zero are
/// ordered by distance from the singularity along each branch.
pub fn order_spectrum<R: Real>(raw: Vec<Complex<R>>, symbol: &SymbolParams) -> Spectrum<R> {
    use rayon::prelude::*;
    use std::f64::consts::TAU;
    let curve: Vec<Complex64> = (0..COARSE_SAMPLES)
        .map(|m| {
            let theta = TAU * (m as f64 + 0.5) / COARSE_SAMPLES as f64;
            symbol.evaluate(Complex64::from_polar(1.0, -theta)).unwrap_or(Complex64::zero())
        })
        .collect();
    let mut keyed: Vec<(f64, f64, Complex<R>)> = raw
        .into_par_iter()
        .map(|z| {
            let z64 = to_c64(z);
            (curve_parameter(symbol, &curve, z64), z64.norm(), z)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Spectrum {
        angles: keyed.iter().map(|k| k.0).collect(),
        values: keyed.into_iter().map(|k| k.2).collect(),
    }
}

/// Dense spectrum of `T_n(a)` in canonical order.
pub fn toeplitz_spectrum<R: Real>(symbol: &SymbolParams, n: usize) -> Result<Spectrum<R>> {
    let op = crate::toeplitz::ToeplitzOperator::<R>::from_symbol(symbol, n)?;
    let raw = eigenvalues(&op.build_dense())?;
    Ok(order_spectrum(raw, symbol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toeplitz::ToeplitzOperator;

    fn model() -> SymbolParams {
        SymbolParams::model(0.75).unwrap()
    }

    fn dense(n: usize) -> DenseMatrix {
        ToeplitzOperator::from_symbol(&model(), n).unwrap().build_dense()
    }

    #[test]
    fn one_by_one() {
        let e = eigenvalues(&dense(1)).unwrap();
        assert_eq!(e, vec![Complex64::new(-0.75, 0.0)]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let s = toeplitz_spectrum::<f64>(&model(), 2).unwrap();
        let im = 0.09375f64.sqrt();
        assert!((s.get(1) - Complex64::new(-0.75, im)).norm() < 1e-12);
        assert!((s.get(2) - Complex64::new(-0.75, -im)).norm() < 1e-12);
        assert!((im - 0.3061862).abs() < 1e-7);
    }

    #[test]
    fn rejects_non_hessenberg() {
        let m = DenseMatrix::from_fn(3, |_, _| Complex64::new(1.0, 0.0));
        assert!(eigenvalues(&m).is_err());
    }

    #[test]
    fn real_matrix_with_real_spectrum() {
        // Upper Hessenberg with known eigenvalues 1, 2, 3 (upper triangular plus a
        // similarity would be overkill; triangular is already Hessenberg).
        let m = DenseMatrix::from_fn(3, |i, j| {
            let v = [[1.0, 4.0, 5.0], [0.0, 2.0, 6.0], [0.0, 0.0, 3.0]][i][j];
            Complex64::new(v, 0.0)
        });
        let mut e: Vec<f64> = eigenvalues(&m).unwrap().iter().map(|z| z.re).collect();
        e.sort_by(f64::total_cmp);
        for (a, b) in e.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn complex_path_matches_trace_and_transpose() {
        let s = SymbolParams::new(0.4, vec![Complex64::new(1.0, 0.3), Complex64::new(-0.2, 0.1)]).unwrap();
        let t = ToeplitzOperator::<f64>::from_symbol(&s, 40).unwrap();
        let m = t.build_dense();
        assert!(!m.is_real());
        let e = eigenvalues(&m).unwrap();
        let e_t = eigenvalues(&m.transpose()).unwrap();
        let trace: Complex64 = (0..40).map(|i| m[(i, i)]).sum();
        let sum: Complex64 = e.iter().sum();
        assert!((trace - sum).norm() < 1e-10 * trace.norm());
        let oa = order_spectrum(e, &s);
        let ob = order_spectrum(e_t, &s);
        for (a, b) in oa.values().iter().zip(ob.values()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn ordering_is_a_permutation_with_nondecreasing_angles() {
        let raw = eigenvalues(&dense(30)).unwrap();
        let s = order_spectrum(raw.clone(), &model());
        assert!(s.angles().windows(2).all(|w| w[0] <= w[1]));
        let mut a: Vec<_> = raw.iter().map(|z| (z.re, z.im)).collect();
        let mut b: Vec<_> = s.values().iter().map(|z| (z.re, z.im)).collect();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn extended_backend_spectrum_matches_f64() {
        use crate::scalar::DoubleDouble;
        let s64 = toeplitz_spectrum::<f64>(&model(), 24).unwrap();
        let sdd = toeplitz_spectrum::<DoubleDouble>(&model(), 24).unwrap().to_f64();
        for (a, b) in s64.values().iter().zip(sdd.values()) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }
}
