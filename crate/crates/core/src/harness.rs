//! Precompute, approximate, and measure.
//!
//! [`run_precompute`] computes the dense spectra, fits both coefficient
//! tables, and returns a [`Cache`] that serializes to JSON.
//! [`approximate_spectrum`] then produces all `n` eigenvalues from the cache
//! alone. [`run_errors`] compares against the dense solver.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{toeplitz_spectrum, Spectrum};
use crate::error::{Error, Result};
use crate::extreme::{approx_extreme_eigenvalue, build_extreme_table, ExtremeTable};
use crate::inner::{
    approx_inner_eigenvalue, basis_ordering, build_inner_table, exact_first_coefficient, first_coefficient_deviation,
    CoefficientTable,
};
use crate::scalar::{Complex64, DoubleDouble, Precision, Real};
use crate::symbol::SymbolParams;

pub const FORMAT_VERSION: u32 = 1;

/// Largest size the dense oracle accepts.
pub const ORACLE_MAX_SIZE: usize = 8192;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub symbol: SymbolParams,
    pub n1: usize,
    pub k_inner: usize,
    pub k_extreme: usize,
    /// Extreme indices tracked at each end.
    pub j0: usize,
    /// Regime split: the `floor(epsilon n)` indices at each end are extreme.
    pub epsilon: f64,
    /// Sizes for the extreme fit; `n1 * (1..=k_extreme)` when `None`.
    pub extreme_sizes: Option<Vec<usize>>,
    pub precision: Precision,
}

impl RunConfig {
    /// Defaults: 7 inner levels, 5 extreme levels, `j0 = n1 / 4`, `epsilon = 1/8`.
    pub fn new(symbol: SymbolParams, n1: usize) -> Self {
        Self {
            symbol,
            n1,
            k_inner: 7,
            k_extreme: 5,
            j0: (n1 / 4).max(1),
            epsilon: 0.125,
            extreme_sizes: None,
            precision: Precision::Hardware,
        }
    }

    pub fn extreme_sizes(&self) -> Vec<usize> {
        self.extreme_sizes
            .clone()
            .unwrap_or_else(|| (1..=self.k_extreme).map(|l| l * self.n1).collect())
    }

    pub fn inner_sizes(&self) -> Vec<usize> {
        (1..self.k_inner).map(|l| l * self.n1).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.n1 < 2 {
            return bad(format!("n1 = {} is too small", self.n1));
        }
        if self.k_inner < 2 {
            return bad(format!("k_inner = {} (needs at least 2)", self.k_inner));
        }
        if self.k_extreme == 0 {
            return bad("k_extreme must be positive".into());
        }
        if self.j0 == 0 || self.j0 > self.n1 {
            return bad(format!("j0 = {} outside 1..={}", self.j0, self.n1));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return bad(format!("epsilon = {} outside (0, 1/2)", self.epsilon));
        }
        let sizes = self.extreme_sizes();
        if sizes.len() != self.k_extreme {
            return bad(format!("{} extreme sizes for {} levels", sizes.len(), self.k_extreme));
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] < self.j0 {
            return bad(format!("extreme sizes {sizes:?} must increase and start at or above j0"));
        }
        Ok(())
    }

    /// `0 < epsilon < n1 / n` for every target size.
    pub fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for &n in targets {
            if n < self.n1 {
                return Err(Error::InvalidParameter(format!("n = {n} is below the grid size {}", self.n1)));
            }
            if self.epsilon >= self.n1 as f64 / n as f64 {
                return Err(Error::InvalidParameter(format!(
                    "epsilon = {} must stay below n1 / n = {}",
                    self.epsilon,
                    self.n1 as f64 / n as f64
                )));
            }
        }
        Ok(())
    }
}

/// Everything the approximation phase needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cache {
    pub format_version: u32,
    pub alpha: f64,
    pub f_series: Vec<Complex64>,
    pub n1: usize,
    pub k_inner: usize,
    pub k_extreme: usize,
    pub j0: usize,
    pub precision: Precision,
    pub inner: CoefficientTable,
    pub extreme: ExtremeTable,
}

impl Cache {
    pub fn symbol(&self) -> Result<SymbolParams> {
        SymbolParams::new(self.alpha, self.f_series.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cache: Cache = serde_json::from_str(text)?;
        if cache.format_version != FORMAT_VERSION {
            return Err(Error::CacheFormat(format!(
                "format version {} (expected {FORMAT_VERSION})",
                cache.format_version
            )));
        }
        cache.inner.check_complete()?;
        cache.extreme.check_complete()?;
        if cache.inner.k != cache.k_inner || cache.extreme.k != cache.k_extreme {
            return Err(Error::CacheFormat("level counts disagree with the tables".into()));
        }
        Ok(cache)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Dense spectra of `T_n(a)` for every size, computed concurrently.
pub fn dense_spectra<R: Real>(symbol: &SymbolParams, sizes: &[usize]) -> Result<BTreeMap<usize, Spectrum<R>>> {
    let mut unique = sizes.to_vec();
    unique.sort_unstable();
    unique.dedup();
    if let Some(&n) = unique.last() {
        if n > ORACLE_MAX_SIZE {
            return Err(Error::InvalidParameter(format!("dense size {n} exceeds the cap {ORACLE_MAX_SIZE}")));
        }
    }
    // Largest first so the long solves start early.
    unique
        .par_iter()
        .rev()
        .map(|&n| toeplitz_spectrum::<R>(symbol, n).map(|s| (n, s)).map_err(|e| e.at(n, 0)))
        .collect()
}

fn precompute_in<R: Real>(cfg: &RunConfig) -> Result<Cache> {
    cfg.validate()?;
    let symbol = &cfg.symbol;
    let inner_sizes = cfg.inner_sizes();
    let extreme_sizes = cfg.extreme_sizes();
    let all: Vec<usize> = inner_sizes.iter().chain(&extreme_sizes).copied().collect();
    let spectra = dense_spectra::<R>(symbol, &all)?;
    let pick = |sizes: &[usize]| -> Vec<Spectrum<R>> { sizes.iter().map(|n| spectra[n].clone()).collect() };
    let inner = build_inner_table(symbol, &pick(&inner_sizes), cfg.k_inner)?;
    let extreme = build_extreme_table(&pick(&extreme_sizes), symbol.alpha(), cfg.j0, symbol.is_real())?;
    Ok(Cache {
        format_version: FORMAT_VERSION,
        alpha: symbol.alpha(),
        f_series: symbol.f_series().to_vec(),
        n1: cfg.n1,
        k_inner: cfg.k_inner,
        k_extreme: cfg.k_extreme,
        j0: cfg.j0,
        precision: cfg.precision,
        inner,
        extreme,
    })
}

/// Dense spectra at the grid sizes, then both extrapolations.
pub fn run_precompute(cfg: &RunConfig) -> Result<Cache> {
    match cfg.precision {
        Precision::Hardware => precompute_in::<f64>(cfg),
        Precision::Extended => precompute_in::<DoubleDouble>(cfg),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    ExtremeLow,
    Inner,
    ExtremeHigh,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::ExtremeLow => "extreme-low",
            Regime::Inner => "inner",
            Regime::ExtremeHigh => "extreme-high",
        }
    }
}

/// `floor(epsilon n)`, guarded against `epsilon n` landing just below an integer.
pub fn extreme_window(n: usize, epsilon: f64) -> usize {
    (epsilon * n as f64 + 1e-9).floor().max(0.0) as usize
}

/// Regime of index `j` in `1..=n`.
pub fn regime(n: usize, j: usize, epsilon: f64) -> Regime {
    let w = extreme_window(n, epsilon);
    if j <= w {
        Regime::ExtremeLow
    } else if j > n - w {
        Regime::ExtremeHigh
    } else {
        Regime::Inner
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApproxEigenvalue {
    pub j: usize,
    pub value: Complex64,
    pub regime: Regime,
}

/// All `n` eigenvalues: the inner formula with `k1` levels and the extreme
/// power law with `k2` terms on the `floor(epsilon n)` indices at each end.
pub fn approximate_spectrum(cache: &Cache, n: usize, k1: usize, k2: usize, epsilon: f64) -> Result<Vec<ApproxEigenvalue>> {
    let symbol = cache.symbol()?;
    if n < cache.n1 {
        return Err(Error::InvalidParameter(format!("n = {n} is below the grid size {}", cache.n1)));
    }
    let w = extreme_window(n, epsilon);
    if w > cache.j0 {
        return Err(Error::UntrackedIndex { j: w, n, window: cache.j0 });
    }
    let inner = cache.inner.truncated(k1)?;
    (1..=n)
        .into_par_iter()
        .map(|j| {
            let regime = regime(n, j, epsilon);
            let value = match regime {
                Regime::Inner => approx_inner_eigenvalue(&symbol, &inner, n, j, k1)?,
                _ => approx_extreme_eigenvalue(&cache.extreme, n, j, k2)?,
            };
            Ok(ApproxEigenvalue { j, value, regime })
        })
        .collect()
}

/// Inner approximations for every index of an `n`-sized spectrum.
pub fn inner_approximations(cache: &Cache, n: usize, k: usize) -> Result<Vec<Complex64>> {
    let symbol = cache.symbol()?;
    let table = cache.inner.truncated(k)?;
    (1..=n).into_par_iter().map(|j| approx_inner_eigenvalue(&symbol, &table, n, j, k)).collect()
}

pub fn absolute_error(exact: Complex64, approx: Complex64) -> f64 {
    (exact - approx).norm()
}

pub fn relative_error(exact: Complex64, approx: Complex64) -> Result<f64> {
    let scale = exact.norm();
    if scale < 1e-300 {
        return Err(Error::DivisionByZero(scale));
    }
    Ok(absolute_error(exact, approx) / scale)
}

/// Max absolute error over `floor(epsilon n) < j <= n - floor(epsilon n)`.
pub fn max_inner_error(exact: &[Complex64], approx: &[Complex64], epsilon: f64) -> Result<f64> {
    if exact.len() != approx.len() {
        return Err(Error::DimensionMismatch { expected: exact.len(), found: approx.len() });
    }
    let n = exact.len();
    let w = extreme_window(n, epsilon);
    Ok((w + 1..=n - w)
        .map(|j| absolute_error(exact[j - 1], approx[j - 1]))
        .fold(0.0, f64::max))
}

/// `xi_k(n)`, the first neglected term of a `k`-level approximation.
pub fn xi_k(alpha: f64, k: usize, n: usize) -> f64 {
    basis_ordering(alpha, k)[k - 1].eval(n)
}

/// Per-index relative error of a spliced approximation.
pub fn global_relative_error(exact: &[Complex64], approx: &[ApproxEigenvalue]) -> Result<Vec<f64>> {
    if exact.len() != approx.len() {
        return Err(Error::DimensionMismatch { expected: exact.len(), found: approx.len() });
    }
    exact.iter().zip(approx).map(|(e, a)| relative_error(*e, a.value)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub k: usize,
    pub n: usize,
    pub ae_max: f64,
    pub ae_normalized: f64,
}

/// Per-index errors of the spliced approximation at one size.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    pub epsilon: f64,
    pub regimes: Vec<Regime>,
    pub absolute: Vec<f64>,
    pub relative: Vec<f64>,
}

impl ErrorReport {
    /// `(j, 2 pi j / (n + 1), log10 RE_j)`.
    pub fn figure_points(&self) -> Vec<(usize, f64, f64)> {
        self.relative
            .iter()
            .enumerate()
            .map(|(i, re)| {
                let j = i + 1;
                (j, std::f64::consts::TAU * j as f64 / (self.n as f64 + 1.0), re.max(1e-300).log10())
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorsConfig {
    pub sizes: Vec<usize>,
    /// Table rows cover `k = 1..=k_table`.
    pub k_table: usize,
    /// Window for the table, `1/8` by default.
    pub table_epsilon: f64,
    pub k1: usize,
    pub k2: usize,
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorTables {
    pub rows: Vec<TableRow>,
    pub reports: Vec<ErrorReport>,
}

/// Error table rows (sorted by `k`, then `n`) and spliced per-index reports.
pub fn run_errors(cache: &Cache, cfg: &ErrorsConfig) -> Result<ErrorTables> {
    let symbol = cache.symbol()?;
    if cfg.k_table == 0 || cfg.k_table > cache.k_inner {
        return Err(Error::InvalidParameter(format!("table k up to {} but the cache has {}", cfg.k_table, cache.k_inner)));
    }
    let exact = dense_spectra::<f64>(&symbol, &cfg.sizes)?;
    let mut rows = Vec::new();
    for k in 1..=cfg.k_table {
        for &n in &cfg.sizes {
            let approx = inner_approximations(cache, n, k)?;
            let ae_max = max_inner_error(exact[&n].values(), &approx, cfg.table_epsilon)?;
            rows.push(TableRow { k, n, ae_max, ae_normalized: ae_max / xi_k(cache.alpha, k, n) });
        }
    }
    let reports = cfg
        .sizes
        .iter()
        .map(|&n| {
            let approx = approximate_spectrum(cache, n, cfg.k1, cfg.k2, cfg.epsilon)?;
            let values = exact[&n].values();
            Ok(ErrorReport {
                n,
                k1: cfg.k1,
                k2: cfg.k2,
                epsilon: cfg.epsilon,
                regimes: approx.iter().map(|a| a.regime).collect(),
                absolute: values.iter().zip(&approx).map(|(e, a)| absolute_error(*e, a.value)).collect(),
                relative: global_relative_error(values, &approx)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ErrorTables { rows, reports })
}

/// Consistency checks on a cache.
#[derive(Clone, Debug, PartialEq)]
pub struct Validation {
    /// Max relative deviation of `c_1` from `p_{0,1,0}` over the grid nodes
    /// other than `sigma = 1`, and where it occurs.
    pub first_coefficient: (f64, usize),
    /// Real symbols: max over `j1` of `|c_1(sigma_{n1-j1}) - conj(c_1(sigma_{j1}))|`
    /// modulo `2 pi i`. Eigenvalue `j` mirrors to `n + 1 - j` while the grid
    /// mirrors `j` to `n - j`, so the two sides differ by `2 pi i` at leading
    /// order and the higher coefficients have no simple mirror relation.
    pub conjugate_residual: Option<f64>,
    /// Max `|approx - lambda_j(T_{n1})|` over the inner indices at `n = n1`
    /// with all levels.
    pub self_consistency: f64,
}

pub fn validate_cache(cache: &Cache, epsilon: f64) -> Result<Validation> {
    let symbol = cache.symbol()?;
    cache.inner.check_complete()?;
    cache.extreme.check_complete()?;
    let n1 = cache.n1;
    let mut first = (0.0, 0);
    for j1 in 1..n1 {
        let z = crate::scalar::root_of_unity(n1, j1 as i64);
        let dev = first_coefficient_deviation(cache.inner.get(1, j1), exact_first_coefficient(&symbol, z)?);
        if dev > first.0 {
            first = (dev, j1);
        }
    }
    let tau = Complex64::new(0.0, std::f64::consts::TAU);
    let conjugate_residual = symbol.is_real().then(|| {
        (1..n1)
            .map(|j1| {
                let d = cache.inner.get(1, n1 - j1) - cache.inner.get(1, j1).conj();
                [-1.0, 0.0, 1.0].iter().map(|&m| (d - tau * m).norm()).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    });
    let exact = toeplitz_spectrum::<f64>(&symbol, n1)?;
    let approx = inner_approximations(cache, n1, cache.k_inner)?;
    let self_consistency = max_inner_error(exact.values(), &approx, epsilon)?;
    Ok(Validation { first_coefficient: first, conjugate_residual, self_consistency })
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

pub fn write_approx_csv<W: Write>(out: W, values: &[ApproxEigenvalue]) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["j", "re(lambda)", "im(lambda)", "regime"])?;
    for v in values {
        w.write_record([v.j.to_string(), v.value.re.to_string(), v.value.im.to_string(), v.regime.tag().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_table_csv<W: Write>(out: W, rows: &[TableRow]) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["k", "n", "AE_max", "AE_normalized"])?;
    for r in rows {
        w.write_record([r.k.to_string(), r.n.to_string(), r.ae_max.to_string(), r.ae_normalized.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_figure_csv<W: Write>(out: W, report: &ErrorReport) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(["j", "abscissa", "log10_RE"])?;
    for (j, x, y) in report.figure_points() {
        w.write_record([j.to_string(), x.to_string(), y.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `"1/30"` or `"0.0333"`.
pub fn parse_epsilon(text: &str) -> Result<f64> {
    let bad = || Error::InvalidParameter(format!("cannot parse `{text}` as a rational or real"));
    let value = match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => text.trim().parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Comma-separated complex coefficients of `f`, e.g. `1,0.3-0.2i`.
pub fn parse_f_series(text: &str) -> Result<Vec<Complex64>> {
    text.split(',')
        .map(|item| {
            item.trim()
                .parse::<Complex64>()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse `{item}` as a complex number")))
        })
        .collect()
}

/// `"256"`, `"256,512,1024"`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse `{item}` as a size")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn error_metrics() {
        let z = c(0.3, -0.7);
        assert_eq!(absolute_error(z, z), 0.0);
        assert_eq!(absolute_error(c(1.0, 1.0), c(1.0, 0.0)), 1.0);
        assert!((absolute_error(c(-0.75, 0.3061862), c(-0.75, 0.0)) - 0.3061862).abs() < 1e-15);
        assert_eq!(relative_error(z, z).unwrap(), 0.0);
        assert_eq!(relative_error(c(2.0, 0.0), c(1.0, 0.0)).unwrap(), 0.5);
        assert_eq!(relative_error(c(0.0, 1e-3), c(0.0, 0.0)).unwrap(), 1.0);
        assert!(matches!(relative_error(c(0.0, 0.0), z), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn regimes_partition_indices() {
        assert_eq!(extreme_window(2048, 1.0 / 30.0), 68);
        assert_eq!(regime(2048, 68, 1.0 / 30.0), Regime::ExtremeLow);
        assert_eq!(regime(2048, 69, 1.0 / 30.0), Regime::Inner);
        assert_eq!(regime(2048, 1980, 1.0 / 30.0), Regime::Inner);
        assert_eq!(regime(2048, 1981, 1.0 / 30.0), Regime::ExtremeHigh);
        assert_eq!(extreme_window(240, 1.0 / 30.0), 8);
        assert!((1..=100).all(|j| regime(100, j, 0.001) == Regime::Inner));
    }

    #[test]
    fn max_inner_error_window() {
        let exact = vec![c(1.0, 0.0); 16];
        assert_eq!(max_inner_error(&exact, &exact, 0.125).unwrap(), 0.0);
        let mut approx = exact.clone();
        approx[0] = c(5.0, 0.0);
        approx[15] = c(5.0, 0.0);
        approx[7] = c(1.5, 0.0);
        assert_eq!(max_inner_error(&exact, &approx, 0.125).unwrap(), 0.5);
        assert!((xi_k(0.75, 2, 256) - 2f64.powi(-14)).abs() < 1e-20);
    }

    #[test]
    fn parsers() {
        assert!((parse_epsilon("1/30").unwrap() - 1.0 / 30.0).abs() < 1e-17);
        assert_eq!(parse_epsilon("0.125").unwrap(), 0.125);
        assert!(parse_epsilon("x").is_err());
        assert_eq!(parse_f_series("1, 0.3-0.2i").unwrap(), vec![c(1.0, 0.0), c(0.3, -0.2)]);
        assert_eq!(parse_sizes("256,512").unwrap(), vec![256, 512]);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        let v = [ApproxEigenvalue { j: 1, value: c(0.5, -0.25), regime: Regime::ExtremeLow }];
        write_approx_csv(&mut buf, &v).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "j,re(lambda),im(lambda),regime\n1,0.5,-0.25,extreme-low\n");
        let report = ErrorReport {
            n: 9,
            k1: 1,
            k2: 1,
            epsilon: 0.1,
            regimes: vec![Regime::Inner],
            absolute: vec![0.1],
            relative: vec![0.01],
        };
        let p = report.figure_points();
        assert_eq!(p[0].0, 1);
        assert!((p[0].1 - std::f64::consts::TAU / 10.0).abs() < 1e-16);
        assert!((p[0].2 + 2.0).abs() < 1e-15);
    }

    #[test]
    fn config_invariants() {
        let s = SymbolParams::model(0.75).unwrap();
        let mut cfg = RunConfig::new(s, 100);
        cfg.validate().unwrap();
        assert_eq!(cfg.extreme_sizes(), vec![100, 200, 300, 400, 500]);
        assert_eq!(cfg.inner_sizes(), vec![100, 200, 300, 400, 500, 600]);
        cfg.check_targets(&[256, 512]).unwrap();
        assert!(cfg.check_targets(&[1024]).is_err());
        cfg.k_inner = 1;
        assert!(cfg.validate().is_err());
    }
}
