//! Matrix-less approximation of the eigenvalues of the lower Hessenberg
//! Toeplitz matrices `T_n(a)` generated by `a(t) = t^{-1} (1 - t)^alpha f(t)`,
//! `0 < alpha < 1`.
//!
//! The spectrum splits into two regimes. Inner eigenvalues are
//! `lambda_j = a(t_{j,n})` with `t_{j,n}` close to the grid point
//! `omega_n^j = exp(-2 pi i j / n)`; their expansion coefficients are
//! extrapolated on a fixed circular grid and interpolated to any `(n, j)`
//! ([`inner`]). Extreme eigenvalues, the ones near the singularity at zero,
//! follow a power law in `1 / (n + 1)` whose coefficients are extrapolated
//! per index ([`extreme`]). [`harness`] stitches both together, persists the
//! precomputed tables and measures errors against the dense solver in
//! [`eigensolver`].

pub mod eigensolver;
pub mod error;
pub mod extreme;
pub mod harness;
pub mod inner;
pub mod linalg;
pub mod scalar;
pub mod symbol;
pub mod toeplitz;

pub use eigensolver::{eigenvalues, order_spectrum, toeplitz_spectrum, Spectrum};
pub use error::{Error, Result};
pub use extreme::{approx_extreme_eigenvalue, build_extreme_table, extrapolate_extreme, ExtremeTable};
pub use harness::{approximate_spectrum, run_errors, run_precompute, ApproxEigenvalue, Cache, Regime, RunConfig};
pub use inner::{
    approx_inner_eigenvalue, basis_ordering, build_inner_table, exact_first_coefficient, extrapolate_inner,
    interpolate_coefficient, xi_eval, BasisTerm, CoefficientTable,
};
pub use scalar::{Complex64, DoubleDouble, Precision, Real};
pub use symbol::{FourierCoefficients, SymbolParams};
pub use toeplitz::ToeplitzOperator;
