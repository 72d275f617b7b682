//! A symbol with complex `f`: no conjugate symmetry, so both ends of the
//! spectrum get their own extreme fit.
//!
//! cargo run --release --example complex_symbol

use matrixless::harness::global_relative_error;
use matrixless::{approximate_spectrum, run_precompute, toeplitz_spectrum, Complex64, RunConfig, SymbolParams};

fn main() -> matrixless::Result<()> {
    let a = SymbolParams::new(0.6, vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.25)])?;
    let mut cfg = RunConfig::new(a, 80);
    cfg.k_inner = 5;
    cfg.k_extreme = 4;
    cfg.j0 = 6;
    let cache = run_precompute(&cfg)?;
    println!("separate high-end fit stored: {}", cache.extreme.high.is_some());

    let n = 400;
    let approx = approximate_spectrum(&cache, n, 5, 4, 0.01)?;
    let exact = toeplitz_spectrum::<f64>(&cache.symbol()?, n)?;
    let re = global_relative_error(exact.values(), &approx)?;
    for j in [1, 2, 4, 100, 200, 300, n - 3, n - 1, n] {
        println!("j = {j:>3} ({:>12}): lambda = {:.6}, relative error {:.1e}", approx[j - 1].regime.tag(), exact.get(j), re[j - 1]);
    }
    Ok(())
}
