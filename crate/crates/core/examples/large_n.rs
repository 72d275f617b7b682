//! Matrix-less cost: approximating all eigenvalues of `T_n` for n far beyond
//! anything a dense solver could handle. Time per eigenvalue stays flat.
//!
//! cargo run --release --example large_n

use std::time::Instant;

use matrixless::{approximate_spectrum, run_precompute, RunConfig, SymbolParams};

fn main() -> matrixless::Result<()> {
    let mut cfg = RunConfig::new(SymbolParams::model(0.75)?, 100);
    cfg.k_inner = 5;
    cfg.j0 = 25;
    let cache = run_precompute(&cfg)?;

    for n in [10_000, 100_000, 1_000_000] {
        let start = Instant::now();
        let values = approximate_spectrum(&cache, n, 5, 5, 1e-5)?;
        let secs = start.elapsed().as_secs_f64();
        let mid = values[n / 2 - 1].value;
        println!("n = {n:>8}: {secs:.3} s, {:.2} us per eigenvalue, lambda_(n/2) = {mid:.8}", secs * 1e6 / n as f64);
    }
    Ok(())
}
