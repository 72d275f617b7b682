//! Reproduce the inner-error table for `a(t) = t^{-1} (1 - t)^{3/4}`:
//! max absolute error over `n/8 < j <= 7n/8` and its ratio to `xi_k(n)`.
//!
//! cargo run --release --example table_one

use matrixless::harness::{run_errors, run_precompute, ErrorsConfig, RunConfig};
use matrixless::SymbolParams;

fn main() -> matrixless::Result<()> {
    let symbol = SymbolParams::model(0.75)?;
    let cfg = RunConfig::new(symbol, 100);
    let cache = run_precompute(&cfg)?;
    let errors = ErrorsConfig {
        sizes: vec![256, 512, 1024],
        k_table: 5,
        table_epsilon: 0.125,
        k1: 5,
        k2: 5,
        epsilon: 1.0 / 128.0,
    };
    let tables = run_errors(&cache, &errors)?;
    println!("{:>2} {:>5} {:>12} {:>10}", "k", "n", "AE_max", "AE/xi_k");
    for row in &tables.rows {
        println!("{:>2} {:>5} {:>12.4e} {:>10.4}", row.k, row.n, row.ae_max, row.ae_normalized);
    }
    for report in &tables.reports {
        let worst = report.relative.iter().cloned().fold(0.0, f64::max);
        println!("n = {}: max global relative error {worst:.3e}", report.n);
    }
    Ok(())
}
