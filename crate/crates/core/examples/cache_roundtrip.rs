//! Precompute once, save the coefficient cache as JSON, reload it and write
//! approximate eigenvalues as CSV.
//!
//! cargo run --release --example cache_roundtrip

use matrixless::harness::write_approx_csv;
use matrixless::{approximate_spectrum, run_precompute, Cache, RunConfig, SymbolParams};

fn main() -> matrixless::Result<()> {
    let mut cfg = RunConfig::new(SymbolParams::model(0.75)?, 60);
    cfg.k_inner = 5;
    cfg.k_extreme = 3;
    cfg.j0 = 8;
    let cache = run_precompute(&cfg)?;

    let path = std::env::temp_dir().join("matrixless-example-cache.json");
    cache.write(&path)?;
    let loaded = Cache::read(&path)?;
    println!("{} bytes, identical after reload: {}", std::fs::metadata(&path)?.len(), loaded == cache);

    let values = approximate_spectrum(&loaded, 120, 5, 3, 1.0 / 30.0)?;
    let mut out = Vec::new();
    write_approx_csv(&mut out, &values[..6])?;
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
