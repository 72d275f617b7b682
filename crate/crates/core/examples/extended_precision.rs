//! The double-double backend: the same precompute in about 31 significant
//! digits, compared with the 64-bit one on the highest-level coefficients.
//!
//! cargo run --release --example extended_precision

use matrixless::{run_precompute, DoubleDouble, Precision, RunConfig, SymbolParams};

fn main() -> matrixless::Result<()> {
    let x = DoubleDouble::from_f64(2.0).powf(DoubleDouble::from_f64(0.75));
    println!("2^(3/4) = {} + {:e}", x.hi(), x.lo());

    let mut cfg = RunConfig::new(SymbolParams::model(0.75)?, 40);
    cfg.k_inner = 7;
    cfg.k_extreme = 4;
    cfg.j0 = 5;
    let hw = run_precompute(&cfg)?;
    cfg.precision = Precision::Extended;
    let ext = run_precompute(&cfg)?;

    for s in 1..cfg.k_inner {
        let diff = (1..=cfg.n1)
            .map(|j| (hw.inner.get(s, j) - ext.inner.get(s, j)).norm() / ext.inner.get(s, j).norm().max(1e-300))
            .fold(0.0, f64::max);
        println!("c_{s}: max relative difference hw vs extended {diff:.2e}");
    }
    Ok(())
}
