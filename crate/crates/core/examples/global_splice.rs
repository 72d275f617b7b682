//! All eigenvalues of `T_2048` from a 100-point precompute: the extreme power
//! law on the 68 indices at each end (epsilon = 1/30), the inner expansion
//! elsewhere, checked against the dense solver.
//!
//! cargo run --release --example global_splice

use matrixless::harness::global_relative_error;
use matrixless::{approximate_spectrum, run_precompute, toeplitz_spectrum, Regime, RunConfig, SymbolParams};

fn main() -> matrixless::Result<()> {
    let mut cfg = RunConfig::new(SymbolParams::model(0.75)?, 100);
    cfg.j0 = 68;
    cfg.epsilon = 1.0 / 30.0;
    cfg.extreme_sizes = Some(vec![400, 500, 600, 700, 800]);
    let cache = run_precompute(&cfg)?;

    let n = 2048;
    let approx = approximate_spectrum(&cache, n, 5, 5, cfg.epsilon)?;
    let exact = toeplitz_spectrum::<f64>(&cache.symbol()?, n)?;
    let re = global_relative_error(exact.values(), &approx)?;

    for regime in [Regime::ExtremeLow, Regime::Inner, Regime::ExtremeHigh] {
        let errs: Vec<f64> = approx.iter().zip(&re).filter(|(a, _)| a.regime == regime).map(|(_, e)| *e).collect();
        let worst = errs.iter().cloned().fold(0.0, f64::max);
        println!("{:>12}: {:>4} indices, max relative error {worst:.2e}", regime.tag(), errs.len());
    }
    let mut sorted = re.clone();
    sorted.sort_by(f64::total_cmp);
    println!("median relative error {:.2e}", sorted[n / 2]);
    Ok(())
}
