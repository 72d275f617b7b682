//! Eigenvalues closest to zero: fit `lambda_j(T_n) ~ sum_m q_m(j) / (n+1)^{alpha+m-1}`
//! on a few sizes and predict a larger one.
//!
//! cargo run --release --example extreme_fit

use matrixless::{approx_extreme_eigenvalue, build_extreme_table, toeplitz_spectrum, Spectrum, SymbolParams};

fn main() -> matrixless::Result<()> {
    let a = SymbolParams::model(0.75)?;
    let spectra: Vec<Spectrum> = (1..=4).map(|l| toeplitz_spectrum(&a, 100 * l)).collect::<Result<_, _>>()?;
    let n = 512;
    let exact: Spectrum = toeplitz_spectrum(&a, n)?;

    println!("relative error at n = {n}");
    println!("{:>3} {:>10} {:>10} {:>10} {:>10}", "j", "k=1", "k=2", "k=3", "k=4");
    let tables: Vec<_> = (1..=4).map(|k| build_extreme_table(&spectra[..k], 0.75, 10, a.is_real())).collect::<Result<_, _>>()?;
    for j in [1, 2, 5, 10, n - 1, n] {
        let row: Vec<String> = tables
            .iter()
            .map(|t| {
                let z = approx_extreme_eigenvalue(t, n, j, t.k).unwrap();
                format!("{:>10.2e}", (z - exact.get(j)).norm() / exact.get(j).norm())
            })
            .collect();
        println!("{j:>3} {}", row.join(" "));
    }
    println!("q(1) = {:?}", tables[3].low[0]);
    Ok(())
}
