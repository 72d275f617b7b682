//! Extrapolate the inner expansion coefficients on a 100-point grid, compare
//! the first one with its closed form, and approximate inner eigenvalues of a
//! larger matrix from the table alone.
//!
//! cargo run --release --example inner_table

use matrixless::inner::first_coefficient_deviation;
use matrixless::scalar::root_of_unity;
use matrixless::{
    approx_inner_eigenvalue, basis_ordering, build_inner_table, exact_first_coefficient, toeplitz_spectrum, Spectrum,
    SymbolParams,
};

fn main() -> matrixless::Result<()> {
    let a = SymbolParams::model(0.75)?;
    let (n1, k) = (100, 6);

    for term in basis_ordering(0.75, k - 1) {
        println!("xi: log^{}(n) / n^{}", term.ell, term.exponent);
    }

    let spectra: Vec<Spectrum> = (1..k).map(|l| toeplitz_spectrum(&a, l * n1)).collect::<Result<_, _>>()?;
    let table = build_inner_table(&a, &spectra, k)?;

    for j1 in [10, 25, 50, 75, 90] {
        let c1 = table.get(1, j1);
        let p = exact_first_coefficient(&a, root_of_unity(n1, j1 as i64))?;
        println!("j1 = {j1:>2}: c_1 = {c1:.6}, closed form {p:.6}, deviation {:.1e}", first_coefficient_deviation(c1, p));
    }

    let n = 700;
    let exact = toeplitz_spectrum::<f64>(&a, n)?;
    for kk in 1..=k {
        let worst = (n / 8 + 1..=n - n / 8)
            .map(|j| approx_inner_eigenvalue(&a, &table, n, j, kk).map(|z| (z - exact.get(j)).norm()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        println!("n = {n}, k = {kk}: max inner error {worst:.3e}");
    }
    Ok(())
}
