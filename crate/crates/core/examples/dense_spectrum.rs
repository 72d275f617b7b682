//! Build `T_n(a)` and compute its spectrum with the Hessenberg QR solver.
//! The spectrum comes back in canonical order: inner eigenvalues follow the
//! grid `exp(-2 pi i j / n)`, extreme ones sit at both ends.
//!
//! cargo run --release --example dense_spectrum

use matrixless::{toeplitz_spectrum, Complex64, Spectrum, SymbolParams, ToeplitzOperator};

fn main() -> matrixless::Result<()> {
    let a = SymbolParams::model(0.75)?;
    let n = 256;

    let op: ToeplitzOperator = ToeplitzOperator::from_symbol(&a, n)?;
    println!("T_{n}: a_-1 = {}, a_0 = {}, a_1 = {}", op.entry(0, 1), op.entry(0, 0), op.entry(1, 0));

    let spectrum: Spectrum = toeplitz_spectrum(&a, n)?;
    let trace: Complex64 = spectrum.values().iter().sum();
    println!("sum of eigenvalues {trace:.12}, n a_0 = {}", -0.75 * n as f64);

    for j in [1, 2, 3, 64, 128, 129, 192, 254, 255, 256] {
        let lambda = spectrum.get(j);
        let grid = a.evaluate(Complex64::from_polar(1.0, -std::f64::consts::TAU * j as f64 / n as f64))?;
        println!("j = {j:>3}: lambda = {lambda:.6}, |lambda - a(omega^j)| = {:.2e}", (lambda - grid).norm());
    }
    Ok(())
}
