//! The generating function `a(t) = t^{-1} (1 - t)^alpha f(t)`: values,
//! derivative, Fourier coefficients, inversion and winding number.
//!
//! cargo run --example symbol_basics

use matrixless::{Complex64, SymbolParams};

fn main() -> matrixless::Result<()> {
    let a = SymbolParams::model(0.75)?;

    let t = Complex64::new(-1.0, 0.0);
    println!("a(-1)  = {}", a.evaluate(t)?);
    println!("a'(-1) = {}", a.derivative(t)?);

    // On the cut t > 1 the value is the limit from below the axis.
    println!("a(1.05) = {}", a.evaluate(Complex64::new(1.05, 0.0))?);

    let fc = a.fourier_coefficients(4)?;
    for j in -1..=4 {
        println!("a_{j:<2} = {:+.10}", fc.get(j).unwrap().re);
    }

    // Newton inversion back to the preimage.
    let lambda = a.evaluate(Complex64::from_polar(1.05, -2.0))?;
    let pre = a.invert(lambda, Complex64::from_polar(1.0, -2.0))?;
    println!("invert(a(1.05 e^-2i)) = {pre} (|t| = {:.12})", pre.norm());

    for z in [Complex64::new(-0.5, 0.0), Complex64::new(10.0, 0.0)] {
        println!("winding number about {z}: {}", a.is_inside_range(z, 4096)?);
    }

    // A non-trivial f: coefficients of f are given lowest degree first.
    let b = SymbolParams::new(0.4, vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, -0.2)])?;
    println!("b(i) = {} (real symbol: {})", b.evaluate(Complex64::new(0.0, 1.0))?, b.is_real());
    Ok(())
}
