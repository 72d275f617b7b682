use std::f64::consts::TAU;
use std::sync::OnceLock;

use matrixless::harness::{extreme_window, parse_epsilon, regime};
use matrixless::inner::CoefficientTable;
use matrixless::{
    approximate_spectrum, basis_ordering, interpolate_coefficient, run_precompute, toeplitz_spectrum, Cache,
    Complex64, DoubleDouble, Regime, RunConfig, SymbolParams, ToeplitzOperator,
};
use proptest::prelude::*;

fn small_cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut cfg = RunConfig::new(SymbolParams::model(0.75).unwrap(), 24);
        cfg.k_inner = 4;
        cfg.k_extreme = 3;
        cfg.j0 = 6;
        cfg.epsilon = 0.125;
        run_precompute(&cfg).unwrap()
    })
}

fn polynomial_table(n1: usize, k: usize, poly: &[Complex64]) -> CoefficientTable {
    let row: Vec<Complex64> = (1..=n1)
        .map(|j1| {
            let w = Complex64::from_polar(1.0, -TAU * j1 as f64 / n1 as f64);
            poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
        })
        .collect();
    CoefficientTable {
        alpha: 0.75,
        n1,
        k,
        basis: basis_ordering(0.75, k - 1),
        grid_values: vec![row; k - 1],
    }
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #[test]
    fn basis_is_strictly_ordered(alpha in 0.05..0.95f64, count in 1usize..24) {
        let b = basis_ordering(alpha, count);
        prop_assert_eq!(b.len(), count);
        prop_assert_eq!(b[0].exponent, 1.0);
        for w in b.windows(2) {
            let strictly = w[0].exponent < w[1].exponent - 1e-12;
            let tie = (w[0].exponent - w[1].exponent).abs() <= 1e-12 && w[0].ell > w[1].ell;
            prop_assert!(strictly || tie, "{:?} then {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn toeplitz_is_lower_hessenberg(alpha in 0.05..0.95f64, n in 2usize..40) {
        let op = ToeplitzOperator::from_symbol(&SymbolParams::model(alpha).unwrap(), n).unwrap();
        for r in 0..n {
            for c in 0..n {
                let e = op.entry(r, c);
                if c > r + 1 {
                    prop_assert_eq!(e, Complex64::new(0.0, 0.0));
                }
                if c == r + 1 {
                    prop_assert_eq!(e, Complex64::new(1.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn newton_inversion_round_trips(
        alpha in 0.1..0.9f64,
        radius in 1.01..1.3f64,
        angle in 0.2..(TAU - 0.2),
        nudge in complex(),
    ) {
        let symbol = SymbolParams::model(alpha).unwrap();
        let t = Complex64::from_polar(radius, angle);
        let lambda = symbol.evaluate(t).unwrap();
        let seed = t + nudge * 1e-4;
        let found = symbol.invert(lambda, seed).unwrap();
        let residual = (symbol.evaluate(found).unwrap() - lambda).norm();
        prop_assert!(residual <= 1e-12 * (1.0 + lambda.norm()), "residual {residual:e}");
    }

    #[test]
    fn regimes_partition_the_indices(n in 2usize..2000, epsilon in 0.001..0.49f64) {
        let w = extreme_window(n, epsilon);
        let tags: Vec<Regime> = (1..=n).map(|j| regime(n, j, epsilon)).collect();
        prop_assert!(2 * w <= n);
        prop_assert!(tags[..w].iter().all(|&r| r == Regime::ExtremeLow));
        prop_assert!(tags[w..n - w].iter().all(|&r| r == Regime::Inner));
        prop_assert!(tags[n - w..].iter().all(|&r| r == Regime::ExtremeHigh));
    }

    #[test]
    fn epsilon_fractions_parse(p in 1u32..50, extra in 1u32..50) {
        let q = 2 * p + extra;
        let e = parse_epsilon(&format!("{p}/{q}")).unwrap();
        prop_assert_eq!(e, p as f64 / q as f64);
    }

    #[test]
    fn interpolation_reproduces_low_degree_polynomials(
        n1 in 16usize..80,
        poly in prop::collection::vec(complex(), 1..5),
        angle in 0.0..TAU,
    ) {
        // k = 2 gives 9 nodes, exact for polynomials of degree below 9.
        let table = polynomial_table(n1, 2, &poly);
        let omega = Complex64::from_polar(1.0, angle);
        let exact = poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * omega + c);
        let got = interpolate_coefficient(&table, 1, omega).unwrap();
        prop_assert!((got - exact).norm() < 1e-9 * (1.0 + exact.norm()), "{got} vs {exact}");
    }

    #[test]
    fn double_double_sum_cancels(a in -1e6..1e6f64, b in -1e6..1e6f64, tiny in -1e-20..1e-20f64) {
        let x = DoubleDouble::from(a) + DoubleDouble::from(tiny);
        let y = (x + DoubleDouble::from(b)) - DoubleDouble::from(b);
        let err = (y - x).abs().hi();
        prop_assert!(err <= 1e-30 * (a.abs() + b.abs() + 1.0), "{err:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trace_matches_eigenvalue_sum(alpha in 0.1..0.9f64, n in 2usize..60) {
        let symbol = SymbolParams::model(alpha).unwrap();
        let spectrum = toeplitz_spectrum::<f64>(&symbol, n).unwrap();
        let sum: Complex64 = spectrum.values().iter().sum();
        let a0 = symbol.fourier_coefficients(1).unwrap().get(0).unwrap();
        let trace = a0 * n as f64;
        prop_assert!((sum - trace).norm() < 1e-10 * n as f64, "{sum} vs {trace}");
    }

    #[test]
    fn real_symbol_output_is_conjugate_symmetric(n in 24usize..56) {
        let approx = approximate_spectrum(small_cache(), n, 4, 3, 0.125).unwrap();
        prop_assert_eq!(approx.len(), n);
        for j in 1..=n {
            let (a, b) = (approx[j - 1], approx[n - j]);
            prop_assert_eq!(a.j, j);
            prop_assert!((a.value - b.value.conj()).norm() <= 1e-14 * a.value.norm(), "j = {}", j);
        }
    }

    #[test]
    fn cache_round_trip_is_exact(n in 24usize..56) {
        let cache = small_cache();
        let text = cache.to_json().unwrap();
        let back = Cache::from_json(&text).unwrap();
        prop_assert_eq!(&back, cache);
        prop_assert_eq!(back.to_json().unwrap(), text);
        let before = approximate_spectrum(cache, n, 4, 3, 0.125).unwrap();
        let after = approximate_spectrum(&back, n, 4, 3, 0.125).unwrap();
        prop_assert_eq!(before, after);
    }
}

#[test]
fn precompute_is_deterministic() {
    let mut cfg = RunConfig::new(SymbolParams::model(0.75).unwrap(), 24);
    cfg.k_inner = 4;
    cfg.k_extreme = 3;
    cfg.j0 = 6;
    cfg.epsilon = 0.125;
    let again = run_precompute(&cfg).unwrap();
    assert_eq!(again.to_json().unwrap(), small_cache().to_json().unwrap());
}
