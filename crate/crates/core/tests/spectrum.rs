use num_complex::Complex64;
use proptest::prelude::*;

use fracwave_core::frac::FracParams;
use fracwave_core::spectrum::{abscissa_scan, sc_check, Evaluator, RefineOptions, SystemParams, DEFAULT_N0};
use fracwave_core::Execution;

fn params(a: f64, b: f64, alpha: f64) -> SystemParams {
    SystemParams::new(a, b, FracParams::new(alpha, 1.0, 1.0).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn characteristic_function_is_conjugate_symmetric(
        a in prop_oneof![Just(1.0), 0.3f64..5.0],
        b in 0.1f64..5.0,
        alpha in 0.05f64..0.95,
        re in -2.0f64..1.0,
        im in 0.5f64..80.0,
    ) {
        let p = params(a, b, alpha);
        let ev = Evaluator::for_params(&p);
        let z = Complex64::new(re, im);
        let (f, g) = (ev.eval(z).unwrap(), ev.eval(z.conj()).unwrap());
        prop_assert!((f.conj() - g).norm() <= 1e-12 * f.norm().max(1.0));
    }

    #[test]
    fn sc_check_is_sign_symmetric(a in 0.3f64..5.0, b in 0.1f64..10.0) {
        let (p, q) = (params(a, b, 0.5), params(a, -b, 0.5));
        prop_assert_eq!(sc_check(&p, 20).unwrap(), sc_check(&q, 20).unwrap());
    }
}

#[test]
fn parallel_and_sequential_scans_are_identical() {
    let p = params(1.0, 1.0, 0.4);
    let o = RefineOptions::default();
    let a = abscissa_scan(&p, 2, (20, 80), DEFAULT_N0, &o, Execution::Parallel).unwrap();
    let b = abscissa_scan(&p, 2, (20, 80), DEFAULT_N0, &o, Execution::Sequential).unwrap();
    assert_eq!(a, b);
    assert!((a.exponent() - 0.6).abs() < 0.06, "exponent {}", a.exponent());
}
