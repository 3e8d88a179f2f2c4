use proptest::prelude::*;

use fracwave_core::decay::{fit_decay_exponent, predicted_exponent, DecayError};
use fracwave_core::frac::FracParams;
use fracwave_core::simulator::EnergyTrace;
use fracwave_core::spectrum::SystemParams;

fn power_law(c: f64, s: f64, t_final: f64, n: usize) -> EnergyTrace {
    let times: Vec<f64> = (0..=n).map(|k| t_final * k as f64 / n as f64).collect();
    let energy = times.iter().map(|&t| if t == 0.0 { c } else { c * t.powf(-s) }).collect();
    EnergyTrace { times, energy, dissipation: vec![0.0; n + 1], balance_residual: vec![0.0; n + 1] }
}

proptest! {
    #[test]
    fn exact_power_laws_are_recovered(c in 0.01f64..100.0, s in 0.1f64..8.0, t_final in 20.0f64..500.0) {
        let tr = power_law(c, s, t_final, 400);
        let fit = fit_decay_exponent(&tr, (t_final / 4.0, t_final)).unwrap();
        prop_assert!((fit.exponent - s).abs() < 1e-9, "{} vs {}", fit.exponent, s);
        prop_assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn scaling_energy_leaves_exponent_unchanged(s in 0.1f64..6.0, k in 1e-6f64..1e6) {
        let a = fit_decay_exponent(&power_law(1.0, s, 100.0, 200), (25.0, 100.0)).unwrap();
        let b = fit_decay_exponent(&power_law(k, s, 100.0, 200), (25.0, 100.0)).unwrap();
        prop_assert!((a.exponent - b.exponent).abs() < 1e-9);
    }

    #[test]
    fn narrow_windows_are_rejected(lo in 1.0f64..50.0, f in 1.01f64..3.99) {
        let r = fit_decay_exponent(&power_law(1.0, 2.0, 500.0, 500), (lo, lo * f));
        prop_assert!(matches!(r, Err(DecayError::WindowTooNarrow { .. })), "{r:?}");
    }

    #[test]
    fn prediction_matches_abscissa_scaling(alpha in 0.05f64..0.95, b in 0.1f64..3.0, pi_multiple in any::<bool>()) {
        let b = if pi_multiple { 2.0 * std::f64::consts::PI } else { b };
        let p = SystemParams::new(1.0, b, FracParams::new(alpha, 1.0, 1.0).unwrap()).unwrap();
        let pred = predicted_exponent(&p);
        // b in (0.1, 3) can hit an exceptional coupling, which has no prediction
        if let Some(s) = pred.exponent {
            let ell = if pi_multiple { 5.0 - alpha } else { 1.0 - alpha };
            prop_assert!((2.0 / s - ell).abs() < 1e-12);
            prop_assert_eq!(pred.abscissa_exponent(), Some(2.0 / s));
        }
    }
}

#[test]
fn exponential_trace_is_flagged_by_low_r2() {
    let n = 1000;
    let times: Vec<f64> = (0..=n).map(|k| 100.0 * k as f64 / n as f64).collect();
    let energy = times.iter().map(|t| (-t).exp()).collect();
    let tr = EnergyTrace { times, energy, dissipation: vec![0.0; n + 1], balance_residual: vec![0.0; n + 1] };
    let fit = fit_decay_exponent(&tr, (10.0, 100.0)).unwrap();
    assert!(fit.exponent > 20.0 && fit.r_squared < 0.98, "{fit:?}");
}
