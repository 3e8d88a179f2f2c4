use super::{predicted_exponent, DecayFit, Prediction};
use crate::spectrum::{AbscissaScan, SystemParams};

/// Relative agreement required between the abscissa exponent and `2/s`.
pub const ABSCISSA_REL_TOL: f64 = 0.1;
/// Relative agreement required between the fitted and predicted exponents.
pub const ENERGY_REL_TOL: f64 = 0.3;
/// Fits with `r²` below this are reported as pre-asymptotic.
pub const PRE_ASYMPTOTIC_R2: f64 = 0.98;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DecayReport {
    pub params: SystemParams,
    pub predicted: Prediction,
    /// `ℓ` in `|Re λ_n| ~ n^{-ℓ}`.
    pub abscissa_exponent: f64,
    /// `2/s`, what `ℓ` should be.
    pub expected_abscissa_exponent: Option<f64>,
    pub abscissa_consistent: bool,
    pub fitted_exponent: Option<f64>,
    pub window: Option<(f64, f64)>,
    pub r_squared: Option<f64>,
    pub pre_asymptotic: bool,
    /// `None` without a fit or when the fit is pre-asymptotic.
    pub energy_consistent: Option<bool>,
    /// The scan was computed for other parameters.
    pub params_mismatch: bool,
    pub consistent: bool,
}

/// Cross-checks the spectral abscissa exponent and (optionally) an energy fit
/// against the predicted rate.
pub fn spectral_vs_energy_report(p: &SystemParams, scan: &AbscissaScan, fit: Option<&DecayFit>) -> DecayReport {
    let predicted = predicted_exponent(p);
    let ell = scan.exponent();
    let expected = predicted.abscissa_exponent();
    let abscissa_consistent = expected.is_some_and(|l| (ell - l).abs() <= ABSCISSA_REL_TOL * l);
    let pre_asymptotic = fit.is_some_and(|f| f.r_squared < PRE_ASYMPTOTIC_R2);
    let energy_consistent = match (fit, predicted.exponent) {
        (Some(f), Some(s)) if !pre_asymptotic => Some((f.exponent - s).abs() <= ENERGY_REL_TOL * s),
        _ => None,
    };
    let params_mismatch = scan.params != *p;
    let consistent = !params_mismatch && abscissa_consistent && energy_consistent != Some(false);
    DecayReport {
        params: *p,
        predicted,
        abscissa_exponent: ell,
        expected_abscissa_exponent: expected,
        abscissa_consistent,
        fitted_exponent: fit.map(|f| f.exponent),
        window: fit.map(|f| f.window),
        r_squared: fit.map(|f| f.r_squared),
        pre_asymptotic,
        energy_consistent,
        params_mismatch,
        consistent,
    }
}
