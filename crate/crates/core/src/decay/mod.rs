//! Polynomial decay rates: the predicted exponent for given parameters, a
//! log-log fit of simulated energy, and the comparison with the spectral
//! abscissa exponent.

mod predict;
mod rate_fit;
mod report;

pub use predict::{predicted_exponent, rational_approx, small_coupling_bound, Prediction, RateCase};
pub use rate_fit::{fit_decay_exponent, fit_default_window, DecayFit, MIN_WINDOW_RATIO, MIN_WINDOW_SAMPLES};
pub use report::{spectral_vs_energy_report, DecayReport, ABSCISSA_REL_TOL, ENERGY_REL_TOL, PRE_ASYMPTOTIC_R2};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum DecayError {
    #[error("fit window [{lo}, {hi}] is invalid")]
    BadWindow { lo: f64, hi: f64 },
    #[error("fit window [{lo}, {hi}] spans less than a factor {MIN_WINDOW_RATIO} in t")]
    WindowTooNarrow { lo: f64, hi: f64 },
    #[error("only {got} samples in the fit window, need {MIN_WINDOW_SAMPLES}")]
    TooFewSamples { got: usize },
    #[error("energy is not positive at t = {t} ({energy})")]
    NonPositiveEnergy { t: f64, energy: f64 },
}
