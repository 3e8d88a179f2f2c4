use super::DecayError;
use crate::fit::loglog;
use crate::simulator::EnergyTrace;

/// The window must span at least this factor in `t`.
pub const MIN_WINDOW_RATIO: f64 = 4.0;
pub const MIN_WINDOW_SAMPLES: usize = 3;

/// `E(t) ≈ C t^{-exponent}` on `window`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub r_squared: f64,
    pub samples: usize,
}

/// Least squares of `ln E` on `ln t` over the samples with `t` in `window`.
pub fn fit_decay_exponent(trace: &EnergyTrace, window: (f64, f64)) -> Result<DecayFit, DecayError> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(DecayError::BadWindow { lo, hi });
    }
    // [T/4, T] is allowed; the slack absorbs rounding in T/4
    if hi < MIN_WINDOW_RATIO * lo * (1.0 - 1e-12) {
        return Err(DecayError::WindowTooNarrow { lo, hi });
    }
    let mut t = Vec::new();
    let mut e = Vec::new();
    for (&ti, &ei) in trace.times.iter().zip(&trace.energy) {
        if ti < lo || ti > hi {
            continue;
        }
        if !(ei > 0.0) {
            return Err(DecayError::NonPositiveEnergy { t: ti, energy: ei });
        }
        t.push(ti);
        e.push(ei);
    }
    if t.len() < MIN_WINDOW_SAMPLES {
        return Err(DecayError::TooFewSamples { got: t.len() });
    }
    let f = loglog(&t, &e).ok_or(DecayError::TooFewSamples { got: t.len() })?;
    Ok(DecayFit { exponent: -f.slope, stderr: f.slope_stderr, window, r_squared: f.r_squared, samples: t.len() })
}

/// Fit on `[T/4, T]`, `T` the last recorded time.
pub fn fit_default_window(trace: &EnergyTrace) -> Result<DecayFit, DecayError> {
    let t = trace.times.last().copied().unwrap_or(0.0);
    fit_decay_exponent(trace, (0.25 * t, t))
}
