//! Fractional-calculus kernels and the diffusive realization of the tempered
//! Caputo derivative.
//!
//! The boundary damping `γ ∂_t^{α,η} u(1,t)` is realised by an infinite family
//! of relaxation ODEs indexed by `ξ ∈ ℝ`:
//!
//! ```text
//! ω_t(ξ,t) + (ξ² + η) ω(ξ,t) = μ(ξ) U(t),   μ(ξ) = |ξ|^{(2α-1)/2}
//! O(t) = κ(α) ∫ μ(ξ) ω(ξ,t) dξ,              κ(α) = sin(απ)/π
//! ```
//!
//! whose input/output map is the fractional integral `I^{1-α,η}`. In the
//! Laplace domain this reduces to the identity
//! `κ(α) ∫ |ξ|^{2α-1} / (λ + ξ² + η) dξ = (λ + η)^{α-1}`, which is what
//! [`XiGrid`] is designed and verified against.

mod kernels;
mod transfer;
mod xi_grid;

pub use kernels::{
    caputo_direct, caputo_direct_with, centered_derivative, frac_integral_direct,
    fractional_integral, product_integration_weights, SampledSignal,
};
pub use transfer::{
    a1_closed_form, a_integrals, c1_c2, closed_form_transfer, diffusive_transfer, transfer_with_kappa, AIntegrals,
};
pub use xi_grid::{build_xi_grid, XiGrid, XiGridSpec, DEFAULT_NODE_CAP, DEFAULT_TARGET_TOL};

use std::f64::consts::PI;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FracError {
    #[error("fractional order must lie in (0, 1), got {0}")]
    OrderOutOfRange(f64),
    #[error("tempering weight eta must be >= 0, got {0}")]
    NegativeEta(f64),
    #[error("damping gain gamma must be > 0, got {0}")]
    NonPositiveGamma(f64),
    #[error("time grid is not uniform (step {first} vs {offending} at index {index})")]
    NonUniformGrid { index: usize, first: f64, offending: f64 },
    #[error("time grid must start at 0 with a positive step")]
    BadTimeOrigin,
    #[error("times and values differ in length ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("lambda = {0} hits a pole lambda + xi^2 + eta = 0 of the grid")]
    PoleHit(num_complex::Complex64),
    #[error("c1/c2 need eta > 0 or lambda != 0")]
    DegenerateFrequency,
    #[error("lambda_ref must be positive and finite, got {0}")]
    BadLambdaRef(f64),
    #[error("target tolerance {0} outside the supported range (1e-12, 1e-2)")]
    ToleranceOutOfRange(f64),
    #[error("verification band [{lo}, {hi}] is invalid")]
    BadBand { lo: f64, hi: f64 },
    #[error("xi-grid needs {needed} nodes, above the cap of {cap} (best error {best_error:.3e})")]
    NodeCapExceeded { needed: usize, cap: usize, best_error: f64 },
}

/// Order, tempering and gain of the fractional boundary damping.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FracParams {
    alpha: f64,
    eta: f64,
    gamma: f64,
}

impl FracParams {
    pub fn new(alpha: f64, eta: f64, gamma: f64) -> Result<Self, FracError> {
        let p = Self::undamped(alpha, eta)?;
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(FracError::NonPositiveGamma(gamma));
        }
        Ok(FracParams { gamma, ..p })
    }

    /// Parameters with `γ = 0`, i.e. the boundary damping switched off.
    ///
    /// Only meaningful for the conservative-limit simulations; every spectral
    /// and decay computation assumes `γ > 0`.
    pub fn undamped(alpha: f64, eta: f64) -> Result<Self, FracError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(FracError::OrderOutOfRange(alpha));
        }
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(FracError::NegativeEta(eta));
        }
        Ok(FracParams { alpha, eta, gamma: 0.0 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `κ(α) = sin(απ)/π`, strictly positive on (0, 1).
    pub fn kappa(&self) -> f64 {
        kappa(self.alpha)
    }

    pub fn is_damped(&self) -> bool {
        self.gamma > 0.0
    }
}

pub fn kappa(alpha: f64) -> f64 {
    (alpha * PI).sin() / PI
}

/// `μ(ξ) = |ξ|^{(2α-1)/2}`.
///
/// Grids never contain `ξ = 0`, where μ vanishes (α > 1/2) or blows up
/// (α < 1/2).
pub fn mu(xi: f64, alpha: f64) -> f64 {
    xi.abs().powf(alpha - 0.5)
}

/// `Γ(x)` for real arguments.
pub fn gamma_fn(x: f64) -> f64 {
    libm::tgamma(x)
}
