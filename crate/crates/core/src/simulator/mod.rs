//! Time-domain solver for the augmented system
//!
//! ```text
//! u_tt - u_xx + b y_t = 0,   y_tt - a y_xx - b u_t = 0        on (0, 1)
//! ω_t + (ξ² + η) ω = μ(ξ) u_t(1)                            for ξ ∈ ℝ
//! u(0) = 0,  y(0) = y(1) = 0,  u_x(1) + γκ ∫ μ ω dξ = 0
//! ```
//!
//! discretized by centered finite differences in `x`, the ξ-quadrature of
//! [`crate::frac::XiGrid`] for the diffusive variable, and Crank–Nicolson in
//! time.

mod assemble;
mod banded;
mod initial;
mod run;
mod stepper;

pub use assemble::{assemble, SemiDiscreteSystem};
pub use initial::InitialData;
pub use run::{run, run_many, simulation_xi_grid, EnergyTrace, SimConfig};
pub use stepper::{step_cn, CrankNicolson};

use crate::frac::FracError;
use crate::spectrum::SpectrumError;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SimError {
    #[error("need at least 16 cells, got {0}")]
    TooFewCells(usize),
    #[error("time step must be positive and finite, got {0}")]
    BadTimeStep(f64),
    #[error("final time must be positive and finite, got {0}")]
    BadFinalTime(f64),
    #[error("initial data violate the boundary constraint on {0}")]
    BoundaryViolation(&'static str),
    #[error("{field} has {got} samples, expected {expected}")]
    SampleLength { field: &'static str, got: usize, expected: usize },
    #[error("state does not match the system dimensions")]
    ShapeMismatch,
    #[error("Crank-Nicolson matrix is singular (zero pivot in column {0})")]
    SingularStep(usize),
    #[error("no exceptional mode for this configuration: {0}")]
    NoMode(String),
    #[error(transparent)]
    Frac(#[from] FracError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

/// Uniform nodes `x_i = i h`, `i = 0..=n_cells`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SpatialGrid {
    n_cells: usize,
}

pub const MIN_CELLS: usize = 16;

impl SpatialGrid {
    pub fn new(n_cells: usize) -> Result<Self, SimError> {
        if n_cells < MIN_CELLS {
            return Err(SimError::TooFewCells(n_cells));
        }
        Ok(SpatialGrid { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.n_cells {
            1.0
        } else {
            i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n_cells).map(|i| self.x(i)).collect()
    }
}

/// Nodal values of `(u, u_t, y, y_t)` on `x_0..x_N` plus ω on the ξ-nodes.
///
/// The Dirichlet values `u_0 = v_0 = 0` and `y_0 = y_N = z_0 = z_N = 0` are
/// stored but never evolved.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
    pub omega: Vec<f64>,
    pub t: f64,
}

impl SimState {
    pub fn zeros(n_cells: usize, n_xi: usize) -> Self {
        let z = vec![0.0; n_cells + 1];
        SimState { u: z.clone(), v: z.clone(), y: z.clone(), z, omega: vec![0.0; n_xi], t: 0.0 }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let s = |w: &Vec<f64>| w.iter().map(|x| c * x).collect();
        SimState { u: s(&self.u), v: s(&self.v), y: s(&self.y), z: s(&self.z), omega: s(&self.omega), t: self.t }
    }

    pub fn is_zero(&self) -> bool {
        [&self.u, &self.v, &self.y, &self.z, &self.omega].iter().all(|w| w.iter().all(|&x| x == 0.0))
    }

    fn check_boundary(&self) -> Result<(), SimError> {
        let n = self.u.len() - 1;
        if self.u[0] != 0.0 || self.v[0] != 0.0 {
            return Err(SimError::BoundaryViolation("u(0)"));
        }
        if self.y[0] != 0.0 || self.y[n] != 0.0 || self.z[0] != 0.0 || self.z[n] != 0.0 {
            return Err(SimError::BoundaryViolation("y(0), y(1)"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        assert_eq!(SpatialGrid::new(8), Err(SimError::TooFewCells(8)));
        let g = SpatialGrid::new(16).unwrap();
        assert_eq!(g.h(), 1.0 / 16.0);
        let x = g.nodes();
        assert_eq!((x[0], x[16]), (0.0, 1.0));
        assert!(x.windows(2).all(|w| (w[1] - w[0] - g.h()).abs() < 1e-15));
    }

    #[test]
    fn state_helpers() {
        let mut s = SimState::zeros(16, 4);
        assert!(s.is_zero());
        assert!(s.check_boundary().is_ok());
        s.y[16] = 1.0;
        assert_eq!(s.check_boundary(), Err(SimError::BoundaryViolation("y(0), y(1)")));
        s.y[16] = 0.0;
        s.u[3] = 2.0;
        assert_eq!(s.scaled(0.5).u[3], 1.0);
    }
}
