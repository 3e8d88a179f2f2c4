//! Numerical laboratory for two wave equations coupled by velocities, with a
//! single tempered-Caputo boundary damping at `x = 1`.
//!
//! The crate is organised bottom-up:
//!
//! - [`frac`]: fractional kernels, the diffusive (ξ-variable) realization and
//!   its quadrature grid, plus the closed-form transfer identities.
//! - [`spectrum`]: characteristic functions, the strong-stability condition,
//!   asymptotic eigenvalue branches and Newton refinement.
//! - [`simulator`]: a Crank–Nicolson solver for the augmented system with
//!   exact discrete energy bookkeeping.
//! - [`decay`]: predicted decay exponents, power-law fits and the
//!   spectral/energy consistency report.
//! - [`io`]: CSV and JSON writers shared by the command-line front end.
//! - [`verify`]: the invariant suite behind the `verify` command.
//!
//! Data-parallel loops go through [`Execution`]; with the `parallel` feature
//! disabled every path runs sequentially.

pub mod decay;
mod exec;
pub mod fit;
pub mod frac;
pub mod io;
pub mod simulator;
pub mod spectrum;
pub mod verify;

pub use exec::Execution;
