//! Spectral side of the damped coupled system.
//!
//! Eigenvalues of the generator are zeros of a characteristic function built
//! from a 2×2 boundary determinant: [`char_f`] for equal wave speeds (`a = 1`)
//! and [`char_F`] otherwise. Large roots come in two branches hugging the
//! imaginary axis; [`asymptotic_root`] gives their closed-form expansions,
//! [`refine_root`] polishes them with a safeguarded Newton iteration and
//! [`abscissa_scan`] fits how fast `Re λ_n` tends to zero.

mod asymptotics;
mod charfn;
mod refine;
mod sc;
mod scan;

pub use asymptotics::{asymptotic_root, DEFAULT_N0};
pub use charfn::{char_F, char_f, Evaluator};
pub use refine::{refine_root, EigenEstimate, RefineOptions};
pub use sc::{exceptional_eigenpair, sc_check, ExceptionalPair, ScWitness, DEFAULT_K_MAX, SC_REL_TOL};
pub use scan::{abscissa_scan, AbscissaScan, ScanRoot, MIN_FIT_ROOTS};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::frac::{FracError, FracParams};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("wave-speed ratio a must be positive and finite, got {0}")]
    BadSpeedRatio(f64),
    #[error("coupling b must be nonzero and finite, got {0}")]
    BadCoupling(f64),
    #[error("characteristic function is not defined at lambda = 0")]
    ZeroLambda,
    #[error("char_f needs a = 1 and char_F needs a != 1 (a = {0})")]
    WrongEvaluator(f64),
    #[error("branch must be 1 or 2, got {0}")]
    BadBranch(u8),
    #[error("|n| = {n} is below n0 = {n0}")]
    IndexBelowN0 { n: i64, n0: i64 },
    #[error("branch case {id:?} does not match b = {b}")]
    CaseMismatch { id: BCase, b: f64 },
    #[error("pair ({k1}, {k2}) gives no exceptional coupling (value {value})")]
    NotExceptional { k1: i64, k2: i64, value: f64 },
    #[error("pair ({k1}, {k2}) has k1^2 = a k2^2")]
    DegeneratePair { k1: i64, k2: i64 },
    #[error("k_max must be at least 1")]
    BadKMax,
    #[error("n range [{lo}, {hi}] is empty or below n0")]
    BadRange { lo: i64, hi: i64 },
    #[error("root refinement failed for n = {failed:?}")]
    RefinementFailed { failed: Vec<i64> },
    #[error("need at least {needed} converged roots for a fit, got {got}")]
    TooFewRoots { needed: usize, got: usize },
    #[error(transparent)]
    Frac(#[from] FracError),
}

/// `a`, `b` and the boundary damping data.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SystemParams {
    a: f64,
    b: f64,
    frac: FracParams,
}

impl SystemParams {
    pub fn new(a: f64, b: f64, frac: FracParams) -> Result<Self, SpectrumError> {
        if !(b != 0.0 && b.is_finite()) {
            return Err(SpectrumError::BadCoupling(b));
        }
        Self::uncoupled(a, frac).map(|p| SystemParams { b, ..p })
    }

    /// `b = 0`: two independent wave equations. Only used for structural
    /// checks of the discretization.
    pub fn uncoupled(a: f64, frac: FracParams) -> Result<Self, SpectrumError> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(SpectrumError::BadSpeedRatio(a));
        }
        Ok(SystemParams { a, b: 0.0, frac })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn frac(&self) -> &FracParams {
        &self.frac
    }

    pub fn alpha(&self) -> f64 {
        self.frac.alpha()
    }

    pub fn eta(&self) -> f64 {
        self.frac.eta()
    }

    pub fn gamma(&self) -> f64 {
        self.frac.gamma()
    }

    pub fn equal_speeds(&self) -> bool {
        self.a == 1.0
    }

    pub fn b_case(&self) -> BCase {
        BCase::classify(self.b)
    }
}

/// Where `b` sits relative to `πℤ`; selects the asymptotic regime for `a = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BCase {
    Generic,
    BIn2PiZ,
    BInPiOdd,
}

/// Tolerance on `|b/π - round(b/π)|`.
pub const B_CASE_TOL: f64 = 1e-9;

impl BCase {
    pub fn classify(b: f64) -> BCase {
        let q = b / PI;
        let k = q.round();
        if k == 0.0 || (q - k).abs() > B_CASE_TOL {
            BCase::Generic
        } else if k.rem_euclid(2.0) == 0.0 {
            BCase::BIn2PiZ
        } else {
            BCase::BInPiOdd
        }
    }
}

/// One large root: branch 1 or 2 and its index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub struct BranchId {
    pub branch: u8,
    pub n: i64,
    pub b_case: BCase,
}

impl BranchId {
    pub fn new(p: &SystemParams, branch: u8, n: i64) -> Result<Self, SpectrumError> {
        if branch != 1 && branch != 2 {
            return Err(SpectrumError::BadBranch(branch));
        }
        Ok(BranchId { branch, n, b_case: p.b_case() })
    }
}

/// `i cos(πα/2) - sin(πα/2)`, i.e. `i·e^{iπα/2}`; the phase of the damping
/// correction `(iλ)^{α-1}` seen along the imaginary axis.
pub(crate) fn damping_phase(alpha: f64) -> Complex64 {
    let t = PI * alpha / 2.0;
    Complex64::new(-t.sin(), t.cos())
}
