use super::{asymptotic_root, refine_root, BranchId, EigenEstimate, Evaluator, RefineOptions};
use super::{SpectrumError, SystemParams};
use crate::fit::{loglog, LineFit};
use crate::Execution;

/// Minimum number of converged roots for a slope fit.
pub const MIN_FIT_ROOTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ScanRoot {
    pub branch: u8,
    pub n: i64,
    pub estimate: EigenEstimate,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AbscissaScan {
    pub params: SystemParams,
    pub branch: u8,
    pub n_range: (i64, i64),
    pub roots: Vec<ScanRoot>,
    /// Fit of `ln|Re λ_n|` against `ln n`.
    pub fit: LineFit,
}

impl AbscissaScan {
    pub fn slope(&self) -> f64 {
        self.fit.slope
    }

    /// `ℓ` in `|Re λ_n| ~ n^{-ℓ}`.
    pub fn exponent(&self) -> f64 {
        -self.fit.slope
    }
}

/// Refines every root `n_lo ≤ n ≤ n_hi` of one branch (in parallel when
/// enabled) and fits `|Re λ_n|` against `n` on log-log axes.
pub fn abscissa_scan(
    p: &SystemParams,
    branch: u8,
    n_range: (i64, i64),
    n0: i64,
    opts: &RefineOptions,
    exec: Execution,
) -> Result<AbscissaScan, SpectrumError> {
    let (lo, hi) = n_range;
    if lo > hi || lo < n0.max(1) {
        return Err(SpectrumError::BadRange { lo, hi });
    }
    let ev = Evaluator::for_params(p);
    let ns: Vec<i64> = (lo..=hi).collect();
    let ids = ns
        .iter()
        .map(|&n| BranchId::new(p, branch, n))
        .collect::<Result<Vec<_>, _>>()?;
    let seeds = ids
        .iter()
        .map(|id| asymptotic_root(id, p, n0))
        .collect::<Result<Vec<_>, _>>()?;
    let estimates = exec.map(&seeds, |&s| refine_root(s, |z| ev.eval(z), opts));
    let failed: Vec<i64> = ns
        .iter()
        .zip(&estimates)
        .filter(|(_, e)| !e.converged)
        .map(|(&n, _)| n)
        .collect();
    if !failed.is_empty() {
        return Err(SpectrumError::RefinementFailed { failed });
    }
    let roots: Vec<ScanRoot> = ns
        .iter()
        .zip(estimates)
        .map(|(&n, estimate)| ScanRoot { branch, n, estimate })
        .collect();
    let usable: Vec<&ScanRoot> = roots.iter().filter(|r| r.estimate.lambda.re != 0.0).collect();
    if usable.len() < MIN_FIT_ROOTS {
        return Err(SpectrumError::TooFewRoots { needed: MIN_FIT_ROOTS, got: usable.len() });
    }
    let x: Vec<f64> = usable.iter().map(|r| r.n as f64).collect();
    let y: Vec<f64> = usable.iter().map(|r| r.estimate.lambda.re).collect();
    let fit = loglog(&x, &y).ok_or(SpectrumError::TooFewRoots { needed: MIN_FIT_ROOTS, got: 0 })?;
    Ok(AbscissaScan { params: *p, branch, n_range, roots, fit })
}
