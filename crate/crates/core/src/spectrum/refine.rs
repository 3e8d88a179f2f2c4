use num_complex::Complex64;
use std::f64::consts::PI;

use super::SpectrumError;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RefineOptions {
    /// Residual bound on the (scaled) characteristic function.
    pub tol: f64,
    pub max_iter: usize,
    /// A converged root must stay this close to its seed. Roots on one branch
    /// are `π` apart and the two branches interleave at `π/2`, so `π/4`
    /// keeps each seed in its own cell.
    pub cell_radius: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions { tol: 1e-10, max_iter: 60, cell_radius: PI / 4.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EigenEstimate {
    pub lambda: Complex64,
    pub seed: Complex64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Safeguarded Newton iteration from `seed`.
///
/// The derivative is a central difference with step `1e-6·max(1, |λ|)`.
/// Each step is halved until the residual does not grow. Iteration continues
/// past the tolerance until the step reaches rounding level, so that tiny
/// real parts are resolved. Never panics; failures come back with
/// `converged = false`.
pub fn refine_root<F>(seed: Complex64, f: F, opts: &RefineOptions) -> EigenEstimate
where
    F: Fn(Complex64) -> Result<Complex64, SpectrumError>,
{
    let eval = |z: Complex64| -> f64 {
        match f(z) {
            Ok(v) if v.is_finite() => v.norm(),
            _ => f64::INFINITY,
        }
    };
    let mut z = seed;
    let mut fz = match f(z) {
        Ok(v) if v.is_finite() => v,
        _ => {
            return EigenEstimate { lambda: z, seed, residual: f64::INFINITY, iterations: 0, converged: false }
        }
    };
    let mut iterations = 0;
    let mut last_step = f64::INFINITY;
    while iterations < opts.max_iter && fz.norm() > 0.0 {
        iterations += 1;
        let h = 1e-6 * z.norm().max(1.0);
        let (Ok(fp), Ok(fm)) = (f(z + h), f(z - h)) else { break };
        let d = (fp - fm) / (2.0 * h);
        if d.norm() == 0.0 || !d.is_finite() {
            break;
        }
        let mut step = -fz / d;
        let r0 = fz.norm();
        let mut accepted = None;
        for _ in 0..40 {
            let cand = z + step;
            let rc = eval(cand);
            if rc <= r0 {
                accepted = Some(cand);
                break;
            }
            step *= 0.5;
        }
        let Some(next) = accepted else { break };
        let size = step.norm();
        z = next;
        fz = match f(z) {
            Ok(v) => v,
            Err(_) => break,
        };
        let tiny = size <= 4.0 * f64::EPSILON * z.norm().max(1.0);
        let stalled = fz.norm() <= opts.tol && size >= last_step;
        if tiny || stalled {
            break;
        }
        last_step = size;
    }
    let residual = fz.norm();
    let converged =
        residual.is_finite() && residual <= opts.tol && (z - seed).norm() < opts.cell_radius;
    EigenEstimate { lambda: z, seed, residual, iterations, converged }
}
