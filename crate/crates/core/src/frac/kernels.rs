use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use super::{gamma_fn, FracError, FracParams};
use crate::Execution;

/// Samples `ω(t_k)` on the uniform grid `t_k = k·dt`, `k = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    dt: f64,
    values: Vec<f64>,
}

impl SampledSignal {
    pub fn uniform(dt: f64, values: Vec<f64>) -> Result<Self, FracError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(FracError::BadTimeOrigin);
        }
        Ok(SampledSignal { dt, values })
    }

    /// Samples `f` at `t_k = k·dt` for `k = 0..n`.
    pub fn from_fn(dt: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self, FracError> {
        Self::uniform(dt, (0..n).map(|k| f(k as f64 * dt)).collect())
    }

    /// Builds a signal from explicit sample times, rejecting grids that do
    /// not start at zero or are not uniform to 1e-9 relative.
    pub fn from_samples(times: &[f64], values: Vec<f64>) -> Result<Self, FracError> {
        if times.len() != values.len() {
            return Err(FracError::LengthMismatch { times: times.len(), values: values.len() });
        }
        if times.len() < 2 || times[0] != 0.0 {
            return Err(FracError::BadTimeOrigin);
        }
        let dt = times[1] - times[0];
        for (k, w) in times.windows(2).enumerate() {
            let step = w[1] - w[0];
            if (step - dt).abs() > 1e-9 * dt.abs().max(f64::MIN_POSITIVE) {
                return Err(FracError::NonUniformGrid { index: k + 1, first: dt, offending: step });
            }
        }
        Self::uniform(dt, values)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }
}

/// Fourth-order finite-difference derivative: five-point centered in the
/// interior, five-point one-sided on the two samples nearest each end.
///
/// Exact for polynomials of degree four or less.
pub fn centered_derivative(signal: &SampledSignal) -> Result<SampledSignal, FracError> {
    let w = signal.values();
    let n = w.len();
    if n < 5 {
        return Err(FracError::TooFewSamples { needed: 5, got: n });
    }
    let inv = 1.0 / (12.0 * signal.dt());
    let left0 = |v: &[f64]| -25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4];
    let left1 = |v: &[f64]| -3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4];
    let rev: Vec<f64> = w[n - 5..].iter().rev().copied().collect();
    let mut d = Vec::with_capacity(n);
    d.push(left0(w) * inv);
    d.push(left1(w) * inv);
    for k in 2..n - 2 {
        d.push((w[k - 2] - 8.0 * w[k - 1] + 8.0 * w[k + 1] - w[k + 2]) * inv);
    }
    d.push(-left1(&rev) * inv);
    d.push(-left0(&rev) * inv);
    SampledSignal::uniform(signal.dt(), d)
}

/// Product-integration weights for `∫_0^{t_k} (t_k - s)^{β-1} g(s) ds` with
/// `g` replaced by piecewise quadratics.
///
/// On the interval `[t_{k-m}, t_{k-m+1}]`, `m ≥ 2`, `g` is interpolated
/// through `t_{k-m}, t_{k-m+1}, t_{k-m+2}`; entry `m` holds the three
/// resulting weights (in units of `dt^β`). Entries 0 and 1 are unused: the
/// interval touching `t_k` uses the backward stencil of [`last_interval`].
pub fn product_integration_weights(beta: f64, n: usize) -> Vec<[f64; 3]> {
    let rule = GaussLegendre::new(NonZeroUsize::new(16).expect("nonzero"));
    let pairs = rule.as_node_weight_pairs();
    let mut q = vec![[0.0; 3]; n.max(2)];
    for (m, qm) in q.iter_mut().enumerate().skip(2) {
        let mf = m as f64;
        for &(u, wq) in pairs {
            let x = 0.5 * (u + 1.0);
            let k = 0.5 * wq * (mf - x).powf(beta - 1.0);
            qm[0] += k * 0.5 * (x - 1.0) * (x - 2.0);
            qm[1] -= k * x * (x - 2.0);
            qm[2] += k * 0.5 * x * (x - 1.0);
        }
    }
    q
}

/// Weights on `g_{k-2}, g_{k-1}, g_k` for the interval ending at `t_k`,
/// exact through the moments `∫_0^1 (1-x)^{β-1} x^p dx`.
fn last_interval(beta: f64) -> [f64; 3] {
    let m0 = 1.0 / beta;
    let m1 = m0 / (beta + 1.0);
    let m2 = 2.0 * m1 / (beta + 2.0);
    [0.5 * (m2 - m1), m0 - m2, 0.5 * (m2 + m1)]
}

/// Tempered Riemann–Liouville integral
/// `I^{β,η} g(t) = ∫_0^t (t-s)^{β-1} e^{-η(t-s)} g(s) ds / Γ(β)`.
///
/// The exponential is folded into the sampled factor, so the scheme is exact
/// whenever `e^{-η(t-s)} g(s)` is piecewise quadratic on the grid (linear on
/// the very first step).
pub fn fractional_integral(
    signal: &SampledSignal,
    order: f64,
    eta: f64,
    exec: Execution,
) -> Result<SampledSignal, FracError> {
    if !(order > 0.0 && order < 1.0) {
        return Err(FracError::OrderOutOfRange(order));
    }
    if !(eta >= 0.0) {
        return Err(FracError::NegativeEta(eta));
    }
    let n = signal.len();
    let dt = signal.dt();
    let g = signal.values();
    let q = product_integration_weights(order, n);
    let last = last_interval(order);
    let scale = dt.powf(order) / gamma_fn(order);
    // decay[m] = e^{-η m dt}
    let decay: Vec<f64> = (0..n).map(|m| (-eta * m as f64 * dt).exp()).collect();
    let f = |k: usize, j: usize| decay[k - j] * g[j];
    let out = exec.map_range(n, |k| match k {
        0 => 0.0,
        1 => {
            let m0 = 1.0 / order;
            let m1 = m0 / (order + 1.0);
            scale * ((m0 - m1) * f(1, 0) + m1 * f(1, 1))
        }
        _ => {
            let mut acc = last[0] * f(k, k - 2) + last[1] * f(k, k - 1) + last[2] * f(k, k);
            for m in 2..=k {
                let j = k - m;
                acc += q[m][0] * f(k, j) + q[m][1] * f(k, j + 1) + q[m][2] * f(k, j + 2);
            }
            scale * acc
        }
    });
    SampledSignal::uniform(dt, out)
}

/// Tempered Caputo derivative
/// `(1/Γ(1-α)) ∫_0^t (t-s)^{-α} e^{-η(t-s)} ω'(s) ds`, computed as
/// `I^{1-α,η}` applied to fourth-order difference samples of `ω'`.
pub fn caputo_direct(signal: &SampledSignal, p: &FracParams) -> Result<SampledSignal, FracError> {
    caputo_direct_with(signal, p, Execution::default())
}

pub fn caputo_direct_with(
    signal: &SampledSignal,
    p: &FracParams,
    exec: Execution,
) -> Result<SampledSignal, FracError> {
    let deriv = centered_derivative(signal)?;
    fractional_integral(&deriv, 1.0 - p.alpha(), p.eta(), exec)
}

/// `I^{α,η} ω` with the order taken from `p`.
pub fn frac_integral_direct(
    signal: &SampledSignal,
    p: &FracParams,
) -> Result<SampledSignal, FracError> {
    fractional_integral(signal, p.alpha(), p.eta(), Execution::default())
}
