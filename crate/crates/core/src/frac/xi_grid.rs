use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use super::transfer::{closed_form_transfer, transfer_with_kappa};
use super::{FracError, FracParams};

pub const DEFAULT_NODE_CAP: usize = 4096;
pub const DEFAULT_TARGET_TOL: f64 = 1e-8;

const PANEL_ORDER: usize = 8;
const INITIAL_PANEL_WIDTH: f64 = 2.0;
const SWEEP_POINTS: usize = 48;

/// Quadrature for `∫_ℝ (·) dξ` over the diffusive variable.
///
/// The integrands handled here are even in ξ, so only `ξ > 0` is stored and
/// the symmetry factor 2 is folded into the weights: `∫_ℝ g dξ ≈ Σ w_j g(ξ_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct XiGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    lambda_ref: f64,
    target_tol: f64,
    band: (f64, f64),
    achieved_error: f64,
}

impl XiGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn lambda_ref(&self) -> f64 {
        self.lambda_ref
    }

    pub fn target_tol(&self) -> f64 {
        self.target_tol
    }

    /// `|λ|` range of the verification sweep.
    pub fn band(&self) -> (f64, f64) {
        self.band
    }

    /// Worst relative transfer error seen on the verification sweep.
    pub fn achieved_error(&self) -> f64 {
        self.achieved_error
    }

    /// Sum of `w_j g(ξ_j)` over the grid.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

/// Design request for [`build_xi_grid`]-style construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiGridSpec {
    pub lambda_ref: f64,
    pub target_tol: f64,
    /// Verification band for `|λ|`; `None` means `[λ_ref/100, 100·λ_ref]`.
    pub band: Option<(f64, f64)>,
    pub node_cap: usize,
}

impl XiGridSpec {
    pub fn new(lambda_ref: f64, target_tol: f64) -> Self {
        XiGridSpec { lambda_ref, target_tol, band: None, node_cap: DEFAULT_NODE_CAP }
    }

    pub fn with_band(mut self, lo: f64, hi: f64) -> Self {
        self.band = Some((lo, hi));
        self
    }

    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = cap;
        self
    }

    /// Builds a grid whose transfer sum matches `(λ+η)^{α-1}` to `target_tol`
    /// (relative) on a log-spaced sweep of the band, both along the positive
    /// real axis and the imaginary axis.
    ///
    /// Nodes are placed through `ξ² = (λ_ref + η)·e^v`, i.e. log-spacing in
    /// `y - 1` for `y = 1 + ξ²/(λ_ref+η)`, with Gauss–Legendre panels in `v`.
    /// The `v`-range is cut where the algebraic tails `ξ^{2α-1}` (ξ → 0) and
    /// `ξ^{2α-3}` (ξ → ∞) fall below `target_tol/8`; panels are narrowed until
    /// the sweep passes or the node cap is hit.
    pub fn build(&self, p: &FracParams) -> Result<XiGrid, FracError> {
        let tol = self.target_tol;
        if !(tol > 1e-12 && tol < 1e-2) {
            return Err(FracError::ToleranceOutOfRange(tol));
        }
        if !(self.lambda_ref > 0.0 && self.lambda_ref.is_finite()) {
            return Err(FracError::BadLambdaRef(self.lambda_ref));
        }
        let (lo, hi) =
            self.band.unwrap_or((self.lambda_ref / 100.0, self.lambda_ref * 100.0));
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(FracError::BadBand { lo, hi });
        }
        let (alpha, eta) = (p.alpha(), p.eta());
        let scale = self.lambda_ref + eta;
        let z_min = lo.hypot(eta);
        let z_max = hi + eta;
        let tail = tol / 8.0;
        let v_lo = (z_min / scale).ln() + (alpha * tail).ln() / alpha;
        let v_hi = (z_max / scale).ln() + ((1.0 - alpha) * tail).ln() / (alpha - 1.0);

        let sweep = verification_sweep(lo, hi);
        let rule = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).expect("nonzero"));
        let mut width = INITIAL_PANEL_WIDTH;
        let mut best_error = f64::INFINITY;
        loop {
            let panels = ((v_hi - v_lo) / width).ceil().max(1.0) as usize;
            let needed = panels * PANEL_ORDER;
            if needed > self.node_cap {
                return Err(FracError::NodeCapExceeded { needed, cap: self.node_cap, best_error });
            }
            let h = (v_hi - v_lo) / panels as f64;
            let mut nodes = Vec::with_capacity(needed);
            let mut weights = Vec::with_capacity(needed);
            for k in 0..panels {
                let a = v_lo + k as f64 * h;
                // gauss-quad lists nodes in decreasing order
                let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
                pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
                for (x, w) in pairs {
                    let v = a + 0.5 * h * (x + 1.0);
                    let xi = (scale * v.exp()).sqrt();
                    // dξ = (ξ/2) dv, times 2 for the mirrored half-line
                    nodes.push(xi);
                    weights.push(0.5 * h * w * xi);
                }
            }
            let mut grid = XiGrid {
                nodes,
                weights,
                lambda_ref: self.lambda_ref,
                target_tol: tol,
                band: (lo, hi),
                achieved_error: f64::INFINITY,
            };
            let err = sweep_error(&grid, p, &sweep);
            best_error = best_error.min(err);
            if err <= tol && grid.len() >= 8 {
                grid.achieved_error = err;
                return Ok(grid);
            }
            width /= 1.5;
        }
    }
}

/// Grid for `p` verified on `[λ_ref/100, 100·λ_ref]` with the default node cap.
pub fn build_xi_grid(p: &FracParams, lambda_ref: f64, target_tol: f64) -> Result<XiGrid, FracError> {
    XiGridSpec::new(lambda_ref, target_tol).build(p)
}

fn verification_sweep(lo: f64, hi: f64) -> Vec<Complex64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut pts = Vec::with_capacity(2 * SWEEP_POINTS);
    for k in 0..SWEEP_POINTS {
        let r = (a + (b - a) * k as f64 / (SWEEP_POINTS - 1) as f64).exp();
        pts.push(Complex64::new(r, 0.0));
        pts.push(Complex64::new(0.0, r));
    }
    pts
}

fn sweep_error(grid: &XiGrid, p: &FracParams, sweep: &[Complex64]) -> f64 {
    sweep
        .iter()
        .map(|&lam| {
            let exact = closed_form_transfer(lam, p.eta(), p.alpha());
            match transfer_with_kappa(lam, grid, p.alpha(), p.eta(), p.kappa()) {
                Ok(v) => (v - exact).norm() / exact.norm(),
                Err(_) => f64::INFINITY,
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, eta: f64) -> FracParams {
        FracParams::new(alpha, eta, 1.0).unwrap()
    }

    #[test]
    fn grid_invariants() {
        let g = build_xi_grid(&params(0.5, 1.0), 1.0, 1e-6).unwrap();
        assert!(g.len() >= 8);
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(g.nodes()[0] > 0.0);
        assert!(g.achieved_error() <= 1e-6);
        assert_eq!(g.band(), (0.01, 100.0));
    }

    #[test]
    fn small_alpha_needs_more_nodes() {
        let g_half = build_xi_grid(&params(0.5, 1.0), 1.0, 1e-6).unwrap();
        let g_small = build_xi_grid(&params(0.1, 1.0), 1.0, 1e-6).unwrap();
        assert!(g_small.len() > g_half.len());
        assert!(g_small.achieved_error() <= 1e-6);
    }

    #[test]
    fn independent_sweep_passes_for_designed_grid() {
        // Denser, offset sweep than the one used during construction.
        for (alpha, eta) in [(0.3, 0.0), (0.7, 2.0)] {
            let p = params(alpha, eta);
            let g = build_xi_grid(&p, 5.0, 1e-7).unwrap();
            for k in 0..97 {
                let r = 0.05 * (1e4f64).powf(k as f64 / 96.0);
                for lam in [Complex64::new(r, 0.0), Complex64::new(0.0, r), Complex64::new(r, r)] {
                    let exact = closed_form_transfer(lam, eta, alpha);
                    let got = transfer_with_kappa(lam, &g, alpha, eta, p.kappa()).unwrap();
                    assert!((got - exact).norm() / exact.norm() < 1e-7, "lam={lam}");
                }
            }
        }
    }

    #[test]
    fn rejects_out_of_range_requests() {
        let p = params(0.5, 1.0);
        assert_eq!(build_xi_grid(&p, 1.0, 1e-15), Err(FracError::ToleranceOutOfRange(1e-15)));
        assert!(matches!(build_xi_grid(&p, 0.0, 1e-6), Err(FracError::BadLambdaRef(_))));
        assert!(matches!(
            XiGridSpec::new(1.0, 1e-6).with_band(10.0, 1.0).build(&p),
            Err(FracError::BadBand { .. })
        ));
    }

    #[test]
    fn node_cap_is_enforced() {
        let p = params(0.1, 0.0);
        let err = XiGridSpec::new(1.0, 1e-10).with_node_cap(64).build(&p).unwrap_err();
        assert!(matches!(err, FracError::NodeCapExceeded { cap: 64, .. }));
    }
}
