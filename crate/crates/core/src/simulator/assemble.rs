use super::{SimError, SimState, SpatialGrid};
use crate::frac::{mu, XiGrid};
use crate::spectrum::SystemParams;

/// Finite-difference generator `A_h` with its energy inner product.
///
/// Interior rows use the three-point Laplacian. At `x = 1` the ghost value
/// `u_{N+1}` is eliminated with the centered discrete flux condition
/// `(u_{N+1} - u_{N-1})/(2h) + γκ Σ w μ ω = 0`, giving
///
/// ```text
/// v_N' = 2(u_{N-1} - u_N)/h² - (2/h) γκ Σ_j w_j μ_j ω_j
/// ```
///
/// The energy uses trapezoid weights on `v` (half weight at `x_N`) and
/// one-sided differences for the gradients, which makes
/// `⟨A_h U, U⟩_E = -D(U)` hold exactly at the semi-discrete level.
#[derive(Debug, Clone)]
pub struct SemiDiscreteSystem {
    params: SystemParams,
    grid: SpatialGrid,
    xi: Vec<f64>,
    w: Vec<f64>,
    mu: Vec<f64>,
    /// `ξ_j² + η`
    decay: Vec<f64>,
    gk: f64,
}

pub fn assemble(p: &SystemParams, grid: SpatialGrid, xi: &XiGrid) -> Result<SemiDiscreteSystem, SimError> {
    let alpha = p.alpha();
    let nodes = xi.nodes().to_vec();
    Ok(SemiDiscreteSystem {
        params: *p,
        grid,
        mu: nodes.iter().map(|&x| mu(x, alpha)).collect(),
        decay: nodes.iter().map(|&x| x * x + p.eta()).collect(),
        w: xi.weights().to_vec(),
        xi: nodes,
        gk: p.gamma() * p.frac().kappa(),
    })
}

impl SemiDiscreteSystem {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn grid(&self) -> SpatialGrid {
        self.grid
    }

    pub fn n_xi(&self) -> usize {
        self.xi.len()
    }

    pub fn xi_nodes(&self) -> &[f64] {
        &self.xi
    }

    pub(crate) fn xi_weights(&self) -> &[f64] {
        &self.w
    }

    pub(crate) fn mu_values(&self) -> &[f64] {
        &self.mu
    }

    pub(crate) fn decay_rates(&self) -> &[f64] {
        &self.decay
    }

    /// `γκ(α)`.
    pub(crate) fn gamma_kappa(&self) -> f64 {
        self.gk
    }

    pub fn zero_state(&self) -> SimState {
        SimState::zeros(self.grid.n_cells(), self.n_xi())
    }

    pub(crate) fn check_shape(&self, s: &SimState) -> Result<(), SimError> {
        let n = self.grid.n_cells() + 1;
        if [s.u.len(), s.v.len(), s.y.len(), s.z.len()].iter().any(|&l| l != n) || s.omega.len() != self.n_xi() {
            return Err(SimError::ShapeMismatch);
        }
        Ok(())
    }

    /// `Σ_j w_j μ_j ω_j`, the discrete boundary output without `γκ`.
    pub(crate) fn boundary_output(&self, omega: &[f64]) -> f64 {
        self.w.iter().zip(&self.mu).zip(omega).map(|((w, m), o)| w * m * o).sum()
    }

    /// `A_h U`.
    pub fn apply(&self, s: &SimState) -> Result<SimState, SimError> {
        self.check_shape(s)?;
        let n = self.grid.n_cells();
        let h = self.grid.h();
        let h2 = h * h;
        let (a, b) = (self.params.a(), self.params.b());
        let mut out = self.zero_state();
        out.t = s.t;
        for i in 1..=n {
            out.u[i] = s.v[i];
        }
        for i in 1..n {
            out.v[i] = (s.u[i + 1] - 2.0 * s.u[i] + s.u[i - 1]) / h2 - b * s.z[i];
            out.y[i] = s.z[i];
            out.z[i] = a * (s.y[i + 1] - 2.0 * s.y[i] + s.y[i - 1]) / h2 + b * s.v[i];
        }
        out.v[n] = 2.0 * (s.u[n - 1] - s.u[n]) / h2 - 2.0 / h * self.gk * self.boundary_output(&s.omega);
        for j in 0..self.n_xi() {
            out.omega[j] = -self.decay[j] * s.omega[j] + self.mu[j] * s.v[n];
        }
        Ok(out)
    }

    /// Energy inner product
    /// `Σ' h v v' + Σ (Δu)(Δu')/h + Σ h z z' + a Σ (Δy)(Δy')/h + γκ Σ w ω ω'`,
    /// where `Σ'` halves the weight at `x_N`.
    pub fn inner(&self, p: &SimState, q: &SimState) -> f64 {
        let n = self.grid.n_cells();
        let h = self.grid.h();
        let a = self.params.a();
        let mut kin = 0.0;
        for i in 1..n {
            kin += p.v[i] * q.v[i] + p.z[i] * q.z[i];
        }
        kin = h * (kin + 0.5 * p.v[n] * q.v[n]);
        let mut pot = 0.0;
        for i in 0..n {
            let du = (p.u[i + 1] - p.u[i]) * (q.u[i + 1] - q.u[i]);
            let dy = (p.y[i + 1] - p.y[i]) * (q.y[i + 1] - q.y[i]);
            pot += du + a * dy;
        }
        pot /= h;
        let om: f64 = self.w.iter().zip(&p.omega).zip(&q.omega).map(|((w, x), y)| w * x * y).sum();
        kin + pot + self.gk * om
    }

    pub fn energy(&self, s: &SimState) -> f64 {
        0.5 * self.inner(s, s)
    }

    /// `D(U) = γκ Σ_j w_j (ξ_j² + η) ω_j²`.
    pub fn dissipation(&self, s: &SimState) -> f64 {
        let d: f64 = self.w.iter().zip(&self.decay).zip(&s.omega).map(|((w, k), o)| w * k * o * o).sum();
        self.gk * d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::{build_xi_grid, FracParams};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn system(b: f64, gamma: f64, n: usize) -> SemiDiscreteSystem {
        let f = if gamma > 0.0 {
            FracParams::new(0.4, 1.0, gamma).unwrap()
        } else {
            FracParams::undamped(0.4, 1.0).unwrap()
        };
        let p = if b == 0.0 { SystemParams::uncoupled(1.5, f) } else { SystemParams::new(1.5, b, f) }.unwrap();
        let fg = FracParams::new(0.4, 1.0, 1.0).unwrap();
        let xi = build_xi_grid(&fg, 10.0, 1e-4).unwrap();
        assemble(&p, SpatialGrid::new(n).unwrap(), &xi).unwrap()
    }

    fn random_state(sys: &SemiDiscreteSystem, vals: &[f64]) -> SimState {
        let n = sys.grid().n_cells();
        let mut s = sys.zero_state();
        let mut it = vals.iter().cycle();
        for i in 1..=n {
            s.u[i] = *it.next().unwrap();
            s.v[i] = *it.next().unwrap();
        }
        for i in 1..n {
            s.y[i] = *it.next().unwrap();
            s.z[i] = *it.next().unwrap();
        }
        for o in s.omega.iter_mut() {
            *o = *it.next().unwrap();
        }
        s
    }

    #[test]
    fn zero_coupling_decouples() {
        let sys = system(0.0, 1.0, 16);
        let mut s = sys.zero_state();
        for i in 1..=16 {
            s.u[i] = (i as f64).sin();
            s.v[i] = (i as f64).cos();
        }
        let d = sys.apply(&s).unwrap();
        assert!(d.y.iter().chain(&d.z).all(|&x| x == 0.0));

        let mut s = sys.zero_state();
        for i in 1..16 {
            s.y[i] = (i as f64 * 0.3).sin();
            s.z[i] = (i as f64 * 0.7).cos();
        }
        let d = sys.apply(&s).unwrap();
        assert!(d.u.iter().chain(&d.v).chain(&d.omega).all(|&x| x == 0.0));
    }

    #[test]
    fn quarter_sine_energy() {
        for n in [32, 64, 128] {
            let sys = system(1.0, 1.0, n);
            let mut s = sys.zero_state();
            for (i, x) in sys.grid().nodes().iter().enumerate() {
                s.u[i] = (PI * x / 2.0).sin();
            }
            let e = sys.energy(&s);
            let exact = PI * PI / 16.0;
            assert!((e - exact).abs() < 0.2 / (n * n) as f64, "n={n} e={e}");
        }
        assert!((PI * PI / 16.0 - 0.61685).abs() < 1e-5);
    }

    #[test]
    fn energy_is_quadratic_and_zero_at_zero() {
        let sys = system(1.0, 1.0, 16);
        assert_eq!(sys.energy(&sys.zero_state()), 0.0);
        let vals: Vec<f64> = (0..50).map(|k| (k as f64 * 1.3).sin()).collect();
        let s = random_state(&sys, &vals);
        assert!((sys.energy(&s.scaled(3.0)) - 9.0 * sys.energy(&s)).abs() < 1e-12 * sys.energy(&s));
    }

    #[test]
    fn shape_is_checked() {
        let sys = system(1.0, 1.0, 16);
        let s = SimState::zeros(17, sys.n_xi());
        assert_eq!(sys.apply(&s).unwrap_err(), SimError::ShapeMismatch);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dissipation_identity(vals in proptest::collection::vec(-1.0f64..1.0, 40..200),
                                b in -3.0f64..3.0, gamma in 0.0f64..2.0) {
            let sys = system(if b == 0.0 { 0.5 } else { b }, gamma, 16);
            let s = random_state(&sys, &vals);
            let au = sys.apply(&s).unwrap();
            let lhs = sys.inner(&au, &s);
            let d = sys.dissipation(&s);
            let scale = 1.0 + d + sys.inner(&au, &au).sqrt() * sys.inner(&s, &s).sqrt();
            prop_assert!((lhs + d).abs() <= 1e-12 * scale, "lhs={} d={}", lhs, d);
        }
    }
}
