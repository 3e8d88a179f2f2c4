use super::{assemble, CrankNicolson, InitialData, SimError, SpatialGrid};
use crate::frac::{XiGrid, XiGridSpec};
use crate::spectrum::SystemParams;
use crate::Execution;

/// Knobs of a single time-domain run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SimConfig {
    pub n_cells: usize,
    /// Defaults to `h/2`.
    pub dt: Option<f64>,
    pub t_final: f64,
    pub initial: InitialData,
    /// Relative accuracy of the ξ-quadrature transfer.
    pub xi_tol: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { n_cells: 200, dt: None, t_final: 100.0, initial: InitialData::Standard, xi_tol: 1e-6 }
    }
}

impl SimConfig {
    pub fn time_step(&self) -> f64 {
        self.dt.unwrap_or(0.5 / self.n_cells as f64)
    }
}

/// ξ-grid used by the simulator: reference frequency `π·n_cells`, verified
/// from `|λ| = 0.1` up to a hundred times that.
pub fn simulation_xi_grid(p: &SystemParams, n_cells: usize, tol: f64) -> Result<XiGrid, SimError> {
    let lr = std::f64::consts::PI * n_cells as f64;
    Ok(XiGridSpec::new(lr, tol).with_band(0.1, 100.0 * lr).build(p.frac())?)
}

/// Energy history of a run, one entry per time level.
///
/// `balance_residual[k]` is `E_k - E_{k-1} + dt (D_k + D_{k-1})/2`
/// (zero at `k = 0`). Crank–Nicolson makes it nonnegative.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct EnergyTrace {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub dissipation: Vec<f64>,
    pub balance_residual: Vec<f64>,
}

impl EnergyTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_balance_residual(&self) -> f64 {
        self.balance_residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// `|E_K - E_0 + Σ dt (D_k + D_{k-1})/2|`, the balance defect over the
    /// whole run.
    pub fn global_balance_defect(&self) -> f64 {
        self.balance_residual.iter().sum::<f64>().abs()
    }

    /// Largest step increase `E_{k+1} - E_k` (negative if strictly decreasing).
    pub fn max_increase(&self) -> f64 {
        self.energy.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `E_{k+1} ≤ E_k + tol·E_0` for every step.
    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        let e0 = self.energy.first().copied().unwrap_or(0.0);
        self.energy.windows(2).all(|w| w[1] <= w[0] + tol * e0)
    }

    /// `max_k |E_k - E_0|`.
    pub fn max_drift(&self) -> f64 {
        let e0 = self.energy.first().copied().unwrap_or(0.0);
        self.energy.iter().fold(0.0, |m, e| m.max((e - e0).abs()))
    }

    /// Energy at the last recorded time, `0` when empty.
    pub fn final_energy(&self) -> f64 {
        self.energy.last().copied().unwrap_or(0.0)
    }
}

pub fn run(p: &SystemParams, config: &SimConfig) -> Result<EnergyTrace, SimError> {
    let grid = SpatialGrid::new(config.n_cells)?;
    let dt = config.time_step();
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SimError::BadTimeStep(dt));
    }
    if !(config.t_final > 0.0 && config.t_final.is_finite()) {
        return Err(SimError::BadFinalTime(config.t_final));
    }
    let xi = simulation_xi_grid(p, config.n_cells, config.xi_tol)?;
    let sys = assemble(p, grid, &xi)?;
    let mut state = config.initial.build(&sys)?;
    let cn = CrankNicolson::new(sys, dt)?;
    let sys = cn.system();

    let steps = (config.t_final / dt - 1e-9).ceil().max(1.0) as usize;
    let mut tr = EnergyTrace {
        times: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
        dissipation: Vec::with_capacity(steps + 1),
        balance_residual: Vec::with_capacity(steps + 1),
    };
    let mut e = sys.energy(&state);
    let mut d = sys.dissipation(&state);
    tr.times.push(0.0);
    tr.energy.push(e);
    tr.dissipation.push(d);
    tr.balance_residual.push(0.0);
    for k in 1..=steps {
        cn.step(&mut state)?;
        let (e1, d1) = (sys.energy(&state), sys.dissipation(&state));
        tr.times.push(k as f64 * dt);
        tr.energy.push(e1);
        tr.dissipation.push(d1);
        tr.balance_residual.push(e1 - e + 0.5 * dt * (d1 + d));
        e = e1;
        d = d1;
    }
    Ok(tr)
}

/// Independent runs, fanned out according to `exec`.
pub fn run_many(jobs: &[(SystemParams, SimConfig)], exec: Execution) -> Vec<Result<EnergyTrace, SimError>> {
    exec.map(jobs, |(p, c)| run(p, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::FracParams;

    fn params(gamma: f64, b: f64) -> SystemParams {
        let f = if gamma > 0.0 {
            FracParams::new(0.5, 1.0, gamma).unwrap()
        } else {
            FracParams::undamped(0.5, 1.0).unwrap()
        };
        if b == 0.0 { SystemParams::uncoupled(1.0, f) } else { SystemParams::new(1.0, b, f) }.unwrap()
    }

    #[test]
    fn zero_data_gives_zero_trace() {
        let c = SimConfig { n_cells: 16, t_final: 1.0, initial: InitialData::Zero, ..Default::default() };
        let tr = run(&params(1.0, 1.0), &c).unwrap();
        assert_eq!(tr.len(), 33);
        assert!(tr.energy.iter().chain(&tr.dissipation).all(|&x| x == 0.0));
    }

    #[test]
    fn rejects_bad_config() {
        let p = params(1.0, 1.0);
        let c = SimConfig { t_final: -1.0, ..Default::default() };
        assert_eq!(run(&p, &c), Err(SimError::BadFinalTime(-1.0)));
        let c = SimConfig { dt: Some(0.0), ..Default::default() };
        assert_eq!(run(&p, &c), Err(SimError::BadTimeStep(0.0)));
        let c = SimConfig { n_cells: 4, ..Default::default() };
        assert_eq!(run(&p, &c), Err(SimError::TooFewCells(4)));
    }

    #[test]
    fn undamped_conserves_energy() {
        let n = 64;
        let mut u0 = vec![0.0; n + 1];
        for (i, x) in SpatialGrid::new(n).unwrap().nodes().iter().enumerate() {
            u0[i] = (1.5 * std::f64::consts::PI * x).sin();
        }
        let zero = vec![0.0; n + 1];
        let c = SimConfig {
            n_cells: n,
            t_final: 1.0,
            initial: InitialData::Samples { u0, u1: zero.clone(), y0: zero.clone(), y1: zero },
            ..Default::default()
        };
        let tr = run(&params(0.0, 0.0), &c).unwrap();
        assert!(tr.max_drift() <= 1e-10 * tr.energy[0], "drift {}", tr.max_drift());
    }

    #[test]
    fn damped_run_is_monotone_with_positive_residuals() {
        let c = SimConfig { n_cells: 32, t_final: 2.0, initial: InitialData::Standard, ..Default::default() };
        let tr = run(&params(1.0, 1.0), &c).unwrap();
        assert!(tr.is_nonincreasing(1e-12));
        assert!(tr.energy.last().unwrap() < &tr.energy[0]);
        assert!(tr.balance_residual.iter().all(|&r| r >= -1e-14 * tr.energy[0]));
    }

    #[test]
    fn parallel_and_sequential_batches_agree() {
        let jobs: Vec<_> = (0..3)
            .map(|s| {
                let c = SimConfig {
                    n_cells: 16,
                    t_final: 0.5,
                    initial: InitialData::Random { seed: s, modes: 4 },
                    ..Default::default()
                };
                (params(1.0, 1.0), c)
            })
            .collect();
        let a = run_many(&jobs, Execution::Parallel);
        let b = run_many(&jobs, Execution::Sequential);
        assert_eq!(a, b);
    }
}
