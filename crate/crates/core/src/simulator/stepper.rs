use super::banded::{BandLu, BandMatrix};
use super::{SemiDiscreteSystem, SimError, SimState};

// Unknowns per spatial node, interleaved as [u_i, v_i, y_i, z_i], i = 1..=N.
// With this ordering the Laplacian couplings reach 5 rows below and 3 above.
const KL: usize = 5;
const KU: usize = 3;

fn iu(i: usize) -> usize {
    4 * (i - 1)
}
fn iv(i: usize) -> usize {
    4 * (i - 1) + 1
}
fn iy(i: usize) -> usize {
    4 * (i - 1) + 2
}
fn iz(i: usize) -> usize {
    4 * (i - 1) + 3
}

/// Crank–Nicolson propagator `(I - dt/2 A_h) U⁺ = (I + dt/2 A_h) U`.
///
/// The ω-rows are diagonal apart from their `v_N` input, so ω⁺ is eliminated
/// exactly and the remaining banded system is factored once.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    sys: SemiDiscreteSystem,
    dt: f64,
    lu: BandLu,
    /// `1 / (1 + dt/2 (ξ_j² + η))`
    inv_diag: Vec<f64>,
}

impl CrankNicolson {
    pub fn new(sys: SemiDiscreteSystem, dt: f64) -> Result<Self, SimError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SimError::BadTimeStep(dt));
        }
        let n = sys.grid().n_cells();
        let h = sys.grid().h();
        let h2 = h * h;
        let (a, b) = (sys.params().a(), sys.params().b());
        let c = 0.5 * dt;
        let inv_diag: Vec<f64> = sys.decay_rates().iter().map(|k| 1.0 / (1.0 + c * k)).collect();

        let mut m = BandMatrix::zeros(4 * n, KL, KU);
        for i in 1..=n {
            m.add(iu(i), iu(i), 1.0);
            m.add(iu(i), iv(i), -c);
            m.add(iv(i), iv(i), 1.0);
            if i < n {
                m.add(iv(i), iu(i), 2.0 * c / h2);
                if i > 1 {
                    m.add(iv(i), iu(i - 1), -c / h2);
                }
                m.add(iv(i), iu(i + 1), -c / h2);
                m.add(iv(i), iz(i), c * b);

                m.add(iy(i), iy(i), 1.0);
                m.add(iy(i), iz(i), -c);
                m.add(iz(i), iz(i), 1.0);
                m.add(iz(i), iy(i), 2.0 * c * a / h2);
                if i > 1 {
                    m.add(iz(i), iy(i - 1), -c * a / h2);
                }
                if i + 1 < n {
                    m.add(iz(i), iy(i + 1), -c * a / h2);
                }
                m.add(iz(i), iv(i), -c * b);
            } else {
                m.add(iv(n), iu(n), 2.0 * c / h2);
                m.add(iv(n), iu(n - 1), -2.0 * c / h2);
                // Schur complement of the ω-block on the v_N diagonal
                let s: f64 = sys
                    .xi_weights()
                    .iter()
                    .zip(sys.mu_values())
                    .zip(&inv_diag)
                    .map(|((w, mu), d)| w * mu * mu * d)
                    .sum();
                m.add(iv(n), iv(n), c * (2.0 / h) * sys.gamma_kappa() * c * s);
                // y_N, z_N are pinned to zero
                m.add(iy(n), iy(n), 1.0);
                m.add(iz(n), iz(n), 1.0);
            }
        }
        let lu = m.factor().map_err(SimError::SingularStep)?;
        Ok(CrankNicolson { sys, dt, lu, inv_diag })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn system(&self) -> &SemiDiscreteSystem {
        &self.sys
    }

    /// Advances `state` by one step in place.
    pub fn step(&self, state: &mut SimState) -> Result<(), SimError> {
        let sys = &self.sys;
        let n = sys.grid().n_cells();
        let c = 0.5 * self.dt;
        let d = sys.apply(state)?;

        let mut rhs = vec![0.0; 4 * n];
        for i in 1..=n {
            rhs[iu(i)] = state.u[i] + c * d.u[i];
            rhs[iv(i)] = state.v[i] + c * d.v[i];
            if i < n {
                rhs[iy(i)] = state.y[i] + c * d.y[i];
                rhs[iz(i)] = state.z[i] + c * d.z[i];
            }
        }
        let r_omega: Vec<f64> = state.omega.iter().zip(&d.omega).map(|(o, od)| o + c * od).collect();
        let h = sys.grid().h();
        let coupled: f64 = sys
            .xi_weights()
            .iter()
            .zip(sys.mu_values())
            .zip(&self.inv_diag)
            .zip(&r_omega)
            .map(|(((w, mu), dg), r)| w * mu * dg * r)
            .sum();
        rhs[iv(n)] -= c * (2.0 / h) * sys.gamma_kappa() * coupled;

        self.lu.solve_in_place(&mut rhs);
        for i in 1..=n {
            state.u[i] = rhs[iu(i)];
            state.v[i] = rhs[iv(i)];
            if i < n {
                state.y[i] = rhs[iy(i)];
                state.z[i] = rhs[iz(i)];
            }
        }
        let vn = state.v[n];
        for (j, o) in state.omega.iter_mut().enumerate() {
            *o = (r_omega[j] + c * sys.mu_values()[j] * vn) * self.inv_diag[j];
        }
        state.t += self.dt;
        Ok(())
    }
}

/// One Crank–Nicolson step of `state` under `sys` (factors afresh; use
/// [`CrankNicolson`] for repeated steps).
pub fn step_cn(sys: &SemiDiscreteSystem, state: &SimState, dt: f64) -> Result<SimState, SimError> {
    let cn = CrankNicolson::new(sys.clone(), dt)?;
    let mut next = state.clone();
    cn.step(&mut next)?;
    Ok(next)
}
