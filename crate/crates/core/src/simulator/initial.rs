use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use super::{SemiDiscreteSystem, SimError, SimState};
use crate::spectrum::exceptional_eigenpair;

/// Initial displacement/velocity pairs `(u₀, u₁, y₀, y₁)`; ω starts at zero.
///
/// Closed-form profiles satisfy `u(0) = 0`, `y(0) = y(1) = 0` and the
/// compatibility `u₀'(1) = 0` forced by `ω₀ = 0` in the flux condition.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialData {
    Zero,
    /// `u₀ = sin(πx/2)`, everything else zero.
    QuarterSine,
    /// `u₀ = sin(πx/2) + 0.3 sin(3πx/2)`, `u₁ = 0.5 sin(πx)`,
    /// `y₀ = sin(πx)`, `y₁ = 0`.
    Standard,
    /// Random smooth data: `u₀ = Σ c_k sin((k-½)πx)`, and `u₁, y₀, y₁` in
    /// `sin(kπx)`, coefficients uniform in `(-1, 1)/k²`, `k = 1..=modes`.
    Random { seed: u64, modes: usize },
    /// Real snapshot of the undamped mode of the pair `(k1, k2)`:
    /// `u₀ = φ`, `u₁ = 0`, `y₀ = 0`, `y₁ = (λ²φ + φ'')/b`.
    ExceptionalMode { k1: i64, k2: i64 },
    /// Nodal samples on `x_0..x_N`.
    Samples { u0: Vec<f64>, u1: Vec<f64>, y0: Vec<f64>, y1: Vec<f64> },
}

impl InitialData {
    pub fn build(&self, sys: &SemiDiscreteSystem) -> Result<SimState, SimError> {
        let grid = sys.grid();
        let n = grid.n_cells();
        let x = grid.nodes();
        let mut s = sys.zero_state();
        let fill = |dst: &mut Vec<f64>, f: &dyn Fn(f64) -> f64| {
            for (d, &xi) in dst.iter_mut().zip(&x) {
                *d = f(xi);
            }
        };
        match self {
            InitialData::Zero => {}
            InitialData::QuarterSine => fill(&mut s.u, &|x| (PI * x / 2.0).sin()),
            InitialData::Standard => {
                fill(&mut s.u, &|x| (PI * x / 2.0).sin() + 0.3 * (1.5 * PI * x).sin());
                fill(&mut s.v, &|x| 0.5 * (PI * x).sin());
                fill(&mut s.y, &|x| (PI * x).sin());
            }
            InitialData::Random { seed, modes } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let m = (*modes).max(1);
                let mut coef = |k: usize| rng.random_range(-1.0..1.0) / (k * k) as f64;
                let cu: Vec<f64> = (1..=m).map(&mut coef).collect();
                let cv: Vec<f64> = (1..=m).map(&mut coef).collect();
                let cy: Vec<f64> = (1..=m).map(&mut coef).collect();
                let cz: Vec<f64> = (1..=m).map(&mut coef).collect();
                let series = |c: &[f64], shift: f64, x: f64| -> f64 {
                    c.iter().enumerate().map(|(k, ck)| ck * ((k as f64 + 1.0 - shift) * PI * x).sin()).sum()
                };
                fill(&mut s.u, &|x| series(&cu, 0.5, x));
                fill(&mut s.v, &|x| series(&cv, 0.0, x));
                fill(&mut s.y, &|x| series(&cy, 0.0, x));
                fill(&mut s.z, &|x| series(&cz, 0.0, x));
            }
            InitialData::ExceptionalMode { k1, k2 } => {
                let p = sys.params();
                let e = exceptional_eigenpair(p.a(), *k1, *k2)?;
                if ((e.b - p.b().abs()) / e.b).abs() > 1e-9 {
                    return Err(SimError::NoMode(format!(
                        "pair ({k1}, {k2}) needs |b| = {}, configured b = {}",
                        e.b,
                        p.b()
                    )));
                }
                // the mode for -b is the same with y₁ flipped
                let sign = p.b().signum();
                fill(&mut s.u, &|x| e.phi(x));
                fill(&mut s.z, &|x| sign * e.z0(x));
            }
            InitialData::Samples { u0, u1, y0, y1 } => {
                for (field, src, dst) in [
                    ("u0", u0, &mut s.u),
                    ("u1", u1, &mut s.v),
                    ("y0", y0, &mut s.y),
                    ("y1", y1, &mut s.z),
                ] {
                    if src.len() != n + 1 {
                        return Err(SimError::SampleLength { field, got: src.len(), expected: n + 1 });
                    }
                    dst.copy_from_slice(src);
                }
                let scale = [u0, u1, y0, y1].iter().flat_map(|v| v.iter()).fold(1.0f64, |m, x| m.max(x.abs()));
                let tol = 1e-12 * scale;
                if u0[0].abs() > tol || u1[0].abs() > tol {
                    return Err(SimError::BoundaryViolation("u(0)"));
                }
                if y0[0].abs() > tol || y0[n].abs() > tol || y1[0].abs() > tol || y1[n].abs() > tol {
                    return Err(SimError::BoundaryViolation("y(0), y(1)"));
                }
            }
        }
        // Dirichlet values are exact zeros by construction of the state.
        s.u[0] = 0.0;
        s.v[0] = 0.0;
        for w in [&mut s.y, &mut s.z] {
            w[0] = 0.0;
            w[n] = 0.0;
        }
        s.check_boundary()?;
        Ok(s)
    }
}
