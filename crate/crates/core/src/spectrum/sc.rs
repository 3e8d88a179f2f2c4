use num_complex::Complex64;
use std::f64::consts::PI;

use super::{SpectrumError, SystemParams};

pub const DEFAULT_K_MAX: i64 = 50;
/// Relative tolerance on `b²` when matching an exceptional coupling.
pub const SC_REL_TOL: f64 = 1e-9;

/// Outcome of the strong-stability scan. When `violated` is false the pair
/// and exceptional values are zero.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ScWitness {
    pub violated: bool,
    pub k1: i64,
    pub k2: i64,
    pub b_exceptional: f64,
    /// `λ` such that `iλ` is an eigenvalue.
    pub lambda_imag: f64,
}

/// `(k1² - a k2²)(a k1² - k2²)π² / ((a+1)(k1² + k2²))`: the value of `b²`
/// at which `(k1, k2)` produces an imaginary eigenvalue.
fn exceptional_b2(a: f64, k1: i64, k2: i64) -> f64 {
    let (s1, s2) = ((k1 * k1) as f64, (k2 * k2) as f64);
    (s1 - a * s2) * (a * s1 - s2) * PI * PI / ((a + 1.0) * (s1 + s2))
}

fn exceptional_lambda(a: f64, k1: i64, k2: i64) -> f64 {
    let (s1, s2) = ((k1 * k1) as f64, (k2 * k2) as f64);
    (a * (s1 + s2) / (a + 1.0)).sqrt() * PI
}

/// Scans `1 ≤ k2 < k1 ≤ k_max` for a pair whose exceptional coupling equals
/// `b`; the first hit in lexicographic order is reported. Signs are
/// irrelevant, the value is symmetric under `k1 ↔ k2`, and diagonal pairs
/// give `b² ≤ 0`.
pub fn sc_check(p: &SystemParams, k_max: i64) -> Result<ScWitness, SpectrumError> {
    if k_max < 1 {
        return Err(SpectrumError::BadKMax);
    }
    let b2 = p.b() * p.b();
    for k1 in 1..=k_max {
        for k2 in 1..k1 {
            let e = exceptional_b2(p.a(), k1, k2);
            if e > 0.0 && (e - b2).abs() <= SC_REL_TOL * b2 {
                return Ok(ScWitness {
                    violated: true,
                    k1,
                    k2,
                    b_exceptional: e.sqrt(),
                    lambda_imag: exceptional_lambda(p.a(), k1, k2),
                });
            }
        }
    }
    Ok(ScWitness { violated: false, k1: 0, k2: 0, b_exceptional: 0.0, lambda_imag: 0.0 })
}

/// Coupling, frequency and displacement profile of an undamped mode.
///
/// The eigenvalue is `iλ` and the displacement is
/// `u(x) = 2i·c₁ sin(k1πx) + 2i sin(k2πx)`. The rest of the eigenvector is
/// `(u, iλu, -i(λ²u + u_xx)/(λb), (λ²u + u_xx)/b, ω = 0)`.
///
/// Both sine components solve the interior equations at the exceptional
/// `(b, λ)`; `c₁` is fixed by the free-end condition `u_x(1) = 0`, giving
/// `c₁ = -(-1)^{k1+k2} k2/k1`. For `a = 1` and `k1 + k2` odd this equals
/// `k2(a k1² - k2²) / (k1(k1² - a k2²))`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ExceptionalPair {
    pub a: f64,
    pub k1: i64,
    pub k2: i64,
    pub b: f64,
    pub lambda: f64,
    /// `c₁` above; the `sin(k2πx)` coefficient is normalised to 1.
    pub c1: f64,
}

impl ExceptionalPair {
    /// Complex coefficients of `sin(k1πx)` and `sin(k2πx)` in `u`.
    pub fn u_coefficients(&self) -> [(i64, Complex64); 2] {
        [(self.k1, Complex64::new(0.0, 2.0 * self.c1)), (self.k2, Complex64::new(0.0, 2.0))]
    }

    /// Real displacement `φ = -i·u`, the `t = 0` snapshot of the real mode.
    pub fn phi(&self, x: f64) -> f64 {
        2.0 * self.c1 * (self.k1 as f64 * PI * x).sin() + 2.0 * (self.k2 as f64 * PI * x).sin()
    }

    /// `(λ²φ + φ'')/b`, the companion velocity of the second wave at `t = 0`.
    pub fn z0(&self, x: f64) -> f64 {
        let l2 = self.lambda * self.lambda;
        let (w1, w2) = (self.k1 as f64 * PI, self.k2 as f64 * PI);
        (2.0 * self.c1 * (l2 - w1 * w1) * (w1 * x).sin() + 2.0 * (l2 - w2 * w2) * (w2 * x).sin())
            / self.b
    }
}

pub fn exceptional_eigenpair(a: f64, k1: i64, k2: i64) -> Result<ExceptionalPair, SpectrumError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(SpectrumError::BadSpeedRatio(a));
    }
    let (s1, s2) = ((k1 * k1) as f64, (k2 * k2) as f64);
    if s1 == a * s2 {
        return Err(SpectrumError::DegeneratePair { k1, k2 });
    }
    let e = exceptional_b2(a, k1, k2);
    if !(e > 0.0) {
        return Err(SpectrumError::NotExceptional { k1, k2, value: e });
    }
    Ok(ExceptionalPair {
        a,
        k1,
        k2,
        b: e.sqrt(),
        lambda: exceptional_lambda(a, k1, k2),
        c1: -((-1f64).powi((k1 + k2) as i32)) * k2 as f64 / k1 as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::FracParams;
    use crate::spectrum::{char_F, char_f, refine_root, RefineOptions};

    fn params(a: f64, b: f64) -> SystemParams {
        SystemParams::new(a, b, FracParams::new(0.5, 1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn diagonal_pairs_never_violate() {
        for k in 1..20 {
            assert_eq!(exceptional_b2(1.0, k, k), 0.0);
            assert!(exceptional_b2(3.0, k, k) < 0.0);
            assert_eq!(exceptional_b2(2.5, k + 1, k), exceptional_b2(2.5, k, k + 1));
        }
        assert!(!sc_check(&params(1.0, 1.0), 50).unwrap().violated);
    }

    #[test]
    fn exceptional_value_for_two_one() {
        let b = 3.0 * PI / 10f64.sqrt();
        assert!((b - 2.980376).abs() < 1e-6);
        let w = sc_check(&params(1.0, b), DEFAULT_K_MAX).unwrap();
        assert!(w.violated);
        assert_eq!((w.k1, w.k2), (2, 1));
        assert!((w.lambda_imag - PI * 2.5f64.sqrt()).abs() < 1e-14);
        assert!(!sc_check(&params(1.0, 1.01 * b), DEFAULT_K_MAX).unwrap().violated);
    }

    #[test]
    fn vanishing_factor_for_a4() {
        assert_eq!(exceptional_b2(4.0, 2, 1), 0.0);
        assert!(matches!(exceptional_eigenpair(4.0, 2, 1), Err(SpectrumError::DegeneratePair { .. })));
        assert!(matches!(exceptional_eigenpair(1.0, 3, 3), Err(SpectrumError::DegeneratePair { .. })));
        assert!(matches!(exceptional_eigenpair(4.0, 1, 1), Err(SpectrumError::NotExceptional { .. })));
        assert_eq!(sc_check(&params(1.0, 1.0), 0), Err(SpectrumError::BadKMax));
    }

    #[test]
    fn two_one_eigenpair_values() {
        let e = exceptional_eigenpair(1.0, 2, 1).unwrap();
        assert!((e.b - 3.0 * PI / 10f64.sqrt()).abs() < 1e-14);
        assert!((e.lambda - PI * 2.5f64.sqrt()).abs() < 1e-14);
        let [(k1, u1), (k2, u2)] = e.u_coefficients();
        assert_eq!((k1, k2), (2, 1));
        assert!((u1 - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((u2 - Complex64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn matches_printed_coefficient_for_equal_speeds_odd_sum() {
        for (k1, k2) in [(2i64, 1i64), (4, 1), (3, 2), (5, 2)] {
            let e = exceptional_eigenpair(1.0, k1, k2).unwrap();
            let (s1, s2) = ((k1 * k1) as f64, (k2 * k2) as f64);
            let printed = k2 as f64 * (s1 - s2) / (k1 as f64 * (s1 - s2));
            assert!((e.c1 - printed).abs() < 1e-15);
        }
    }

    /// Frequency-domain mode equations `λ²φ + φ'' = b z`, `λ²z + a z'' = bλ²φ`
    /// and the boundary values, checked by finite differences.
    #[test]
    fn profile_satisfies_mode_equations() {
        for (a, k1, k2) in [(1.0, 2, 1), (1.0, 3, 1), (2.0, 3, 1)] {
            let Ok(e) = exceptional_eigenpair(a, k1, k2) else { continue };
            let h = 1e-4;
            let d2 = |f: &dyn Fn(f64) -> f64, x: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            let l2 = e.lambda * e.lambda;
            let phi = |x: f64| e.phi(x);
            let z = |x: f64| e.z0(x);
            for x in [0.13, 0.5, 0.77] {
                // first equation: λ²φ + φ'' = b z0
                assert!((l2 * phi(x) + d2(&phi, x) - e.b * z(x)).abs() < 1e-4 * l2);
                // second: λ² z0 + a z0'' = b λ² φ
                assert!((l2 * z(x) + a * d2(&z, x) - e.b * l2 * phi(x)).abs() < 1e-4 * l2 * l2);
            }
            let dphi1 = (phi(1.0 + h) - phi(1.0 - h)) / (2.0 * h);
            assert!(dphi1.abs() < 1e-6, "k=({k1},{k2}) u_x(1)={dphi1}");
            assert!(phi(1.0).abs() < 1e-12 && phi(0.0).abs() < 1e-15);
        }
    }

    #[test]
    fn characteristic_function_vanishes() {
        let e = exceptional_eigenpair(1.0, 2, 1).unwrap();
        let p = params(1.0, e.b);
        let root = Complex64::new(0.0, e.lambda);
        let at = char_f(root, &p).unwrap().norm();
        let off = char_f(root + Complex64::new(0.0, 0.4), &p).unwrap().norm();
        assert!(at <= 1e-8 * off.max(1.0));
        let est = refine_root(root, |z| char_f(z, &p), &RefineOptions::default());
        assert!(est.converged);
        assert!(est.lambda.re.abs() <= 1e-9);

        let e2 = exceptional_eigenpair(2.0, 3, 1).unwrap();
        let p2 = params(2.0, e2.b);
        let root2 = Complex64::new(0.0, e2.lambda);
        let v = char_F(root2, &p2).unwrap().norm();
        let off2 = char_F(root2 + Complex64::new(0.0, 0.4), &p2).unwrap().norm();
        assert!(v <= 1e-8 * off2.max(1.0), "{v} vs {off2}");
    }
}
