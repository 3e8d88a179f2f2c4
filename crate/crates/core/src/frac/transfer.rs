use num_complex::Complex64;

use super::{gamma_fn, FracError, FracParams, XiGrid};

/// `κ Σ w_j ξ_j^{2α-1} / (λ + ξ_j² + η)` with an explicit `κ`.
///
/// Exposed separately so that a wrong `κ` can be injected when checking that
/// the verification harness actually notices.
pub fn transfer_with_kappa(
    lambda: Complex64,
    grid: &XiGrid,
    alpha: f64,
    eta: f64,
    kappa: f64,
) -> Result<Complex64, FracError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (&xi, &w) in grid.nodes().iter().zip(grid.weights()) {
        let den = lambda + xi * xi + eta;
        if den.norm() <= f64::EPSILON * (xi * xi + eta + lambda.norm()) {
            return Err(FracError::PoleHit(lambda));
        }
        acc += w * xi.powf(2.0 * alpha - 1.0) / den;
    }
    Ok(kappa * acc)
}

/// Grid evaluation of `κ(α) ∫ μ(ξ)² / (λ + ξ² + η) dξ`.
pub fn diffusive_transfer(lambda: Complex64, grid: &XiGrid, p: &FracParams) -> Result<Complex64, FracError> {
    transfer_with_kappa(lambda, grid, p.alpha(), p.eta(), p.kappa())
}

/// `(λ + η)^{α-1}` on the principal branch.
pub fn closed_form_transfer(lambda: Complex64, eta: f64, alpha: f64) -> Complex64 {
    (lambda + eta).powf(alpha - 1.0)
}

/// Coefficients `(c₁, c₂)` splitting the damping at frequency `iλ`:
///
/// ```text
/// c₁ = γκ Σ w μ² / (λ² + (ξ²+η)²)
/// c₂ = γκ Σ w μ² (ξ²+η) / (λ² + (ξ²+η)²)
/// ```
///
/// so that `γ·transfer(iλ) = c₂ - iλ c₁`.
pub fn c1_c2(lambda: f64, p: &FracParams, grid: &XiGrid) -> Result<(f64, f64), FracError> {
    let eta = p.eta();
    if eta == 0.0 && lambda == 0.0 {
        return Err(FracError::DegenerateFrequency);
    }
    let (mut s1, mut s2) = (0.0, 0.0);
    let l2 = lambda * lambda;
    for (&xi, &w) in grid.nodes().iter().zip(grid.weights()) {
        let k = xi * xi + eta;
        let m2 = xi.powf(2.0 * p.alpha() - 1.0);
        let den = l2 + k * k;
        s1 += w * m2 / den;
        s2 += w * m2 * k / den;
    }
    let g = p.gamma() * p.kappa();
    Ok((g * s1, g * s2))
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AIntegrals {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

/// The three auxiliary integrals of the resolvent estimate at `|λ|`:
///
/// ```text
/// A1 = ∫ |ξ|^{α+1/2} / (|λ|+ξ²+η)² dξ
/// A2 = (∫ 1 / (|λ|+ξ²+η)² dξ)^{1/2}       = √(π/2) L^{-3/4}
/// A3 = (∫ ξ² / (|λ|+ξ²+η)⁴ dξ)^{1/2}       = (√π/4) L^{-5/4}
/// ```
///
/// with `L = |λ| + η`. A2, A3 are closed forms; A1 is summed on `grid`.
pub fn a_integrals(lambda_abs: f64, p: &FracParams, grid: &XiGrid) -> AIntegrals {
    let l = lambda_abs + p.eta();
    let a1 = grid.integrate(|xi| xi.powf(p.alpha() + 0.5) / (l + xi * xi).powi(2));
    AIntegrals {
        a1,
        a2: (std::f64::consts::PI / 2.0).sqrt() * l.powf(-0.75),
        a3: std::f64::consts::PI.sqrt() / 4.0 * l.powf(-1.25),
    }
}

/// Closed form of A1: `B(α/2+3/4, 5/4-α/2) · L^{α/2-5/4}` (the Beta arguments
/// sum to 2, so the Beta function is a product of two Gammas).
pub fn a1_closed_form(lambda_abs: f64, p: &FracParams) -> f64 {
    let a = p.alpha();
    let l = lambda_abs + p.eta();
    gamma_fn(a / 2.0 + 0.75) * gamma_fn(1.25 - a / 2.0) * l.powf(a / 2.0 - 1.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::{build_xi_grid, XiGridSpec};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn setup(alpha: f64, eta: f64, lambda_ref: f64) -> (FracParams, XiGrid) {
        let p = FracParams::new(alpha, eta, 1.0).unwrap();
        let g = build_xi_grid(&p, lambda_ref, 1e-9).unwrap();
        (p, g)
    }

    #[test]
    fn transfer_examples() {
        for alpha in [0.2, 0.5, 0.8] {
            let (p, g) = setup(alpha, 0.0, 1.0);
            let t = diffusive_transfer(Complex64::new(1.0, 0.0), &g, &p).unwrap();
            assert!((t - 1.0).norm() < 1e-9);
        }
        let (p, g) = setup(0.5, 1.0, 3.0);
        let t = diffusive_transfer(Complex64::new(3.0, 0.0), &g, &p).unwrap();
        assert!((t - 0.5).norm() < 1e-9);

        let (p, g) = setup(0.3, 1.0, 100.0);
        let t = diffusive_transfer(Complex64::new(0.0, 100.0), &g, &p).unwrap();
        let exact = Complex64::new(1.0, 100.0).powf(-0.7);
        assert!((t - exact).norm() / exact.norm() < 1e-9);
        // principal branch: argument of (1+100i)^{-0.7} is -0.7·atan(100)
        assert_relative_eq!(exact.arg(), -0.7 * 100f64.atan(), max_relative = 1e-12);
    }

    #[test]
    fn conjugate_symmetry_is_exact() {
        let (p, g) = setup(0.4, 0.5, 10.0);
        for lam in [Complex64::new(2.0, 7.0), Complex64::new(-0.1, 30.0), Complex64::new(5.0, -0.3)] {
            let a = diffusive_transfer(lam.conj(), &g, &p).unwrap();
            let b = diffusive_transfer(lam, &g, &p).unwrap().conj();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn pole_is_rejected() {
        let (p, g) = setup(0.5, 1.0, 1.0);
        let xi = g.nodes()[3];
        let lam = Complex64::new(-(xi * xi + 1.0), 0.0);
        assert_eq!(diffusive_transfer(lam, &g, &p), Err(FracError::PoleHit(lam)));
    }

    #[test]
    fn c1_c2_match_transfer_on_imaginary_axis() {
        let p = FracParams::new(0.35, 0.5, 2.0).unwrap();
        let g = build_xi_grid(&p, 10.0, 1e-9).unwrap();
        for lam in [0.5, 3.0, 40.0, 700.0] {
            let (c1, c2) = c1_c2(lam, &p, &g).unwrap();
            assert!(c1 > 0.0 && c2 > 0.0);
            let t = p.gamma() * diffusive_transfer(Complex64::new(0.0, lam), &g, &p).unwrap();
            assert_relative_eq!(t.re, c2, max_relative = 1e-12);
            assert_relative_eq!(-t.im, lam * c1, max_relative = 1e-12);
            // and both against the closed form
            let exact = p.gamma() * closed_form_transfer(Complex64::new(0.0, lam), 0.5, 0.35);
            assert_relative_eq!(c2, exact.re, max_relative = 1e-7);
            assert_relative_eq!(lam * c1, -exact.im, max_relative = 1e-7);
        }
    }

    #[test]
    fn c1_c2_degenerate_frequency() {
        let (p, g) = setup(0.5, 0.0, 1.0);
        assert_eq!(c1_c2(0.0, &p, &g), Err(FracError::DegenerateFrequency));
        let (p, g) = setup(0.5, 1.0, 1.0);
        assert!(c1_c2(0.0, &p, &g).is_ok());
    }

    #[test]
    fn c2_high_frequency_limit() {
        // (iλ)^{α-1} = λ^{α-1} e^{iπ(α-1)/2}, whose real part is sin(πα/2) λ^{α-1}.
        let alpha = 0.3;
        let p = FracParams::new(alpha, 1.0, 1.5).unwrap();
        let g = XiGridSpec::new(1e4, 1e-9).with_band(1.0, 1e7).build(&p).unwrap();
        let limit = (PI * alpha / 2.0).sin() * p.gamma();
        let mut prev = f64::INFINITY;
        for lam in [1e3, 1e4, 1e5, 1e6] {
            let (_, c2) = c1_c2(lam, &p, &g).unwrap();
            let dev = (c2 * lam.powf(1.0 - alpha) - limit).abs();
            assert!(dev < prev);
            prev = dev;
        }
        assert!(prev / limit < 1e-5);
    }

    #[test]
    fn a2_a3_closed_forms() {
        let (p, g) = setup(0.5, 0.0, 1.0);
        let a = a_integrals(1.0, &p, &g);
        assert_relative_eq!(a.a2, 1.253314, max_relative = 2e-6);
        assert_relative_eq!(a.a3, 0.443113, max_relative = 2e-6);
        // brute-force check of the squared integrals on the grid
        let a2sq = g.integrate(|x| 1.0 / (1.0 + x * x).powi(2));
        let a3sq = g.integrate(|x| x * x / (1.0 + x * x).powi(4));
        assert_relative_eq!(a2sq, PI / 2.0, max_relative = 1e-6);
        assert_relative_eq!(a3sq, PI / 16.0, max_relative = 1e-6);
    }

    #[test]
    fn a1_scaling_and_beta_form() {
        for alpha in [0.2, 0.5, 0.9] {
            let p = FracParams::new(alpha, 1.0, 1.0).unwrap();
            let g = XiGridSpec::new(100.0, 1e-9).with_band(1.0, 1e4).build(&p).unwrap();
            let scaled: Vec<f64> = [10.0, 100.0, 1000.0]
                .iter()
                .map(|&l| {
                    let a = a_integrals(l, &p, &g);
                    assert_relative_eq!(a.a1, a1_closed_form(l, &p), max_relative = 1e-6);
                    a.a1 * (l + 1.0f64).powf(1.25 - alpha / 2.0)
                })
                .collect();
            for s in &scaled {
                assert!((s / scaled[0] - 1.0).abs() < 0.01);
            }
        }
    }
}
