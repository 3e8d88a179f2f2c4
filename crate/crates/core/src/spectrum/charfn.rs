use num_complex::Complex64;

use super::{SpectrumError, SystemParams};

/// `(sinh r, cosh r)·e^{-|Re r|}`, bounded by 1 in modulus.
fn scaled_sh_ch(r: Complex64) -> (Complex64, Complex64) {
    let s = r.re.abs();
    let ep = (r - s).exp();
    let em = (-r - s).exp();
    ((ep - em) * 0.5, (ep + em) * 0.5)
}

fn check_lambda(lambda: Complex64) -> Result<(), SpectrumError> {
    if lambda == Complex64::new(0.0, 0.0) {
        Err(SpectrumError::ZeroLambda)
    } else {
        Ok(())
    }
}

/// Characteristic function for `a = 1`:
///
/// ```text
/// f(λ) = 2γ(λ+η)^{α-1} sinh r₁ sinh r₂ + (r₁/λ) cosh r₁ sinh r₂ + (r₂/λ) sinh r₁ cosh r₂
/// r₁ = λ(1 + ib/λ)^{1/2},  r₂ = λ(1 - ib/λ)^{1/2}
/// ```
///
/// returned multiplied by `e^{-(|Re r₁|+|Re r₂|)}` so that it stays finite
/// for large `|λ|`. The scaling is positive, so zeros are unchanged.
pub fn char_f(lambda: Complex64, p: &SystemParams) -> Result<Complex64, SpectrumError> {
    if !p.equal_speeds() {
        return Err(SpectrumError::WrongEvaluator(p.a()));
    }
    check_lambda(lambda)?;
    let ib = Complex64::new(0.0, p.b());
    let r1 = lambda * (1.0 + ib / lambda).sqrt();
    let r2 = lambda * (1.0 - ib / lambda).sqrt();
    let (s1, c1) = scaled_sh_ch(r1);
    let (s2, c2) = scaled_sh_ch(r2);
    let t = (lambda + p.eta()).powf(p.alpha() - 1.0);
    Ok(2.0 * p.gamma() * t * s1 * s2 + r1 / lambda * c1 * s2 + r2 / lambda * s1 * c2)
}

/// Characteristic function for `a ≠ 1`, `F(λ) = det 𝓜 / ((a-1)λ³)` with
///
/// ```text
/// det 𝓜 = -aγλ(λ+η)^{α-1}(r₁²-r₂²) sinh r₁ sinh r₂
///         - r₁(a r₁² - λ²) cosh r₁ sinh r₂ + r₂(a r₂² - λ²) sinh r₁ cosh r₂
/// r₁,₂ = λ ( ((a+1) ± (a-1)(1 - 4ab²/((a-1)²λ²))^{1/2}) / (2a) )^{1/2}
/// ```
///
/// scaled like [`char_f`].
#[allow(non_snake_case)]
pub fn char_F(lambda: Complex64, p: &SystemParams) -> Result<Complex64, SpectrumError> {
    let a = p.a();
    if p.equal_speeds() {
        return Err(SpectrumError::WrongEvaluator(a));
    }
    check_lambda(lambda)?;
    let l2 = lambda * lambda;
    let inner = (1.0 - 4.0 * a * p.b() * p.b() / ((a - 1.0).powi(2) * l2)).sqrt();
    let r1 = lambda * (((a + 1.0) + (a - 1.0) * inner) / (2.0 * a)).sqrt();
    let r2 = lambda * (((a + 1.0) - (a - 1.0) * inner) / (2.0 * a)).sqrt();
    let (s1, c1) = scaled_sh_ch(r1);
    let (s2, c2) = scaled_sh_ch(r2);
    let t = (lambda + p.eta()).powf(p.alpha() - 1.0);
    let det = -a * p.gamma() * lambda * t * (r1 * r1 - r2 * r2) * s1 * s2
        - r1 * (a * r1 * r1 - l2) * c1 * s2
        + r2 * (a * r2 * r2 - l2) * s1 * c2;
    Ok(det / ((a - 1.0) * l2 * lambda))
}

/// The characteristic function appropriate for given parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evaluator {
    EqualSpeeds(SystemParams),
    General(SystemParams),
}

impl Evaluator {
    pub fn for_params(p: &SystemParams) -> Self {
        if p.equal_speeds() {
            Evaluator::EqualSpeeds(*p)
        } else {
            Evaluator::General(*p)
        }
    }

    pub fn params(&self) -> &SystemParams {
        match self {
            Evaluator::EqualSpeeds(p) | Evaluator::General(p) => p,
        }
    }

    pub fn eval(&self, lambda: Complex64) -> Result<Complex64, SpectrumError> {
        match self {
            Evaluator::EqualSpeeds(p) => char_f(lambda, p),
            Evaluator::General(p) => char_F(lambda, p),
        }
    }
}
