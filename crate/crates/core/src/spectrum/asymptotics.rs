use num_complex::Complex64;
use std::f64::consts::PI;

use super::{damping_phase, BCase, BranchId, SpectrumError, SystemParams};

pub const DEFAULT_N0: i64 = 10;

/// Closed-form large-root expansion for branch `id.branch`, index `id.n`.
///
/// For `a = 1`, with `E = i cos(πα/2) - sin(πα/2)`:
///
/// | case        | branch 1                                                    | branch 2 |
/// |-------------|-------------------------------------------------------------|----------|
/// | b ∉ πℤ      | `inπ + γ(1-cos b)E / (2(nπ)^{1-α})`                          | `i(n+½)π + γ(1+cos b)E / (2(nπ)^{1-α})` |
/// | b ∈ 2πℤ*    | `inπ + ib²/(8nπ) + 7ib⁴/(128π³n³) + γb⁶E/(128π^{5-α}n^{5-α})` | `i(n+½)π + γE/(nπ)^{1-α}` |
/// | b ∈ (2ℤ+1)π | `inπ + γE/(nπ)^{1-α}`                                        | see below |
///
/// Branch 2 for odd multiples of π is
/// `i(n+½)π + ib²/(8nπ) - ib²/(16πn²) + ib²(4π²+7b²)/(128π³n³)
///  - ib²(4π²+21b²)/(256π³n⁴) + γb⁶E/(256π^{5-α}n^{5-α})`.
///
/// For `a ≠ 1` only the leading terms `inπ√a` (branch 1) and `i(n+½)π`
/// (branch 2) are known. Negative `n` returns the conjugate of `|n|`.
pub fn asymptotic_root(id: &BranchId, p: &SystemParams, n0: i64) -> Result<Complex64, SpectrumError> {
    if id.branch != 1 && id.branch != 2 {
        return Err(SpectrumError::BadBranch(id.branch));
    }
    if id.n.abs() < n0 {
        return Err(SpectrumError::IndexBelowN0 { n: id.n, n0 });
    }
    if id.b_case != p.b_case() {
        return Err(SpectrumError::CaseMismatch { id: id.b_case, b: p.b() });
    }
    if id.n < 0 {
        let pos = BranchId { n: -id.n, ..*id };
        return asymptotic_root(&pos, p, n0).map(|z| z.conj());
    }
    let n = id.n as f64;
    let i = Complex64::i();
    if !p.equal_speeds() {
        return Ok(match id.branch {
            1 => i * n * PI * p.a().sqrt(),
            _ => i * (n + 0.5) * PI,
        });
    }
    let (g, al, b) = (p.gamma(), p.alpha(), p.b());
    let e = damping_phase(al);
    let npi = n * PI;
    let frac = npi.powf(1.0 - al);
    let b2 = b * b;
    let root = match (id.b_case, id.branch) {
        (BCase::Generic, 1) => i * npi + g * (1.0 - b.cos()) * e / (2.0 * frac),
        (BCase::Generic, _) => i * (npi + PI / 2.0) + g * (1.0 + b.cos()) * e / (2.0 * frac),
        (BCase::BIn2PiZ, 1) => {
            i * npi
                + i * b2 / (8.0 * npi)
                + i * 7.0 * b2 * b2 / (128.0 * PI.powi(3) * n.powi(3))
                + g * b2.powi(3) * e / (128.0 * PI.powf(5.0 - al) * n.powf(5.0 - al))
        }
        (BCase::BIn2PiZ, _) => i * (npi + PI / 2.0) + g * e / frac,
        (BCase::BInPiOdd, 1) => i * npi + g * e / frac,
        (BCase::BInPiOdd, _) => {
            let pi3 = PI.powi(3);
            i * (npi + PI / 2.0)
                + i * b2 / (8.0 * npi)
                - i * b2 / (16.0 * PI * n * n)
                + i * b2 * (4.0 * PI * PI + 7.0 * b2) / (128.0 * pi3 * n.powi(3))
                - i * b2 * (4.0 * PI * PI + 21.0 * b2) / (256.0 * pi3 * n.powi(4))
                + g * b2.powi(3) * e / (256.0 * PI.powf(5.0 - al) * n.powf(5.0 - al))
        }
    };
    Ok(root)
}
