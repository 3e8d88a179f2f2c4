use std::f64::consts::PI;

use crate::spectrum::{sc_check, BCase, SystemParams, DEFAULT_K_MAX};

/// Largest denominator accepted when recognising `a` or `√a` as rational.
pub const MAX_DENOMINATOR: i64 = 1000;
const RATIONAL_TOL: f64 = 1e-12;

/// Which decay regime the parameters fall in.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum RateCase {
    /// `a = 1`, `b ∉ πℤ`: `2/(1-α)`.
    EqualSpeeds,
    /// `a = 1`, `b ∈ πℤ`: `2/(5-α)`.
    EqualSpeedsPiMultiple,
    /// `√a = p/q`: `2/(5-α)`.
    SqrtARational { p: i64, q: i64 },
    /// `a = p0/q0` with irrational root and `b² ≤ bound`: `2/(5-α)`.
    RationalASmallCoupling { p0: i64, q0: i64, bound: f64 },
    /// Neither `a` nor `√a` has a small-denominator representation; treated
    /// as a member of the full-measure irrational set: `2/(5-α)`.
    GenericIrrational,
    /// `a = p0/q0`, irrational root, but `b²` above the bound: no prediction.
    RationalALargeCoupling { p0: i64, q0: i64, bound: f64 },
    /// `η = 0`: the rate results need `η > 0`.
    ZeroEta,
    /// Strong stability fails at the pair `(k1, k2)`: energy need not decay.
    ScViolated { k1: i64, k2: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Prediction {
    /// `s` in `E(t) ≲ t^{-s}`; `None` when no result applies.
    pub exponent: Option<f64>,
    #[serde(flatten)]
    pub case: RateCase,
}

impl Prediction {
    /// `2/s`, the matching spectral abscissa exponent.
    pub fn abscissa_exponent(&self) -> Option<f64> {
        self.exponent.map(|s| 2.0 / s)
    }
}

/// Best rational `p/q` with `q ≤ max_den` matching `x` to a relative `1e-12`,
/// found from the continued-fraction convergents.
pub fn rational_approx(x: f64, max_den: i64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let tol = RATIONAL_TOL * x.abs().max(1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i64;
        let (p2, q2) = (ai.checked_mul(p1)?.checked_add(p0)?, ai.checked_mul(q1)?.checked_add(q0)?);
        if q2 > max_den {
            return None;
        }
        if (x - p2 as f64 / q2 as f64).abs() <= tol {
            return Some((p2, q2));
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// `π²|a-1| / (2 q0 (a+1))`, the admissible `b²` for `a = p0/q0`.
pub fn small_coupling_bound(a: f64, q0: i64) -> f64 {
    PI * PI * (a - 1.0).abs() / (2.0 * q0 as f64 * (a + 1.0))
}

/// Predicted polynomial decay exponent `s(α)`, with the case that produced it.
pub fn predicted_exponent(p: &SystemParams) -> Prediction {
    let none = |case| Prediction { exponent: None, case };
    if p.eta() <= 0.0 {
        return none(RateCase::ZeroEta);
    }
    if let Ok(w) = sc_check(p, DEFAULT_K_MAX) {
        if w.violated {
            return none(RateCase::ScViolated { k1: w.k1, k2: w.k2 });
        }
    }
    let alpha = p.alpha();
    let slow = Some(2.0 / (5.0 - alpha));
    let a = p.a();
    if p.equal_speeds() {
        return match p.b_case() {
            BCase::Generic => Prediction { exponent: Some(2.0 / (1.0 - alpha)), case: RateCase::EqualSpeeds },
            _ => Prediction { exponent: slow, case: RateCase::EqualSpeedsPiMultiple },
        };
    }
    if let Some((p_, q)) = rational_approx(a.sqrt(), MAX_DENOMINATOR) {
        return Prediction { exponent: slow, case: RateCase::SqrtARational { p: p_, q } };
    }
    if let Some((p0, q0)) = rational_approx(a, MAX_DENOMINATOR) {
        let bound = small_coupling_bound(a, q0);
        return if p.b() * p.b() <= bound {
            Prediction { exponent: slow, case: RateCase::RationalASmallCoupling { p0, q0, bound } }
        } else {
            none(RateCase::RationalALargeCoupling { p0, q0, bound })
        };
    }
    Prediction { exponent: slow, case: RateCase::GenericIrrational }
}
