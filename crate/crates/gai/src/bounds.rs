//! Confidence radii, solved constants, and the warm-up solver.
//!
//! Everything here is a pure function of its inputs. The iterated-logarithm
//! radius
//!
//! ```text
//! U(n, ω) = (1 + √ε) · √( ((1+ε) / 2n) · log( log((1+ε)n) / ω ) )
//! ```
//!
//! is the anytime deviation bound for means of ½-sub-gaussian rewards
//! (Bernoulli rewards are ½-sub-gaussian; the 2σ² = ½ factor is baked in).
//! It fails with probability at most `c_ε · ω^(1+ε)`, where
//!
//! ```text
//! c_ε = ((2+ε)/ε) · (1 / log(1+ε))^(1+ε)
//! ```
//!
//! lil'HDoC instantiates `ω = δ/(c_ε K)` so a union bound over `K` arms
//! leaves total failure probability at most `δ`. The deviation radius used
//! by HDoC and LUCB-G for identification is `√(log(4KN²/δ) / 2N)`.
//!
//! [`solve_epsilon`] picks the largest `ε` whose growth rate
//! `r(ε) = (1+√ε)²(1+ε)` satisfies
//! `r − 1 ≤ min(log log B / log B, log log C / log C)` with `B = K+1`,
//! `C = max(1/δ, e)`; [`solve_t`] then finds the least warm-up count `T`
//! with `T² / [log((1+ε)T)]^r ≥ ¼ K^(r−1) (1/δ)^(r−1) c_ε^r`, which is
//! exactly the pull count from which the iterated-logarithm radius is no
//! larger than the HDoC radius.

// Validations are written as negated comparisons (`!(x > 0)`) so that NaN
// arguments fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use thiserror::Error;

use crate::Scalar;

/// Errors from radius evaluation and the constant solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("epsilon outside admissible range, got {0}")]
    EpsilonOutOfRange(f64),
    #[error("pull count must be at least 1, got {0}")]
    PullCountTooSmall(f64),
    #[error("round count must be at least 1, got {0}")]
    RoundCountTooSmall(f64),
    #[error("omega must be positive and finite, got {0}")]
    OmegaNotPositive(f64),
    #[error("need at least one arm, got {0}")]
    NoArms(usize),
    #[error("instance too small for lil'HDoC parameterization: K = {0}, need K >= 2")]
    TooFewArms(usize),
    #[error("delta must lie in (0, 1), got {0}")]
    DeltaOutOfRange(f64),
    #[error("delta must be strictly below 1/e, got {0}")]
    DeltaNotBelowInvE(f64),
    #[error("c must be positive and finite, got {0}")]
    NonPositiveC(f64),
    #[error(
        "omega = {omega:e} outside the admissible range (0, {limit:e}) for K = {k}, delta = {delta}"
    )]
    OmegaOutsideLilRange {
        omega: f64,
        limit: f64,
        k: usize,
        delta: f64,
    },
    #[error("warm-up search exceeded 2^62 pulls without satisfying the constraint")]
    WarmupSearchOverflow,
}

fn as_f64<S: Scalar>(x: S) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn usize_to<S: Scalar>(n: usize) -> S {
    S::from_usize(n).expect("arm count representable as scalar")
}

fn two<S: Scalar>() -> S {
    S::one() + S::one()
}

/// Growth rate `r(ε) = (1+√ε)²(1+ε)`; strictly increasing on `[0, 1]`.
fn growth_rate<S: Scalar>(eps: S) -> S {
    let base = S::one() + eps.sqrt();
    base * base * (S::one() + eps)
}

// ---------------------------------------------------------------------------
// Radii and constants
// ---------------------------------------------------------------------------

/// Union-bound constant `c_ε = ((2+ε)/ε) · (1/log(1+ε))^(1+ε)`.
///
/// Finite, at least 1, and strictly decreasing on `(0, 1]`.
pub fn c_epsilon<S: Scalar>(eps: S) -> Result<S, BoundsError> {
    if !(eps > S::zero() && eps <= S::one()) {
        return Err(BoundsError::EpsilonOutOfRange(as_f64(eps)));
    }
    let log1e = (S::one() + eps).ln();
    Ok((two::<S>() + eps) / eps * log1e.recip().powf(S::one() + eps))
}

fn lil_radius_raw<S: Scalar>(n: S, omega: S, eps: S) -> S {
    let inner = ((S::one() + eps) * n).ln() / omega;
    if inner < S::one() {
        return S::infinity();
    }
    (S::one() + eps.sqrt()) * ((S::one() + eps) / (two::<S>() * n) * inner.ln()).sqrt()
}

/// Iterated-logarithm radius `U(n, ω)` after `n` pulls.
///
/// Returns `+∞` when `log((1+ε)n) < ω`, i.e. when the bound is not yet a
/// real number at this pull count; identification is simply impossible
/// there. At the exact boundary `log((1+ε)n) = ω` the radius is 0.
pub fn lil_radius<S: Scalar>(n: S, omega: S, eps: S) -> Result<S, BoundsError> {
    if !(eps > S::zero() && eps <= S::one()) {
        return Err(BoundsError::EpsilonOutOfRange(as_f64(eps)));
    }
    if !(n >= S::one()) {
        return Err(BoundsError::PullCountTooSmall(as_f64(n)));
    }
    if !(omega > S::zero() && omega.is_finite()) {
        return Err(BoundsError::OmegaNotPositive(as_f64(omega)));
    }
    Ok(lil_radius_raw(n, omega, eps))
}

pub(crate) fn hdoc_id_radius_raw<S: Scalar>(n: S, k: usize, delta: S) -> S {
    let four = two::<S>() * two::<S>();
    let arg = four * usize_to::<S>(k) * n * n / delta;
    (arg.ln() / (two::<S>() * n)).sqrt()
}

/// HDoC / LUCB-G identification radius `√(log(4Kn²/δ) / 2n)`.
///
/// As a closed form this is real for any `δ ∈ (0, 4)` (the logarithm stays
/// nonnegative for all `n ≥ 1`, `K ≥ 1`); the statistical range `δ < 1` is
/// enforced where configurations are validated.
pub fn hdoc_id_radius<S: Scalar>(n: S, k: usize, delta: S) -> Result<S, BoundsError> {
    if k == 0 {
        return Err(BoundsError::NoArms(k));
    }
    if !(n >= S::one()) {
        return Err(BoundsError::PullCountTooSmall(as_f64(n)));
    }
    let four = two::<S>() + two::<S>();
    if !(delta > S::zero() && delta < four) {
        return Err(BoundsError::DeltaOutOfRange(as_f64(delta)));
    }
    Ok(hdoc_id_radius_raw(n, k, delta))
}

/// UCB sampling bonus `√(log t / 2n)` after `n` pulls of the arm and `t`
/// pulls in total. Zero at `t = 1`.
pub fn ucb_sampling_bonus<S: Scalar>(n: S, t: S) -> Result<S, BoundsError> {
    if !(n >= S::one()) {
        return Err(BoundsError::PullCountTooSmall(as_f64(n)));
    }
    if !(t >= S::one()) {
        return Err(BoundsError::RoundCountTooSmall(as_f64(t)));
    }
    Ok((t.ln() / (two::<S>() * n)).sqrt())
}

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

/// Largest `ε ∈ (0, 1]` with `r(ε) − 1 ≤ min(log log B/log B, log log C/log C)`,
/// `B = K+1`, `C = max(1/δ, e)`.
///
/// Bisection on the strictly increasing `r`; the returned value satisfies
/// the constraint (the bracket is rounded down, never up) and sits within
/// 10⁻⁹ relative of the boundary. Requires `K ≥ 2` (so `log log B > 0`) and
/// `δ < 1/e` strictly (at `δ = 1/e` the cap is zero, forcing `ε = 0` where
/// `c_ε` diverges).
pub fn solve_epsilon<S: Scalar>(k: usize, delta: S) -> Result<S, BoundsError> {
    if k < 2 {
        return Err(BoundsError::TooFewArms(k));
    }
    if !(delta > S::zero()) {
        return Err(BoundsError::DeltaOutOfRange(as_f64(delta)));
    }
    let e = S::from_f64(std::f64::consts::E).expect("e representable");
    if !(delta < e.recip()) {
        return Err(BoundsError::DeltaNotBelowInvE(as_f64(delta)));
    }

    let b = usize_to::<S>(k) + S::one();
    let c = delta.recip().max(e);
    let cap = (b.ln().ln() / b.ln()).min(c.ln().ln() / c.ln());

    // Invariant: r(lo) - 1 <= cap, r(hi) - 1 > cap. cap is at most 1/e, so
    // hi = 1 always violates (r(1) - 1 = 7).
    let mut lo = S::zero();
    let mut hi = S::one();
    for _ in 0..200 {
        let mid = (lo + hi) / two::<S>();
        if mid <= lo || mid >= hi {
            break;
        }
        if growth_rate(mid) - S::one() <= cap {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Least warm-up count `T ≥ 2` with
/// `T² / [log((1+ε)T)]^r ≥ ¼ K^(r−1) (1/δ)^(r−1) c_ε^r`.
///
/// The inequality is evaluated in log space so the right-hand side cannot
/// overflow for tiny `δ`; the search brackets exponentially and then
/// bisects, which agrees with a linear scan because the left-hand side is
/// nondecreasing over integers `t ≥ 2` for every solved `ε`.
pub fn solve_t<S: Scalar>(k: usize, delta: S, eps: S) -> Result<u64, BoundsError> {
    if k == 0 {
        return Err(BoundsError::NoArms(k));
    }
    if !(delta > S::zero() && delta < S::one()) {
        return Err(BoundsError::DeltaOutOfRange(as_f64(delta)));
    }
    let r = growth_rate(eps);
    let c_eps = c_epsilon(eps)?;

    let quarter = (two::<S>() * two::<S>()).recip();
    let ln_rhs = quarter.ln()
        + (r - S::one()) * usize_to::<S>(k).ln()
        + (r - S::one()) * delta.recip().ln()
        + r * c_eps.ln();

    let feasible = |t: u64| -> bool {
        let tf = S::from_u64(t).expect("pull count representable as scalar");
        let lhs = two::<S>() * tf.ln() - r * ((S::one() + eps) * tf).ln().ln();
        lhs >= ln_rhs
    };

    if feasible(2) {
        return Ok(2);
    }
    let mut hi = 2u64;
    loop {
        hi = hi.checked_mul(2).ok_or(BoundsError::WarmupSearchOverflow)?;
        if feasible(hi) {
            break;
        }
        if hi > (1u64 << 62) {
            return Err(BoundsError::WarmupSearchOverflow);
        }
    }
    let mut lo = hi / 2; // infeasible
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// The solved lil'HDoC constants for a `(K, δ)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LilParams<S> {
    /// Solved slack parameter `ε ∈ (0, 1]`.
    pub epsilon: S,
    /// Growth rate `r = (1+√ε)²(1+ε)`.
    pub r: S,
    /// Union-bound constant `c_ε`.
    pub c_eps: S,
    /// `B = K + 1`.
    pub b: S,
    /// `C = max(1/δ, e)`.
    pub c: S,
    /// Per-arm failure parameter `ω = δ/(c_ε K)`.
    pub omega: S,
    /// Warm-up pulls per arm.
    pub t: u64,
    /// Arm count.
    pub k: usize,
    /// Acceptance error rate.
    pub delta: S,
}

impl<S: Scalar> LilParams<S> {
    /// Solves all constants for `(k, delta)`. Errors if `k < 2`, if
    /// `delta ≥ 1/e`, or if the resulting `ω` falls outside the admissible
    /// range `(0, log(1+ε)/e)` of the iterated-logarithm bound.
    pub fn solve(k: usize, delta: S) -> Result<Self, BoundsError> {
        let epsilon = solve_epsilon(k, delta)?;
        let r = growth_rate(epsilon);
        let c_eps = c_epsilon(epsilon)?;
        let e = S::from_f64(std::f64::consts::E).expect("e representable");
        let b = usize_to::<S>(k) + S::one();
        let c = delta.recip().max(e);
        let omega = delta / (c_eps * usize_to::<S>(k));
        let limit = (S::one() + epsilon).ln() / e;
        if !(omega > S::zero() && omega < limit) {
            return Err(BoundsError::OmegaOutsideLilRange {
                omega: as_f64(omega),
                limit: as_f64(limit),
                k,
                delta: as_f64(delta),
            });
        }
        let t = solve_t(k, delta, epsilon)?;
        Ok(Self {
            epsilon,
            r,
            c_eps,
            b,
            c,
            omega,
            t,
            k,
            delta,
        })
    }

    /// Identification radius after `n` pulls: `U(n, ω)` with the solved
    /// constants. `+∞` while the bound is not yet real.
    pub fn id_radius(&self, n: u64) -> S {
        let nf = S::from_u64(n).expect("pull count representable as scalar");
        lil_radius_raw(nf, self.omega, self.epsilon)
    }
}

// ---------------------------------------------------------------------------
// Closed forms used by the verification suites
// ---------------------------------------------------------------------------

/// Upper bound on any `t ≥ 1` satisfying `(1/t)·log(log((1+ε)t)/ω) ≥ c`:
///
/// ```text
/// t ≤ (1/c) · log( 2·log((1+ε)/(cω)) / ω )
/// ```
///
/// Returns `+∞` when `(1+ε) ≤ cω`, where the nested logarithm is not
/// positive and the closed form is undefined.
pub fn lemma2_transform<S: Scalar>(c: S, omega: S, eps: S) -> Result<S, BoundsError> {
    if !(c > S::zero() && c.is_finite()) {
        return Err(BoundsError::NonPositiveC(as_f64(c)));
    }
    if !(omega > S::zero() && omega < S::one()) {
        return Err(BoundsError::OmegaNotPositive(as_f64(omega)));
    }
    if !(eps > S::zero() && eps < S::one()) {
        return Err(BoundsError::EpsilonOutOfRange(as_f64(eps)));
    }
    let inner = ((S::one() + eps) / (c * omega)).ln();
    if inner <= S::zero() {
        return Ok(S::infinity());
    }
    Ok(c.recip() * (two::<S>() * inner / omega).ln())
}

/// Predicted pull count to identify an arm at threshold gap `Δ`:
///
/// ```text
/// (2(1+ε)(1+√ε)²/Δ²) · log( 2c_ε K · log(2c_ε K(1+√ε)²(1+ε)²/(δΔ²)) / δ )
/// ```
///
/// A diagnostic only, never used for control flow. `Δ ≤ 0` yields `+∞`.
pub fn theorem3_bound<S: Scalar>(gap: S, k: usize, delta: S, eps: S) -> Result<S, BoundsError> {
    if k == 0 {
        return Err(BoundsError::NoArms(k));
    }
    if !(delta > S::zero() && delta < S::one()) {
        return Err(BoundsError::DeltaOutOfRange(as_f64(delta)));
    }
    let c_eps = c_epsilon(eps)?;
    if !(gap > S::zero()) {
        return Ok(S::infinity());
    }
    let kf = usize_to::<S>(k);
    let one_sqrt = S::one() + eps.sqrt();
    let gap_sq = gap * gap;
    let prefactor = two::<S>() * (S::one() + eps) * one_sqrt * one_sqrt / gap_sq;
    let inner =
        two::<S>() * c_eps * kf * one_sqrt * one_sqrt * (S::one() + eps) * (S::one() + eps)
            / (delta * gap_sq);
    let outer = two::<S>() * c_eps * kf * inner.ln() / delta;
    if !(outer > S::zero()) {
        return Ok(S::infinity());
    }
    Ok(prefactor * outer.ln())
}
