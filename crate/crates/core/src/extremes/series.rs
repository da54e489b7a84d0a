use serde::Serialize;

use super::coefficients::{ErrorCoefficients, ALPHA_MAX};
use crate::error::{Error, Result};
use crate::sequences::PSequence;

/// Largest admissible series tail at the right end of the λ bracket.
const LAMBDA_TAIL_TOL: f64 = 1e-13;
/// Bisection stops once the bracket is narrower than this.
const LAMBDA_WIDTH: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    /// Truncated value of `C(z)`.
    pub value: f64,
    /// Rigorous bound on the omitted terms.
    pub tail_bound: f64,
    /// Index of the last term included.
    pub last_term: usize,
}

/// Bound on `Σ_{k ≥ first} |c_k| z^k` using `p_{k−1} ≤ p_1^⌊k/2⌋`.
///
/// With `r = p_1 z²` the even and odd terms are two geometric series, which
/// gives a closed form. Requires `r < 1`.
pub fn tail_majorant(p1: f64, z: f64, first: usize) -> f64 {
    let r = p1 * z * z;
    let j = (first / 2) as i32;
    let rj = r.powi(j);
    if first.is_multiple_of(2) {
        (1.0 + z) * rj / (1.0 - r)
    } else {
        rj * (z + r) / (1.0 - r)
    }
}

fn check_convergence(p: &PSequence, z: f64) -> Result<()> {
    let p1 = p.p1();
    if !(z.is_finite() && z > 0.0 && z * p1.sqrt() < 1.0) {
        return Err(Error::OutsideConvergence { z, p1 });
    }
    Ok(())
}

/// Evaluates `C(z) = 1 + Σ_{k≥1} (−1)^k p_{k−1} z^k`.
///
/// Terms are added until the remaining tail majorant drops to `tol`, or the
/// sequence runs out; `tail_bound` is what remains in either case.
pub fn c_series_eval(p: &PSequence, z: f64, tol: f64) -> Result<SeriesValue> {
    check_convergence(p, z)?;
    Ok(eval_unchecked(p, z, tol))
}

fn eval_unchecked(p: &PSequence, z: f64, tol: f64) -> SeriesValue {
    let p1 = p.p1();
    let coeffs = p.as_slice();
    let mut value = 1.0;
    let mut zk = 1.0;
    let mut last_term = 0;
    for (idx, &pk) in coeffs.iter().enumerate() {
        let k = idx + 1;
        if tail_majorant(p1, z, k) <= tol {
            break;
        }
        zk *= z;
        if k % 2 == 0 {
            value += pk * zk;
        } else {
            value -= pk * zk;
        }
        last_term = k;
    }
    SeriesValue {
        value,
        tail_bound: tail_majorant(p1, z, last_term + 1),
        last_term,
    }
}

/// The root λ of `C(z)` together with the two closed-form centers and their
/// error bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaResult {
    pub lambda: f64,
    pub bracket_low: f64,
    /// `1 + l·p_1`
    pub bracket_high: f64,
    /// `1 + p1 − p2 + p3 − p4 + 2p1² + 3p2² − 5p1p2`
    pub center_t1: f64,
    /// `1 + p1 − p2 + 2(p1 − p2)²`
    pub center_c1: f64,
    /// `K(α) p1³`
    pub bound_t1: f64,
    /// `(1 + αK(α)) p1²`
    pub bound_c1: f64,
    /// Tail majorant of the truncated series at λ.
    pub tail_bound: f64,
    /// `|C(λ)|` of the truncated series.
    pub residual: f64,
}

/// Locates the unique root of `C(z)` in `(1, 1 + l·p_1)` by bisection.
///
/// `alpha` must satisfy `p_1 ≤ α ≤ 0.1`; the sequence must be long enough for
/// the tail at the right bracket end to be below `1e-13`.
pub fn solve_lambda(p: &PSequence, alpha: f64) -> Result<LambdaResult> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= ALPHA_MAX) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let p1 = p.p1();
    if p1 > alpha {
        return Err(Error::InvalidInput(format!(
            "p1 = {p1} exceeds alpha = {alpha}"
        )));
    }
    if p1 == 0.0 {
        // C(z) = 1 − z
        return Ok(LambdaResult {
            lambda: 1.0,
            bracket_low: 1.0,
            bracket_high: 1.0,
            center_t1: 1.0,
            center_c1: 1.0,
            bound_t1: 0.0,
            bound_c1: 0.0,
            tail_bound: 0.0,
            residual: 0.0,
        });
    }
    let (p2, p3, p4) = (p.require(2)?, p.require(3)?, p.require(4)?);
    let coef = ErrorCoefficients::new(alpha)?;

    let mut lo = 1.0;
    let mut hi = 1.0 + coef.l * p1;
    check_convergence(p, hi)?;
    let tail_hi = tail_majorant(p1, hi, p.last_index() + 2);
    if tail_hi >= LAMBDA_TAIL_TOL {
        return Err(Error::SeriesTooShort {
            z: hi,
            tail_bound: tail_hi,
            tolerance: LAMBDA_TAIL_TOL,
        });
    }
    let c = |z: f64| eval_unchecked(p, z, 0.0).value;
    let (c_lo, c_hi) = (c(lo), c(hi));
    if !(c_lo > 0.0 && c_hi < 0.0) {
        return Err(Error::NoSignChange {
            low: lo,
            high: hi,
            c_low: c_lo,
            c_high: c_hi,
        });
    }
    let bracket_high = hi;
    while hi - lo >= LAMBDA_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if c(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let at_root = eval_unchecked(p, lambda, 0.0);

    Ok(LambdaResult {
        lambda,
        bracket_low: 1.0,
        bracket_high,
        center_t1: 1.0 + p1 - p2 + p3 - p4 + 2.0 * p1 * p1 + 3.0 * p2 * p2 - 5.0 * p1 * p2,
        center_c1: 1.0 + p1 - p2 + 2.0 * (p1 - p2).powi(2),
        bound_t1: coef.k * p1.powi(3),
        bound_c1: coef.c1_coef() * p1 * p1,
        tail_bound: at_root.tail_bound,
        residual: at_root.value.abs(),
    })
}
