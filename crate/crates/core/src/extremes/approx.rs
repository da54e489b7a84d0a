use serde::Serialize;

use super::coefficients::{ErrorCoefficients, ALPHA_MAX};
use super::{Gated, RangeExceeded};
use crate::error::{Error, Result};
use crate::sequences::{PSequence, QSequence};

/// Slack for `2q1 − q2 ≤ 1`, which holds exactly in theory but may be off by
/// rounding when the q's are computed.
const Q_SLACK: f64 = 1e-12;

/// All of `q_{-1}..q_K` from `p_0..p_K` via
/// `q_n = Σ_{k=0}^{n} (−1)^{n−k} p_{n−k} q_{k−1}`.
pub fn q_sequence_from_p(p: &PSequence) -> Vec<f64> {
    q_recursion(p.as_slice())
}

fn q_recursion(ps: &[f64]) -> Vec<f64> {
    // q[i] holds q_{i−1}
    let mut q = vec![1.0, 1.0];
    for n in 1..ps.len() {
        let mut acc = 0.0;
        for k in 0..=n {
            let term = ps[n - k] * q[k];
            if (n - k) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        q.push(acc);
    }
    q
}

/// `q_n` from the p-sequence by the alternating recursion.
pub fn qn_from_p(p: &PSequence, n: usize) -> Result<f64> {
    p.require(n)?;
    Ok(q_recursion(&p.as_slice()[..=n])[n + 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PFromQ {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

/// Inverts the recursion for the first four terms.
pub fn p_from_q(q: &QSequence) -> Result<PFromQ> {
    let q1 = q.require(1)?;
    let q2 = q.require(2)?;
    let q3 = q.require(3)?;
    let q4 = q.require(4)?;
    Ok(PFromQ {
        p1: 1.0 - q1,
        p2: 1.0 - 2.0 * q1 + q2,
        p3: 1.0 - 3.0 * q1 + 2.0 * q2 + q1 * q1 - q3,
        p4: 1.0 - 4.0 * q1 + 3.0 * q2 - 2.0 * q1 * q2 + 3.0 * q1 * q1 - 2.0 * q3 + q4,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct T4Approx {
    /// `(2q1 − q2) / [1 + q1 − q2 + 2(q1 − q2)²]^n`
    pub value: f64,
    /// `Δ₂ = 3 + Γ(α)(1 − q1) + n[1 + K(α)(1 − q1)]`
    pub delta2: f64,
    /// `Δ₂ (1 − q1)²`, the bound on `|q_n − value|`.
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct T3Approx {
    /// `[6(q1 − q2)² + 4q3 − 3q4] / [1 + q1 − q2 + q3 − q4 + 2q1² + 3q2² − 5q1q2]^n`
    pub value: f64,
    /// `Δ₁ = Γ(α) + nK(α)`
    pub delta1: f64,
    /// `Δ₁ (1 − q1)³`, the bound on `|q_n − value|`.
    pub bound: f64,
}

fn check_q(name: &str, q: f64) -> Result<()> {
    if q.is_finite() && (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} = {q} not in [0, 1]")))
    }
}

/// Validates the common preconditions and returns the coefficients, or the
/// inapplicable marker when `1 − q1 > 0.1`.
fn gate(q1: f64, n: usize, alpha: f64) -> Result<Gated<ErrorCoefficients>> {
    check_q("q1", q1)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let a1 = 1.0 - q1;
    if a1 > ALPHA_MAX {
        return Ok(Gated::Inapplicable(RangeExceeded {
            value: a1,
            limit: ALPHA_MAX,
        }));
    }
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= ALPHA_MAX) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    if a1 > alpha {
        return Err(Error::InvalidInput(format!(
            "1 - q1 = {a1} exceeds alpha = {alpha}"
        )));
    }
    Ok(Gated::Applicable(ErrorCoefficients::new(alpha)?))
}

/// Two-term approximation of `q_n` from `q1, q2`.
pub fn approx_qn_t4(q1: f64, q2: f64, n: usize, alpha: f64) -> Result<Gated<T4Approx>> {
    check_q("q2", q2)?;
    if q2 > q1 {
        return Err(Error::InvalidInput(format!("q2 = {q2} exceeds q1 = {q1}")));
    }
    let coef = match gate(q1, n, alpha)? {
        Gated::Applicable(c) => c,
        Gated::Inapplicable(r) => return Ok(Gated::Inapplicable(r)),
    };
    if 2.0 * q1 - q2 > 1.0 + Q_SLACK {
        return Err(Error::InvalidInput(format!(
            "2q1 - q2 = {} exceeds 1",
            2.0 * q1 - q2
        )));
    }
    let a1 = 1.0 - q1;
    let d = q1 - q2;
    let nf = n as f64;
    let value = (2.0 * q1 - q2) / (1.0 + d + 2.0 * d * d).powi(n as i32);
    let delta2 = 3.0 + coef.gamma * a1 + nf * (1.0 + coef.k * a1);
    Ok(Gated::Applicable(T4Approx {
        value,
        delta2,
        bound: delta2 * a1 * a1,
    }))
}

/// Four-term approximation of `q_n` from `q1..q4`.
pub fn approx_qn_t3(
    q1: f64,
    q2: f64,
    q3: f64,
    q4: f64,
    n: usize,
    alpha: f64,
) -> Result<Gated<T3Approx>> {
    for (name, v) in [("q2", q2), ("q3", q3), ("q4", q4)] {
        check_q(name, v)?;
    }
    if !(q4 <= q3 && q3 <= q2 && q2 <= q1) {
        return Err(Error::InvalidInput(format!(
            "need q4 <= q3 <= q2 <= q1, got {q1}, {q2}, {q3}, {q4}"
        )));
    }
    let coef = match gate(q1, n, alpha)? {
        Gated::Applicable(c) => c,
        Gated::Inapplicable(r) => return Ok(Gated::Inapplicable(r)),
    };
    let a1 = 1.0 - q1;
    let d = q1 - q2;
    let num = 6.0 * d * d + 4.0 * q3 - 3.0 * q4;
    let base = 1.0 + d + q3 - q4 + 2.0 * q1 * q1 + 3.0 * q2 * q2 - 5.0 * q1 * q2;
    let delta1 = coef.gamma + n as f64 * coef.k;
    Ok(Gated::Applicable(T3Approx {
        value: num / base.powi(n as i32),
        delta1,
        bound: delta1 * a1 * a1 * a1,
    }))
}

/// Centers of the two bounds on `q_n λ^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaCenters {
    /// `1 − p2 + 2p3 − 3p4 + p1² + 6p2² − 6p1p2`, within `Γ(α) p1³`.
    pub mu1: f64,
    /// `1 − p2`, within `(3 + αΓ(α)) p1²`.
    pub nu1: f64,
}

impl LambdaCenters {
    /// `(Γ(α) p1³, (3 + αΓ(α)) p1²)`.
    pub fn bounds(&self, p1: f64, alpha: f64) -> Result<(f64, f64)> {
        let c = ErrorCoefficients::new(alpha)?;
        Ok((c.gamma * p1.powi(3), c.c2_coef() * p1 * p1))
    }
}

pub fn approx_qnlambda_centers(p: &PSequence) -> Result<LambdaCenters> {
    let p1 = p.require(1)?;
    let p2 = p.require(2)?;
    let p3 = p.require(3)?;
    let p4 = p.require(4)?;
    Ok(LambdaCenters {
        mu1: 1.0 - p2 + 2.0 * p3 - 3.0 * p4 + p1 * p1 + 6.0 * p2 * p2 - 6.0 * p1 * p2,
        nu1: 1.0 - p2,
    })
}
