//! Joint tail sequences of a 1-dependent stationary sequence at a fixed level `x`.
//!
//! `p_n = P(X_1 > x, …, X_n > x)` with `p_0 = 1`, and
//! `q_n = P(X_1 ≤ x, …, X_n ≤ x)` with `q_{-1} = q_0 = 1`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack allowed when checking `p_n ≤ p_1^⌊(n+1)/2⌋` on computed values.
const BOUND_RTOL: f64 = 1e-12;

/// Prefix `p_0 = 1, p_1, …, p_K` of joint upper-tail probabilities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PSequence {
    values: Vec<f64>,
}

impl PSequence {
    /// Builds a sequence from `p_1..p_K`; `p_0 = 1` is prepended.
    ///
    /// Rejects values outside `[0, 1]`, increasing entries and entries that
    /// break `p_n ≤ p_1^⌊(n+1)/2⌋`, which every 1-dependent stationary
    /// sequence satisfies and which the series tail bounds rely on.
    pub fn from_tail(tail: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(tail.len() + 1);
        values.push(1.0);
        values.extend_from_slice(tail);
        Self::new(values)
    }

    /// Builds a sequence from `p_0..p_K`; `p_0` must be 1.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values[0] != 1.0 {
            return Err(Error::InvalidSequence("p_0 must equal 1".into()));
        }
        for (n, &v) in values.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidSequence(format!("p_{n} = {v} not in [0, 1]")));
            }
            if n > 0 && v > values[n - 1] {
                return Err(Error::InvalidSequence(format!(
                    "p_{n} = {v} exceeds p_{} = {}",
                    n - 1,
                    values[n - 1]
                )));
            }
        }
        if let Some(&p1) = values.get(1) {
            for (n, &v) in values.iter().enumerate().skip(2) {
                let cap = p1.powi(n.div_ceil(2) as i32);
                if v > cap * (1.0 + BOUND_RTOL) {
                    return Err(Error::InvalidSequence(format!(
                        "p_{n} = {v:e} exceeds p_1^{} = {cap:e}",
                        n.div_ceil(2)
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    /// The i.i.d. case `p_k = p1^k` for `k = 0..=len`.
    pub fn geometric(p1: f64, len: usize) -> Result<Self> {
        Self::new((0..=len).map(|k| p1.powi(k as i32)).collect())
    }

    /// Largest available index `K`.
    pub fn last_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `p_n`, if present.
    pub fn get(&self, n: usize) -> Option<f64> {
        self.values.get(n).copied()
    }

    pub(crate) fn require(&self, n: usize) -> Result<f64> {
        self.get(n).ok_or(Error::InsufficientLength {
            needed: n,
            available: self.last_index(),
        })
    }

    /// `p_1`, or 0 for the trivial sequence `(1)`.
    pub fn p1(&self) -> f64 {
        self.get(1).unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// `q_{-1} = q_0 = 1, q_1, …, q_K`, stored with an offset of one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QSequence {
    values: Vec<f64>,
}

impl QSequence {
    /// Builds a sequence from `q_1..q_K`.
    pub fn from_tail(tail: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(tail.len() + 2);
        values.extend_from_slice(&[1.0, 1.0]);
        values.extend_from_slice(tail);
        for (i, &v) in values.iter().enumerate().skip(2) {
            let n = i - 1;
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidSequence(format!("q_{n} = {v} not in [0, 1]")));
            }
            if v > values[i - 1] {
                return Err(Error::InvalidSequence(format!(
                    "q_{n} = {v} exceeds q_{} = {}",
                    n - 1,
                    values[i - 1]
                )));
            }
        }
        Ok(Self { values })
    }

    /// Largest available index `K` (0 when only the conventions are present).
    pub fn last_index(&self) -> usize {
        self.values.len() - 2
    }

    /// `q_n` for `n ≥ -1`, if present.
    pub fn get(&self, n: isize) -> Option<f64> {
        if n < -1 {
            return None;
        }
        self.values.get((n + 1) as usize).copied()
    }

    pub(crate) fn require(&self, n: usize) -> Result<f64> {
        self.get(n as isize).ok_or(Error::InsufficientLength {
            needed: n,
            available: self.last_index(),
        })
    }

    /// `q_1..q_K`.
    pub fn tail(&self) -> &[f64] {
        &self.values[2..]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_sequence_prepends_one() {
        let p = PSequence::from_tail(&[0.1, 0.05]).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.1, 0.05]);
        assert_eq!(p.p1(), 0.1);
        assert_eq!(p.last_index(), 2);
    }

    #[test]
    fn p_sequence_rejects_increase_and_bound_violation() {
        assert!(PSequence::from_tail(&[0.1, 0.2]).is_err());
        // p_3 ≤ p_1^2 = 0.01 fails
        assert!(PSequence::from_tail(&[0.1, 0.05, 0.02]).is_err());
        assert!(PSequence::from_tail(&[1.5]).is_err());
        assert!(PSequence::new(vec![0.9, 0.1]).is_err());
    }

    #[test]
    fn q_sequence_offsets() {
        let q = QSequence::from_tail(&[0.9, 0.8]).unwrap();
        assert_eq!(q.get(-1), Some(1.0));
        assert_eq!(q.get(0), Some(1.0));
        assert_eq!(q.get(2), Some(0.8));
        assert_eq!(q.get(3), None);
        assert_eq!(q.tail(), &[0.9, 0.8]);
        assert!(QSequence::from_tail(&[0.8, 0.9]).is_err());
    }
}
