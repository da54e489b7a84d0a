//! The discrete scan statistic `S_m(N) = max_t (Y_t + … + Y_{t+m−1})` over
//! i.i.d. Bernoulli trials.

mod blocks;
mod brute;
mod embedding;

use serde::Serialize;

use crate::error::{Error, Result};

pub use blocks::{block_p_sequence, block_q_sequence, MAX_BLOCKS};
pub use brute::{brute_force_scan_cdf, BRUTE_FORCE_MAX_TRIALS};
pub use embedding::{exact_scan_cdf, EmbeddingChain, MAX_WINDOW};

/// One scan problem: `P(S_m(N) ≤ n)` for Bernoulli(`p`) trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BernoulliScanSpec {
    /// Window length `m`.
    pub window: usize,
    /// Success probability.
    pub p: f64,
    /// Number of trials `N`.
    pub trials: usize,
    /// Threshold `n`.
    pub threshold: usize,
}

impl BernoulliScanSpec {
    pub fn new(window: usize, p: f64, trials: usize, threshold: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidInput("window length m must be >= 1".into()));
        }
        if trials == 0 {
            return Err(Error::InvalidInput(
                "number of trials N must be >= 1".into(),
            ));
        }
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidInput(format!("p = {p} not in [0, 1]")));
        }
        Ok(Self {
            window,
            p,
            trials,
            threshold,
        })
    }

    /// Same window, probability and threshold with a different `N`.
    pub fn with_trials(&self, trials: usize) -> Result<Self> {
        Self::new(self.window, self.p, trials, self.threshold)
    }

    /// `N < m`: no complete window exists and `S_m(N)` is a maximum over the
    /// empty set. The distribution function is taken to be 1.
    pub fn is_degenerate(&self) -> bool {
        self.trials < self.window
    }

    /// `n ≥ m` or no windows: the event `S_m(N) ≤ n` is certain.
    pub(crate) fn is_certain(&self) -> bool {
        self.is_degenerate() || self.threshold >= self.window
    }
}
