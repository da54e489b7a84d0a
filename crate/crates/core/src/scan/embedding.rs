use super::BernoulliScanSpec;
use crate::error::{Error, Result};

/// Largest supported window; the chain has `2^(m−1)` live states.
pub const MAX_WINDOW: usize = 25;

/// Markov chain embedding of the scan statistic.
///
/// A live state is the bitmask of the last `m − 1` outcomes (bit 0 is the
/// most recent). Appending an outcome completes a window whose sum is
/// `popcount(state) + y`; if that exceeds `n` the mass moves to a single
/// absorbing failure state instead.
#[derive(Debug, Clone)]
pub struct EmbeddingChain {
    spec: BernoulliScanSpec,
    mask: usize,
    live: Vec<f64>,
    scratch: Vec<f64>,
    absorbed: f64,
    steps: usize,
}

impl EmbeddingChain {
    pub fn new(spec: BernoulliScanSpec) -> Result<Self> {
        if spec.window > MAX_WINDOW {
            return Err(Error::Capacity(format!(
                "window m = {} exceeds {MAX_WINDOW} (2^{} states)",
                spec.window,
                spec.window - 1
            )));
        }
        let states = 1usize << (spec.window - 1);
        let mut live = vec![0.0; states];
        live[0] = 1.0;
        Ok(Self {
            spec,
            mask: states - 1,
            live,
            scratch: vec![0.0; states],
            absorbed: 0.0,
            steps: 0,
        })
    }

    pub fn state_count(&self) -> usize {
        self.live.len()
    }

    /// Trials appended so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Appends one trial.
    pub fn step(&mut self) {
        let p = self.spec.p;
        let q = 1.0 - p;
        let n = self.spec.threshold as u32;
        let window_complete = self.steps + 1 >= self.spec.window;
        self.scratch.iter_mut().for_each(|v| *v = 0.0);
        let mut absorbed = 0.0;
        for (state, &w) in self.live.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let base = (state << 1) & self.mask;
            let ones = state.count_ones();
            for (y, prob) in [(0usize, q), (1usize, p)] {
                let mass = w * prob;
                if window_complete && ones + y as u32 > n {
                    absorbed += mass;
                } else {
                    // with m = 1 the mask is 0 and y never enters the state
                    self.scratch[base | (y & self.mask)] += mass;
                }
            }
        }
        std::mem::swap(&mut self.live, &mut self.scratch);
        self.absorbed += absorbed;
        self.steps += 1;
    }

    pub fn run(&mut self, steps: usize) {
        for _ in 0..steps {
            self.step();
        }
    }

    /// Mass still in live states.
    pub fn live_mass(&self) -> f64 {
        self.live.iter().sum()
    }

    /// Mass that has seen a window sum above the threshold.
    pub fn absorbed_mass(&self) -> f64 {
        self.absorbed
    }

    /// `P(S_m(steps) ≤ n)` for the trials appended so far.
    pub fn cdf(&self) -> f64 {
        if self.steps < self.spec.window {
            return 1.0;
        }
        1.0 - self.absorbed
    }

    pub fn live_distribution(&self) -> &[f64] {
        &self.live
    }
}

/// `P(S_m(N) ≤ n)` by Markov chain embedding in `O(N·2^(m−1))`.
pub fn exact_scan_cdf(spec: &BernoulliScanSpec) -> Result<f64> {
    if spec.is_certain() {
        return Ok(1.0);
    }
    let mut chain = EmbeddingChain::new(*spec)?;
    chain.run(spec.trials);
    Ok(chain.cdf())
}
