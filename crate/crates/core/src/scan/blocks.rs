//! The block maxima `W_k = max_{(k−1)m+1 ≤ s ≤ km+1} Z_s`, a 1-dependent
//! stationary sequence with `S_m(Lm) = max(W_1, …, W_{L−1})`.

use super::embedding::{EmbeddingChain, MAX_WINDOW};
use super::BernoulliScanSpec;
use crate::error::{Error, Result};
use crate::sequences::{PSequence, QSequence};

/// Largest number of blocks either block sequence will compute.
pub const MAX_BLOCKS: usize = 32;

fn check(window: usize, kmax: usize) -> Result<()> {
    if window == 0 {
        return Err(Error::InvalidInput("window length m must be >= 1".into()));
    }
    if kmax == 0 {
        return Err(Error::InvalidInput("kmax must be >= 1".into()));
    }
    if kmax > MAX_BLOCKS {
        return Err(Error::Capacity(format!(
            "kmax = {kmax} exceeds {MAX_BLOCKS}"
        )));
    }
    if window > MAX_WINDOW {
        return Err(Error::Capacity(format!(
            "window m = {window} exceeds {MAX_WINDOW}"
        )));
    }
    Ok(())
}

/// `q_k = P(W_1 ≤ n, …, W_k ≤ n) = P(S_m((k+1)m) ≤ n)` for `k = 1..=kmax`.
///
/// One embedding run of `(kmax+1)m` trials, read off at every multiple of `m`.
pub fn block_q_sequence(window: usize, p: f64, threshold: usize, kmax: usize) -> Result<QSequence> {
    check(window, kmax)?;
    let spec = BernoulliScanSpec::new(window, p, (kmax + 1) * window, threshold)?;
    if spec.is_certain() {
        return QSequence::from_tail(&vec![1.0; kmax]);
    }
    let mut chain = EmbeddingChain::new(spec)?;
    chain.run(window);
    let mut tail = Vec::with_capacity(kmax);
    for _ in 0..kmax {
        chain.run(window);
        tail.push(chain.cdf());
    }
    QSequence::from_tail(&tail)
}

/// `p_k = P(W_1 > n, …, W_k > n)` for `k = 1..=kmax`.
///
/// Dynamic program over (last `m − 1` outcomes, current block already has an
/// exceedance). The window `Z_{km+1}` closes block `k` and opens block
/// `k + 1`, so at a block boundary the flag of the new block starts from that
/// window alone. Paths whose closing block never exceeded are dropped; the
/// surviving mass after block `k` is `p_k`.
pub fn block_p_sequence(window: usize, p: f64, threshold: usize, kmax: usize) -> Result<PSequence> {
    check(window, kmax)?;
    BernoulliScanSpec::new(window, p, window, threshold)?;
    let m = window;
    let n = threshold as u32;
    let states = 1usize << (m - 1);
    let mask = states - 1;
    let q = 1.0 - p;

    // index = state * 2 + flag
    let mut live = vec![0.0; 2 * states];
    let mut next = vec![0.0; 2 * states];
    live[0] = 1.0;

    let mut tail = Vec::with_capacity(kmax);
    let trials = (kmax + 1) * m;
    for i in 0..trials {
        next.iter_mut().for_each(|v| *v = 0.0);
        // 1-based index of the window completed by this trial, if any
        let s = (i + 1 >= m).then(|| i + 2 - m);
        let closes_block = matches!(s, Some(s) if s > 1 && (s - 1) % m == 0);
        for (idx, &w) in live.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let (state, flag) = (idx >> 1, idx & 1 == 1);
            let base = (state << 1) & mask;
            for (y, prob) in [(0usize, q), (1usize, p)] {
                let mass = w * prob;
                let mut new_flag = flag;
                if s.is_some() {
                    let exceed = state.count_ones() + y as u32 > n;
                    new_flag |= exceed;
                    if closes_block {
                        if !new_flag {
                            continue;
                        }
                        new_flag = exceed;
                    }
                }
                let to = (base | (y & mask)) * 2 + new_flag as usize;
                next[to] += mass;
            }
        }
        std::mem::swap(&mut live, &mut next);
        if closes_block {
            tail.push(live.iter().sum());
            if tail.len() == kmax {
                break;
            }
        }
    }
    PSequence::from_tail(&tail)
}
