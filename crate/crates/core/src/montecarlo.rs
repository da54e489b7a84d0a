//! Seeded simulation of the scan statistic and of the block maxima `W_k`.
//!
//! Replicates are split over a fixed number of streams. Stream `i` draws from
//! ChaCha8 seeded with `seed` on stream `i`, so the results depend only on
//! `(seed, streams)` and never on how many threads run them.

use rand::distributions::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scan::BernoulliScanSpec;

pub const DEFAULT_STREAMS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationPlan {
    pub spec: BernoulliScanSpec,
    pub reps: u64,
    pub seed: u64,
    pub streams: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationResult {
    pub estimate: f64,
    /// `1.96 · sqrt(est (1 − est) / reps)`
    pub half_width_95: f64,
    pub successes: u64,
    pub reps: u64,
}

impl SimulationResult {
    pub fn standard_error(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.reps as f64).sqrt()
    }
}

fn validate(reps: u64, streams: usize) -> Result<()> {
    if reps == 0 {
        return Err(Error::InvalidInput("reps must be >= 1".into()));
    }
    if streams == 0 {
        return Err(Error::InvalidInput("stream count must be >= 1".into()));
    }
    Ok(())
}

/// Replicates assigned to stream `i`: an even split, the remainder going to
/// the lowest streams.
fn stream_reps(reps: u64, streams: usize, i: usize) -> u64 {
    let s = streams as u64;
    reps / s + u64::from((i as u64) < reps % s)
}

fn stream_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

fn bernoulli(p: f64) -> Result<Bernoulli> {
    Bernoulli::new(p).map_err(|e| Error::InvalidInput(format!("p = {p}: {e}")))
}

/// Runs `f` on every stream, on `threads` workers if given.
fn run_streams<T, F>(streams: usize, threads: Option<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let work = || (0..streams).into_par_iter().map(&f).collect::<Vec<T>>();
    match threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

/// Whether one simulated sequence has every window sum at most `n`.
fn replicate_below(
    rng: &mut ChaCha8Rng,
    dist: &Bernoulli,
    spec: &BernoulliScanSpec,
    ring: &mut [u8],
) -> bool {
    let m = spec.window;
    let n = spec.threshold;
    ring.iter_mut().for_each(|v| *v = 0);
    let mut sum = 0usize;
    for i in 0..spec.trials {
        let y = dist.sample(rng) as u8;
        let slot = i % m;
        sum = sum + y as usize - ring[slot] as usize;
        ring[slot] = y;
        if i + 1 >= m && sum > n {
            return false;
        }
    }
    true
}

/// Fraction of simulated sequences with `S_m(N) ≤ n`.
pub fn simulate_scan_cdf(plan: &SimulationPlan) -> Result<SimulationResult> {
    simulate_scan_cdf_threads(plan, None)
}

pub fn simulate_scan_cdf_threads(
    plan: &SimulationPlan,
    threads: Option<usize>,
) -> Result<SimulationResult> {
    validate(plan.reps, plan.streams)?;
    let dist = bernoulli(plan.spec.p)?;
    let counts = run_streams(plan.streams, threads, |i| {
        let mut rng = stream_rng(plan.seed, i);
        let mut ring = vec![0u8; plan.spec.window];
        (0..stream_reps(plan.reps, plan.streams, i))
            .filter(|_| replicate_below(&mut rng, &dist, &plan.spec, &mut ring))
            .count() as u64
    })?;
    let successes: u64 = counts.iter().sum();
    let estimate = successes as f64 / plan.reps as f64;
    Ok(SimulationResult {
        estimate,
        half_width_95: 1.96 * (estimate * (1.0 - estimate) / plan.reps as f64).sqrt(),
        successes,
        reps: plan.reps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockSimulationPlan {
    pub window: usize,
    pub p: f64,
    pub threshold: usize,
    /// `L`; the simulation covers `Lm` trials and blocks `W_1..W_{L−1}`.
    pub blocks: usize,
    pub reps: u64,
    pub seed: u64,
    pub streams: usize,
}

/// Empirical block statistics; index `k − 1` holds block `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockSimulation {
    pub reps: u64,
    /// Frequency of `max(W_1..W_k) ≤ n`.
    pub q_hat: Vec<f64>,
    /// Frequency of `min(W_1..W_k) > n`.
    pub p_hat: Vec<f64>,
    /// Counts of `W_i > n and W_j > n`; the diagonal counts `W_i > n`.
    pub joint_exceed: Vec<Vec<u64>>,
}

impl BlockSimulation {
    /// Sample correlation of the indicators `1{W_i > n}` and `1{W_j > n}`
    /// (1-based block indices).
    pub fn exceedance_correlation(&self, i: usize, j: usize) -> f64 {
        let r = self.reps as f64;
        let a = self.joint_exceed[i - 1][i - 1] as f64 / r;
        let b = self.joint_exceed[j - 1][j - 1] as f64 / r;
        let ab = self.joint_exceed[i - 1][j - 1] as f64 / r;
        (ab - a * b) / (a * (1.0 - a) * b * (1.0 - b)).sqrt()
    }
}

#[derive(Default)]
struct BlockCounts {
    q: Vec<u64>,
    p: Vec<u64>,
    joint: Vec<Vec<u64>>,
}

pub fn simulate_block_sequence(plan: &BlockSimulationPlan) -> Result<BlockSimulation> {
    simulate_block_sequence_threads(plan, None)
}

pub fn simulate_block_sequence_threads(
    plan: &BlockSimulationPlan,
    threads: Option<usize>,
) -> Result<BlockSimulation> {
    validate(plan.reps, plan.streams)?;
    if plan.blocks < 2 {
        return Err(Error::InvalidInput(format!(
            "L must be >= 2, got {}",
            plan.blocks
        )));
    }
    BernoulliScanSpec::new(plan.window, plan.p, plan.window, plan.threshold)?;
    let dist = bernoulli(plan.p)?;
    let m = plan.window;
    let nb = plan.blocks - 1;
    let n = plan.threshold;

    let per_stream = run_streams(plan.streams, threads, |i| {
        let mut rng = stream_rng(plan.seed, i);
        let mut counts = BlockCounts {
            q: vec![0; nb],
            p: vec![0; nb],
            joint: vec![vec![0; nb]; nb],
        };
        let mut y = vec![0usize; plan.blocks * m];
        let mut w = vec![0usize; nb];
        for _ in 0..stream_reps(plan.reps, plan.streams, i) {
            y.iter_mut()
                .for_each(|v| *v = dist.sample(&mut rng) as usize);
            w.iter_mut().for_each(|v| *v = 0);
            // Z_s for s = 1..=(L−1)m+1, 0-based start s−1
            let mut z: usize = y[..m].iter().sum();
            for start in 0..=nb * m {
                if start > 0 {
                    z = z + y[start + m - 1] - y[start - 1];
                }
                let s = start + 1;
                // s lies in block k iff (k−1)m+1 ≤ s ≤ km+1
                let k_hi = ((s - 1) / m + 1).min(nb);
                let k_lo = if s > 1 && (s - 1) % m == 0 {
                    (s - 1) / m
                } else {
                    k_hi
                };
                for k in k_lo..=k_hi {
                    w[k - 1] = w[k - 1].max(z);
                }
            }
            let exceed: Vec<bool> = w.iter().map(|&v| v > n).collect();
            let mut all_below = true;
            let mut all_above = true;
            for k in 0..nb {
                all_below &= !exceed[k];
                all_above &= exceed[k];
                counts.q[k] += u64::from(all_below);
                counts.p[k] += u64::from(all_above);
                if exceed[k] {
                    for (c, &e) in counts.joint[k].iter_mut().zip(&exceed) {
                        *c += u64::from(e);
                    }
                }
            }
        }
        counts
    })?;

    let mut total = BlockCounts {
        q: vec![0; nb],
        p: vec![0; nb],
        joint: vec![vec![0; nb]; nb],
    };
    for c in per_stream {
        for k in 0..nb {
            total.q[k] += c.q[k];
            total.p[k] += c.p[k];
            for j in 0..nb {
                total.joint[k][j] += c.joint[k][j];
            }
        }
    }
    let r = plan.reps as f64;
    Ok(BlockSimulation {
        reps: plan.reps,
        q_hat: total.q.iter().map(|&c| c as f64 / r).collect(),
        p_hat: total.p.iter().map(|&c| c as f64 / r).collect(),
        joint_exceed: total.joint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(m: usize, p: f64, n_trials: usize, n: usize, reps: u64, seed: u64) -> SimulationPlan {
        SimulationPlan {
            spec: BernoulliScanSpec::new(m, p, n_trials, n).unwrap(),
            reps,
            seed,
            streams: DEFAULT_STREAMS,
        }
    }

    #[test]
    fn streams_partition_reps() {
        for &(reps, s) in &[(10u64, 3usize), (1, 16), (1_000_000, 16), (17, 17)] {
            let total: u64 = (0..s).map(|i| stream_reps(reps, s, i)).sum();
            assert_eq!(total, reps);
        }
    }

    #[test]
    fn zero_probability_is_certain() {
        let r = simulate_scan_cdf(&plan(4, 0.0, 20, 0, 1000, 1)).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.half_width_95, 0.0);
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let pl = plan(3, 0.5, 8, 2, 20_000, 7);
        let a = simulate_scan_cdf_threads(&pl, Some(1)).unwrap();
        let b = simulate_scan_cdf_threads(&pl, Some(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_plans() {
        assert!(simulate_scan_cdf(&plan(3, 0.5, 8, 2, 0, 1)).is_err());
        let mut pl = plan(3, 0.5, 8, 2, 10, 1);
        pl.streams = 0;
        assert!(simulate_scan_cdf(&pl).is_err());
    }

    #[test]
    fn block_complement_on_same_sample() {
        let sim = simulate_block_sequence(&BlockSimulationPlan {
            window: 3,
            p: 0.4,
            threshold: 2,
            blocks: 4,
            reps: 5000,
            seed: 3,
            streams: 4,
        })
        .unwrap();
        assert_eq!(sim.q_hat.len(), 3);
        assert!((sim.p_hat[0] + sim.q_hat[0] - 1.0).abs() < 1e-12);
    }
}
