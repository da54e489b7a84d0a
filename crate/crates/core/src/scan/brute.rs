use super::BernoulliScanSpec;
use crate::error::{Error, Result};

/// Enumeration is over `2^N` outcome strings.
pub const BRUTE_FORCE_MAX_TRIALS: usize = 22;

/// `P(S_m(N) ≤ n)` by summing the probability of every outcome string whose
/// largest window sum is at most `n`. Reference oracle for the embedding.
pub fn brute_force_scan_cdf(spec: &BernoulliScanSpec) -> Result<f64> {
    let (m, big_n, n) = (spec.window, spec.trials, spec.threshold as u32);
    if big_n > BRUTE_FORCE_MAX_TRIALS {
        return Err(Error::Capacity(format!(
            "brute force limited to N <= {BRUTE_FORCE_MAX_TRIALS}, got {big_n}"
        )));
    }
    if big_n < m {
        return Ok(1.0);
    }
    let p = spec.p;
    let weight: Vec<f64> = (0..=big_n)
        .map(|ones| p.powi(ones as i32) * (1.0 - p).powi((big_n - ones) as i32))
        .collect();
    let window_mask: u32 = (1u32 << m) - 1;
    let mut total = 0.0;
    for x in 0u32..(1u32 << big_n) {
        let max_window = (0..=big_n - m)
            .map(|t| ((x >> t) & window_mask).count_ones())
            .max()
            .unwrap_or(0);
        if max_window <= n {
            total += weight[x.count_ones() as usize];
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_counted() {
        // 000, 001, 010, 100, 101
        let s = BernoulliScanSpec::new(2, 0.5, 3, 1).unwrap();
        assert_eq!(brute_force_scan_cdf(&s).unwrap(), 0.625);
        let s = BernoulliScanSpec::new(3, 0.5, 8, 2).unwrap();
        assert_eq!(brute_force_scan_cdf(&s).unwrap(), 0.58203125);
    }

    #[test]
    fn no_ones_allowed() {
        let p: f64 = 0.23;
        let s = BernoulliScanSpec::new(1, p, 9, 0).unwrap();
        let v = brute_force_scan_cdf(&s).unwrap();
        assert!((v - (1.0 - p).powi(9)).abs() < 1e-15);
    }

    #[test]
    fn capacity() {
        let s = BernoulliScanSpec::new(2, 0.5, 23, 1).unwrap();
        assert!(brute_force_scan_cdf(&s).unwrap_err().is_capacity());
    }
}
