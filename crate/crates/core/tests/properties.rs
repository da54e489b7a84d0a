use proptest::prelude::*;
use scanex_core::extremes::{q_sequence_from_p, solve_cubic_t2};
use scanex_core::montecarlo::{
    simulate_block_sequence, simulate_scan_cdf, BlockSimulationPlan, SimulationPlan,
};
use scanex_core::{
    approx_qnlambda_centers, block_p_sequence, block_q_sequence, brute_force_scan_cdf,
    exact_scan_cdf, solve_lambda, BernoulliScanSpec, ErrorCoefficients, PSequence,
};

fn small_spec() -> impl Strategy<Value = (usize, f64, usize, usize)> {
    (1usize..=5, 0.01f64..0.99).prop_flat_map(|(m, p)| (Just(m), Just(p), m..=14usize, 0..=m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cdf_is_monotone_in_threshold_and_length((m, p, big_n, n) in small_spec()) {
        let at = |trials, thr| exact_scan_cdf(&BernoulliScanSpec::new(m, p, trials, thr).unwrap()).unwrap();
        let v = at(big_n, n);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!(at(big_n + 1, n) <= v + 1e-15);
        if n < m {
            prop_assert!(at(big_n, n + 1) >= v - 1e-15);
        }
    }

    #[test]
    fn chain_matches_enumeration((m, p, big_n, n) in small_spec()) {
        let spec = BernoulliScanSpec::new(m, p, big_n, n).unwrap();
        let a = exact_scan_cdf(&spec).unwrap();
        let b = brute_force_scan_cdf(&spec).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn boundary_thresholds(m in 1usize..=8, p in 0.0f64..=1.0, extra in 0usize..20) {
        let big_n = m + extra;
        let full = BernoulliScanSpec::new(m, p, big_n, m).unwrap();
        prop_assert_eq!(exact_scan_cdf(&full).unwrap(), 1.0);
        let zero = BernoulliScanSpec::new(m, p, big_n, 0).unwrap();
        let want = (1.0 - p).powi(big_n as i32);
        prop_assert!((exact_scan_cdf(&zero).unwrap() - want).abs() <= 1e-12);
    }

    #[test]
    fn cubic_root_in_bracket(alpha in 1e-6f64..=0.1) {
        let r = solve_cubic_t2(alpha).unwrap();
        prop_assert!(r.t2 > 1.0 && r.t2 < 1.0 / (3.0 * alpha).sqrt());
        prop_assert!((alpha * r.t2.powi(3) - r.t2 + 1.0).abs() <= 1e-12);
        prop_assert!(r.l > r.t2.powi(3));
    }

    #[test]
    fn coefficients_increase_with_alpha(a in 1e-4f64..0.099, d in 1e-4f64..1e-3) {
        let b = (a + d).min(0.1);
        let (lo, hi) = (ErrorCoefficients::new(a).unwrap(), ErrorCoefficients::new(b).unwrap());
        prop_assert!(hi.k >= lo.k && hi.gamma >= lo.gamma && hi.l >= lo.l);
    }

    #[test]
    fn block_p_respects_dependence_bound(m in 2usize..=6, p in 0.02f64..0.4, n in 1usize..=3) {
        prop_assume!(n < m);
        let ps = block_p_sequence(m, p, n, 8).unwrap();
        let p1 = ps.p1();
        for k in 1..=8 {
            let pk = ps.get(k).unwrap();
            prop_assert!(pk <= p1.powi(k.div_ceil(2) as i32) * (1.0 + 1e-12) + 1e-300);
            prop_assert!(pk <= ps.get(k - 1).unwrap() + 1e-15);
        }
    }

    #[test]
    fn block_sequences_agree_through_recursion(m in 2usize..=6, p in 0.02f64..0.5, n in 0usize..=3) {
        prop_assume!(n < m);
        let ps = block_p_sequence(m, p, n, 6).unwrap();
        let qs = block_q_sequence(m, p, n, 6).unwrap();
        let q = q_sequence_from_p(&ps);
        for k in 1..=6 {
            prop_assert!((q[k + 1] - qs.get(k as isize).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn geometric_root_is_closed_form(p1 in 1e-4f64..=0.1) {
        let p = PSequence::geometric(p1, 60).unwrap();
        let r = solve_lambda(&p, p1).unwrap();
        prop_assert!((r.lambda - 1.0 / (1.0 - p1)).abs() <= 1e-12);
        prop_assert!(r.lambda > r.bracket_low && r.lambda < r.bracket_high);
    }
}

#[test]
fn scan_blocks_satisfy_lambda_bounds() {
    // the W-block maxima behind the m=9, p=0.05, n=3 table row
    let ps = block_p_sequence(9, 0.05, 3, 12).unwrap();
    let qs = block_q_sequence(9, 0.05, 3, 12).unwrap();
    let p1 = ps.p1();
    let alpha = p1;
    let r = solve_lambda(&ps, alpha).unwrap();
    assert!((r.lambda - r.center_t1).abs() <= r.bound_t1);
    assert!((r.lambda - r.center_c1).abs() <= r.bound_c1);

    let c = approx_qnlambda_centers(&ps).unwrap();
    let (b_t2, b_c2) = c.bounds(p1, alpha).unwrap();
    for n in 4..=12 {
        let scaled = qs.get(n).unwrap() * r.lambda.powi(n as i32);
        assert!((scaled - c.mu1).abs() <= b_t2, "n={n}");
        assert!((scaled - c.nu1).abs() <= b_c2, "n={n}");
    }
}

#[test]
fn nonadjacent_blocks_are_uncorrelated() {
    let sim = simulate_block_sequence(&BlockSimulationPlan {
        window: 4,
        p: 0.3,
        threshold: 2,
        blocks: 6,
        reps: 200_000,
        seed: 11,
        streams: 8,
    })
    .unwrap();
    let exact = block_q_sequence(4, 0.3, 2, 5).unwrap();
    for k in 1..=5 {
        assert!(
            (sim.q_hat[k - 1] - exact.get(k as isize).unwrap()).abs() < 5e-3,
            "k={k}"
        );
    }
    // adjacent blocks share a window and are dependent; blocks two apart are not
    assert!(sim.exceedance_correlation(1, 2) > 0.05);
    for (i, j) in [(1, 3), (1, 4), (2, 5)] {
        assert!(sim.exceedance_correlation(i, j).abs() < 0.01, "({i}, {j})");
    }
}

#[test]
fn simulation_covers_exact_values() {
    let mut outside = 0;
    for i in 0..60u64 {
        let m = 1 + (i % 5) as usize;
        let big_n = m + (i % 11) as usize;
        let p = 0.1 + 0.8 * ((i * 37 % 60) as f64 / 60.0);
        let n = (i % (m as u64 + 1)) as usize;
        let spec = BernoulliScanSpec::new(m, p, big_n, n).unwrap();
        let exact = exact_scan_cdf(&spec).unwrap();
        let r = simulate_scan_cdf(&SimulationPlan {
            spec,
            reps: 20_000,
            seed: i,
            streams: 4,
        })
        .unwrap();
        let se = (exact * (1.0 - exact) / 20_000.0).sqrt();
        if (r.estimate - exact).abs() > 4.0 * se + 1e-12 {
            outside += 1;
        }
    }
    assert!(outside <= 1, "{outside} of 60 estimates beyond 4 se");
}
