mod common;

use proptest::prelude::*;

use symdyn::counts::transition_counts;
use symdyn::dynamics::{generate_trajectory, map_apply, MapSpec, NoiseSpec};
use symdyn::entropy::expected_info;
use symdyn::inference::{log_evidence, uniform_prior, DirichletPrior};
use symdyn::order::{order_posterior_symmetric, OrderPriorKind, OrderRange};
use symdyn::special::digamma;
use symdyn::sweep::{run_sweep, SweepConfig};
use symdyn::symbolize::SymbolSequence;

use common::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectories_stay_in_unit_interval(seed in any::<u64>(), sigma in 0.0f64..=0.1, r in 3.0f64..=4.0) {
        let t = generate_trajectory(&MapSpec::logistic(r).unwrap(), &NoiseSpec::new(sigma).unwrap(), 2_000, 100, seed).unwrap();
        prop_assert_eq!(t.len(), 2_000);
        prop_assert!(t.states().iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn trajectories_are_reproducible(seed in any::<u64>(), sigma in 0.0f64..=0.05) {
        let map = MapSpec::logistic(4.0).unwrap();
        let noise = NoiseSpec::new(sigma).unwrap();
        let a = generate_trajectory(&map, &noise, 500, 50, seed).unwrap();
        let b = generate_trajectory(&map, &noise, 500, 50, seed).unwrap();
        let bits = |t: &symdyn::dynamics::Trajectory| t.states().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&a), bits(&b));
        prop_assert_eq!(a.meta().seed, Some(seed));
    }

    #[test]
    fn noiseless_trajectory_is_repeated_map_apply(seed in any::<u64>(), r in 0.5f64..=4.0) {
        let map = MapSpec::logistic(r).unwrap();
        let t = generate_trajectory(&map, &NoiseSpec::none(), 300, 10, seed).unwrap();
        for w in t.states().windows(2) {
            prop_assert_eq!(map_apply(&map, w[0]).unwrap().to_bits(), w[1].to_bits());
        }
    }

    // Splitting the data anywhere, the evidence of the whole equals the
    // evidence of the prefix times the predictive probability of the rest.
    #[test]
    fn evidence_chain_rule(s in proptest::collection::vec(0u8..2, 1..=12), k in 0usize..=3, alpha in 0.2f64..3.0) {
        prop_assume!(s.len() > k);
        let seq = SymbolSequence::new(s.clone(), 2).unwrap();
        let prior = DirichletPrior::symmetric(k, 2, alpha).unwrap();
        let exact = log_evidence(&transition_counts(&seq, k).unwrap(), &prior).unwrap().value;
        prop_assert!((exact - sequential_log_evidence(&s, k, alpha)).abs() < 1e-10);
    }

    #[test]
    fn evidence_counts_match_enumeration(s in proptest::collection::vec(0u8..2, 4..200), k in 0usize..=4) {
        prop_assume!(s.len() > k);
        let table = transition_counts(&SymbolSequence::new(s.clone(), 2).unwrap(), k).unwrap();
        for (ctx, row) in naive_counts(&s, k).iter().enumerate() {
            let ctx_syms: Vec<u8> = (0..k).rev().map(|b| ((ctx >> b) & 1) as u8).collect();
            prop_assert_eq!(table.count(&ctx_syms, 0), row[0]);
            prop_assert_eq!(table.count(&ctx_syms, 1), row[1]);
        }
    }

    #[test]
    fn digamma_matches_series(x in 0.01f64..50.0) {
        prop_assert!((digamma(x).unwrap() - digamma_series(x)).abs() < 1e-12);
    }
}

#[test]
fn evidence_matches_monte_carlo_with_nonuniform_alpha() {
    let mut rng = rng(21);
    for i in 0..10u64 {
        let k = (i % 3) as usize;
        let alpha = 0.5 + i as f64 * 0.3;
        let seq = random_binary(&mut rng, 10 + i as usize);
        let exact = log_evidence(
            &transition_counts(&seq, k).unwrap(),
            &DirichletPrior::symmetric(k, 2, alpha).unwrap(),
        )
        .unwrap()
        .value;
        let mc = monte_carlo_evidence(seq.symbols(), k, alpha, 400_000, 500 + i);
        let z = (exact.exp() - mc.mean).abs() / mc.std_error;
        assert!(z < 3.0, "instance {i}: z = {z}");
    }
}

#[test]
fn expected_info_matches_posterior_sampling_with_nonuniform_alpha() {
    let mut rng = rng(22);
    for i in 0..6u64 {
        let k = (i % 3) as usize;
        let alpha = 0.4 + i as f64 * 0.5;
        let seq = random_binary(&mut rng, 30);
        let est = expected_info(
            &transition_counts(&seq, k).unwrap(),
            &DirichletPrior::symmetric(k, 2, alpha).unwrap(),
        )
        .unwrap();
        let mc = monte_carlo_expected_info(seq.symbols(), k, alpha, 200_000, 700 + i);
        let z = (est.expected_info - mc.mean).abs() / mc.std_error;
        assert!(z < 3.0, "instance {i}: z = {z}");
    }
}

#[test]
fn golden_mean_limit() {
    let truth = markov_entropy_rate(0.5, 0.0);
    let mut rng = rng(23);
    let seq = markov_chain(&mut rng, 100_000, 0.5, 0.0);
    for k in 1..=3 {
        let est = expected_info(
            &transition_counts(&seq, k).unwrap(),
            &uniform_prior(k, 2).unwrap(),
        )
        .unwrap();
        assert!(
            (est.expected_info - truth).abs() < 0.01,
            "k = {k}: {}",
            est.expected_info
        );
    }
}

#[test]
fn biased_chain_entropy_rate() {
    let (p01, p11) = (0.2, 0.7);
    let truth = markov_entropy_rate(p01, p11);
    let mut rng = rng(24);
    let seq = markov_chain(&mut rng, 100_000, p01, p11);
    let est = expected_info(
        &transition_counts(&seq, 1).unwrap(),
        &uniform_prior(1, 2).unwrap(),
    )
    .unwrap();
    assert!(
        (est.expected_info - truth).abs() < 0.01,
        "{} vs {truth}",
        est.expected_info
    );
}

#[test]
fn constant_streams_have_vanishing_rate() {
    let range = OrderRange::new(1, 8, 2).unwrap();
    for symbol in [0u8, 1] {
        let seq = SymbolSequence::new(vec![symbol; 10_000], 2).unwrap();
        let post =
            order_posterior_symmetric(&seq, range, OrderPriorKind::SizePenalty, 1.0).unwrap();
        assert_eq!(post.selected(), 1);
        // Unvisited contexts keep prior mass, so the estimate grows with k;
        // it stays below 0.01 bits up to k = 4.
        for k in 1..=4 {
            let est = expected_info(
                &transition_counts(&seq, k).unwrap(),
                &uniform_prior(k, 2).unwrap(),
            )
            .unwrap();
            assert!(est.expected_info < 0.01, "k = {k}: {}", est.expected_info);
        }
    }
}

#[test]
fn expected_info_and_plugin_rate_differ_by_the_correction() {
    let mut rng = rng(25);
    let seq = random_binary(&mut rng, 20_000);
    for k in 0..=5 {
        let est = expected_info(
            &transition_counts(&seq, k).unwrap(),
            &uniform_prior(k, 2).unwrap(),
        )
        .unwrap();
        let gap = est.expected_info - est.h_rate_q;
        // o(1/β) remainder is far below the correction itself here.
        assert!(
            (gap - est.kl_correction).abs() < 0.05 * est.kl_correction,
            "k = {k}"
        );
    }
}

#[test]
fn entropy_curve_is_symmetric_about_one_half() {
    let result = run_sweep(&SweepConfig::default()).unwrap();
    let rows = &result.rows;
    let n = rows.len();
    for i in 0..n {
        let (a, b) = (
            rows[i].h_expected_bits.unwrap(),
            rows[n - 1 - i].h_expected_bits.unwrap(),
        );
        assert!((a - b).abs() < 0.1, "d = {}: {a} vs {b}", rows[i].d);
        let total: f64 = rows[i].p_order.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
