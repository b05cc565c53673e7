mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ssdorder_core::conditions::{corollary1, min_rank};
use ssdorder_core::dominance::SsdOutcome;
use ssdorder_core::reference::{expected_transformed_beta, OrderStatSpec, ReferenceTransform};
use ssdorder_core::ConvexityClass;

fn rank_pair() -> impl Strategy<Value = (OrderStatSpec, OrderStatSpec)> {
    any::<u64>().prop_map(|s| common::random_rank_pair(&mut ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn stronger_class_conditions_imply_weaker_ones((si, sj) in rank_pair()) {
        if let Err(e) = common::implication_chain_holds(si, sj) {
            prop_assert!(false, "{}", e);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn min_rank_is_the_first_certified_index(
        class in prop::sample::select(ConvexityClass::ALL.to_vec()),
        n in 1u32..150,
        m in 1u32..150,
        j_frac in 0.0f64..1.0,
    ) {
        let j = 1 + ((m - 1) as f64 * j_frac) as u32;
        let sj = OrderStatSpec::new(j, m).unwrap();
        let r = min_rank(class, n, sj).unwrap();
        let certified = |i| corollary1(class, OrderStatSpec::new(i, n).unwrap(), sj).certified;
        match r.rank {
            Some(k) => {
                prop_assert!(certified(k));
                prop_assert!((j..k).all(|i| !certified(i)));
                // The predicate is monotone in i.
                prop_assert!((k..=n).all(certified));
            }
            None => prop_assert!((j.min(n + 1)..=n).all(|i| !certified(i))),
        }
    }
}

#[test]
fn transformed_beta_means_increase_in_rank() {
    for t in ReferenceTransform::ALL {
        for n in 1..=60 {
            let means: Vec<f64> = (1..=n)
                .map(|i| expected_transformed_beta(t, OrderStatSpec::new(i, n).unwrap()))
                .collect();
            assert!(means.windows(2).all(|w| w[1] > w[0]), "{} n={n}", t.name());
        }
    }
}

proptest! {
    // Many cases at once: 4.5 standard errors keeps the chance of a false
    // alarm over the whole run below 1e-3.
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_forms_match_monte_carlo(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, s) = common::random_beta_spec(&mut rng);
        let exact = expected_transformed_beta(t, s);
        let (mean, se) = common::monte_carlo_transformed_beta(&mut rng, t, s, 20_000);
        prop_assert!((mean - exact).abs() <= 4.5 * se, "{} {}: {} vs {} ± {}", t.name(), s, exact, mean, se);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certified_pairs_are_never_refuted_numerically(seed in any::<u64>()) {
        let case = common::random_soundness_case(&mut ChaCha8Rng::seed_from_u64(seed));
        match common::corollary_is_sound(&case) {
            Ok(outcome) => prop_assert!(outcome != SsdOutcome::Fails),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
