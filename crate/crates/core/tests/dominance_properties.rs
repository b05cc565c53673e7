use approx::assert_relative_eq;
use proptest::prelude::*;
use ssdorder_core::dominance::{
    dominance_degree, maxima_mean, order_stat_mean, ssd_numeric, Degree, OrderStatistic, SsdOutcome,
};
use ssdorder_core::{Distribution, OrderStatSpec};

fn dist(s: &str) -> Distribution {
    s.parse().unwrap()
}

#[test]
fn uniform_order_statistic_means() {
    let u = dist("uniform(a=0,b=1)");
    for n in 1..=40 {
        for i in 1..=n {
            let m = order_stat_mean(&u, OrderStatSpec::new(i, n).unwrap()).unwrap();
            assert!(
                (m - i as f64 / (n + 1) as f64).abs() <= 1e-9,
                "i={i} n={n}: {m}"
            );
        }
    }
}

#[test]
fn degree_is_antitone_in_the_maxima_size() {
    let x = dist("dagum(a=3,p=2,b=3)");
    let y = dist("loglogistic(a=2,b=2)");
    let deg = dominance_degree(&x, &y, 20).unwrap();
    let Degree::Finite(k) = deg.k else {
        panic!("expected a finite degree, got {:?}", deg.k)
    };
    for h in 1..=k {
        let s = OrderStatSpec::maximum(h).unwrap();
        let v = ssd_numeric(&OrderStatistic::new(x, s), &OrderStatistic::new(y, s));
        assert_eq!(v.outcome, SsdOutcome::Holds, "h={h}: {v:?}");
    }
    let s = OrderStatSpec::maximum(k + 1).unwrap();
    let v = ssd_numeric(&OrderStatistic::new(x, s), &OrderStatistic::new(y, s));
    assert_eq!(v.outcome, SsdOutcome::Fails);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn log_logistic_degrees_are_antitone(ax in 2.2f64..6.0, bx in 1.5f64..3.0) {
        let x = Distribution::new(ssdorder_core::Family::LogLogistic { a: ax, b: bx }).unwrap();
        let y = dist("loglogistic(a=2,b=1)");
        let deg = match dominance_degree(&x, &y, 8) {
            Ok(d) => d,
            Err(_) => return Ok(()),
        };
        let top = match deg.k {
            Degree::Finite(k) => k,
            Degree::Fsd => 8,
        };
        for h in 1..=top {
            let s = OrderStatSpec::maximum(h).unwrap();
            let v = ssd_numeric(&OrderStatistic::new(x, s), &OrderStatistic::new(y, s));
            prop_assert!(v.outcome != SsdOutcome::Fails, "h={} {:?}", h, v);
        }
    }

    #[test]
    fn closed_form_maxima_agree_with_quadrature(a in 1.5f64..6.0, p in 0.5f64..3.0, b in 0.5f64..3.0, k in 1u32..20) {
        let d = Distribution::new(ssdorder_core::Family::Dagum { a, p, b }).unwrap();
        let closed = maxima_mean(&d, k).unwrap();
        let quad = order_stat_mean(&d, OrderStatSpec::maximum(k).unwrap()).unwrap();
        prop_assert!((closed - quad).abs() <= 1e-6 * closed.abs(), "{} vs {}", closed, quad);
    }
}

#[test]
fn gamma_means_match_monte_carlo_order_statistics() {
    let g = dist("gamma(a=2,b=2)");
    let s = OrderStatSpec::new(43, 44).unwrap();
    let exact = order_stat_mean(&g, s).unwrap();
    let reps = 20_000;
    let (mut sum, mut sq) = (0.0, 0.0);
    for r in 0..reps {
        let mut xs = g.sample(44, r);
        xs.sort_by(f64::total_cmp);
        sum += xs[42];
        sq += xs[42] * xs[42];
    }
    let mean = sum / reps as f64;
    let se = ((sq / reps as f64 - mean * mean) / reps as f64).sqrt();
    assert!((mean - exact).abs() <= 3.0 * se, "{exact} vs {mean} ± {se}");
    assert_relative_eq!(mean, exact, max_relative = 1e-2);
}
