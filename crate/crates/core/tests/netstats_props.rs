mod common;

use cliqster::netstats::fit_power_law;
use common::zipf_samples;
use proptest::prelude::*;

proptest! {
    #![proptest_config(common::config())]

    #[test]
    fn values_below_fixed_x_min_are_ignored(
        tail in proptest::collection::vec(5u64..500, 3..60),
        low in proptest::collection::vec(1u64..5, 0..40),
    ) {
        prop_assume!(tail.iter().any(|&x| x != tail[0]));
        let base = fit_power_law(&tail, Some(5)).unwrap();
        let mut padded = tail.clone();
        padded.extend(&low);
        prop_assert_eq!(base, fit_power_law(&padded, Some(5)).unwrap());
    }

    #[test]
    fn fits_are_well_formed(data in proptest::collection::vec(1u64..1000, 12..200)) {
        prop_assume!(data.iter().any(|&x| x != data[0]));
        if let Ok(fit) = fit_power_law(&data, None) {
            prop_assert!(fit.alpha > 1.0);
            prop_assert!(fit.n_tail >= 2);
            prop_assert!((0.0..=1.0).contains(&fit.ks));
            prop_assert!(data.contains(&fit.x_min));
        }
    }
}

#[test]
fn squaring_the_tail_halves_the_excess_exponent() {
    let tail: Vec<u64> = zipf_samples(2.5, 2_000_000, 4).into_iter().filter(|&x| x >= 20).collect();
    assert!(tail.len() > 5000);
    let squared: Vec<u64> = tail.iter().map(|&x| x * x).collect();
    let a = fit_power_law(&tail, Some(20)).unwrap();
    let b = fit_power_law(&squared, Some(400)).unwrap();
    let ratio = (b.alpha - 1.0) / ((a.alpha - 1.0) / 2.0);
    assert!((ratio - 1.0).abs() <= 0.05, "{a:?} {b:?}");
}

#[test]
fn recovers_exponent_from_exact_draws() {
    for &alpha in &[1.8, 2.5, 3.1] {
        let fit = fit_power_law(&zipf_samples(alpha, 20_000, 1), None).unwrap();
        assert!((fit.alpha - alpha).abs() <= 0.1, "{alpha}: {fit:?}");
    }
}

#[test]
fn zipf_oracle_matches_its_law() {
    // P(X = 1) = 1 / ζ(2) for alpha = 2
    let draws = zipf_samples(2.0, 200_000, 9);
    let ones = draws.iter().filter(|&&x| x == 1).count() as f64 / draws.len() as f64;
    let expected = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    assert!((ones - expected).abs() < 0.005);
}
