use proptest::prelude::*;
use quasimean::aop::{error_bound, monte_carlo_gap};
use quasimean::families::{exp_tx_family, power_family};
use quasimean::generator::Generator;
use quasimean::interval::Interval;
use quasimean::mean::{evaluate_mean, Sample, Weights};
use quasimean::scale::solve_scale;

fn data(lo: f64, hi: f64) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..=6).prop_flat_map(move |n| {
        (
            prop::collection::vec(lo..hi, n),
            prop::collection::vec(0.05f64..1.0, n),
        )
    })
}

fn sample(a: &[f64], w: &[f64]) -> (Sample, Weights) {
    (
        Sample::new(a.to_vec()).unwrap(),
        Weights::normalized(w.to_vec()).unwrap(),
    )
}

fn generators() -> Vec<Generator> {
    vec![
        Generator::power(-7.5),
        Generator::power(-1.0),
        Generator::ln(),
        Generator::power(0.5),
        Generator::power(3.0),
        Generator::power(40.0),
        Generator::exp(),
        Generator::x_ln_x()
            .restrict(Interval::closed(0.5, 50.0).unwrap())
            .unwrap(),
    ]
}

proptest! {
    #[test]
    fn mean_lies_between_min_and_max((a, w) in data(0.5, 50.0), which in 0usize..8) {
        let g = &generators()[which];
        let (a, w) = sample(&a, &w);
        let m = evaluate_mean(g, &a, &w).unwrap();
        prop_assert!(a.min() <= m && m <= a.max(), "{} gave {m} outside [{}, {}]", g.name(), a.min(), a.max());
    }

    #[test]
    fn permutation_leaves_mean_unchanged((a, w) in data(0.5, 50.0), which in 0usize..8, rot in 0usize..6) {
        let g = &generators()[which];
        let (s, ws) = sample(&a, &w);
        let k = rot % a.len();
        let (mut a2, mut w2) = (a.clone(), w.clone());
        a2.rotate_left(k);
        w2.rotate_left(k);
        a2.reverse();
        w2.reverse();
        let (s2, ws2) = sample(&a2, &w2);
        prop_assert_eq!(evaluate_mean(g, &s, &ws).unwrap(), evaluate_mean(g, &s2, &ws2).unwrap());
    }

    #[test]
    fn affine_transform_leaves_mean_unchanged(
        (a, w) in data(0.5, 50.0),
        which in 0usize..8,
        alpha in prop_oneof![-100.0f64..-0.01, 0.01f64..100.0],
        beta in -100.0f64..100.0,
    ) {
        let g = &generators()[which];
        let h = g.affine(alpha, beta).unwrap();
        let (a, w) = sample(&a, &w);
        let (mg, mh) = (evaluate_mean(g, &a, &w).unwrap(), evaluate_mean(&h, &a, &w).unwrap());
        prop_assert!((mg - mh).abs() <= 1e-12 * mg.abs().max(1.0), "{mg} vs {mh}");
    }

    #[test]
    fn power_means_increase_with_exponent((a, w) in data(0.1, 10.0), r in -10.0f64..10.0, d in 0.01f64..5.0) {
        let (a, w) = sample(&a, &w);
        let lo = evaluate_mean(&Generator::power(r), &a, &w).unwrap();
        let hi = evaluate_mean(&Generator::power(r + d), &a, &w).unwrap();
        prop_assert!(lo <= hi, "M_{r} = {lo} > M_{} = {hi}", r + d);
        if !a.is_constant() {
            prop_assert!(lo < hi);
        }
    }

    #[test]
    fn power_means_are_homogeneous((a, w) in data(0.1, 10.0), r in -10.0f64..10.0, lambda in 0.01f64..100.0) {
        let (s, ws) = sample(&a, &w);
        let scaled: Vec<f64> = a.iter().map(|x| lambda * x).collect();
        let (s2, _) = sample(&scaled, &w);
        let g = Generator::power(r);
        let (m, m2) = (evaluate_mean(&g, &s, &ws).unwrap(), evaluate_mean(&g, &s2, &ws).unwrap());
        prop_assert!((m2 - lambda * m).abs() <= 1e-12 * m2, "{m2} vs {}", lambda * m);
    }

    #[test]
    fn exponential_means_commute_with_shifts((a, w) in data(-5.0, 5.0), t in -5.0f64..5.0, c in -10.0f64..10.0) {
        let (s, ws) = sample(&a, &w);
        let shifted: Vec<f64> = a.iter().map(|x| x + c).collect();
        let (s2, _) = sample(&shifted, &w);
        let g = exp_tx_family().make(t);
        let (m, m2) = (evaluate_mean(&g, &s, &ws).unwrap(), evaluate_mean(&g, &s2, &ws).unwrap());
        prop_assert!((m2 - (m + c)).abs() <= 1e-12 * (1.0 + m2.abs()) * 4.0, "{m2} vs {}", m + c);
    }

    #[test]
    fn solver_recovers_planted_exponent((a, w) in data(0.1, 10.0), r in -8.0f64..8.0) {
        let (a, w) = sample(&a, &w);
        prop_assume!(a.max() / a.min() > 2.0);
        let fam = power_family();
        let target = evaluate_mean(&fam.make(r), &a, &w).unwrap();
        prop_assume!(target > a.min() && target < a.max());
        let got = solve_scale(&fam, &a, &w, target).unwrap();
        prop_assert!((got.mean_at_t - target).abs() <= 1e-9 * a.spread());
        prop_assert!((got.t_star - r).abs() <= 1e-6, "planted {r}, got {}", got.t_star);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bound_dominates_observed_gaps(r in 0.5f64..3.0, delta in 0.001f64..0.3, lo in 0.5f64..2.0, width in 0.1f64..2.0, seed in any::<u64>()) {
        let u = Interval::closed(lo, lo + width).unwrap();
        let (f, k) = (Generator::power(r), Generator::power(r + delta));
        let cert = error_bound(&f, &k, &u).unwrap();
        let gap = monte_carlo_gap(&f, &k, &u, 200, seed).unwrap();
        prop_assert!(cert.bound >= gap.max_gap, "bound {} < gap {}", cert.bound, gap.max_gap);
    }
}
