use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;
use rocbound_core::channel::{bac_mutual_information, biawgn_mi, Prior, QuadratureSet};
use rocbound_core::montecarlo::{estimate_detector_roc, EstimateWithCI, GainModel, Scenario, SignalModel};
use rocbound_core::roc::{bound_pmd, equilibrium_probability, OperatingPoint};
use rocbound_core::special::{binary_entropy, marcum_q, marcum_q_complement};

fn rules() -> &'static QuadratureSet {
    static RULES: OnceLock<QuadratureSet> = OnceLock::new();
    RULES.get_or_init(QuadratureSet::default)
}

fn prior(a: f64) -> Prior {
    Prior::new(a).unwrap()
}

fn entropy(a: f64) -> f64 {
    binary_entropy(a).unwrap()
}

fn bac(a: f64, pfa: f64, pmd: f64) -> f64 {
    bac_mutual_information(prior(a), OperatingPoint::new(pfa, pmd).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn bac_mi_lies_between_zero_and_prior_entropy(a in 0.01..0.99f64, pfa in 0.0..1.0f64, pmd in 0.0..1.0f64) {
        let mi = bac(a, pfa, pmd);
        prop_assert!(mi >= 0.0);
        prop_assert!(mi <= entropy(a) + 1e-12);
    }

    #[test]
    fn bac_mi_invariant_under_relabeling(a in 0.01..0.99f64, pfa in 0.0..1.0f64, pmd in 0.0..1.0f64) {
        let d = bac(a, pfa, pmd) - bac(1.0 - a, pmd, pfa);
        prop_assert!(d.abs() < 1e-12, "difference {d}");
    }

    #[test]
    fn bac_mi_vanishes_on_the_chance_line(a in 0.01..0.99f64, pfa in 0.0..1.0f64) {
        prop_assert!(bac(a, pfa, 1.0 - pfa) < 1e-15);
    }

    #[test]
    fn bound_is_achieved_with_equality(a in 0.05..0.95f64, frac in 0.05..0.95f64, pfa in 0.02..0.98f64) {
        let mi = frac * entropy(a);
        let pmd = bound_pmd(prior(a), mi, pfa).unwrap();
        if pmd > 1e-9 {
            prop_assert!((bac(a, pfa, pmd) - mi).abs() < 1e-8);
        }
    }

    #[test]
    fn bound_falls_as_information_grows(a in 0.05..0.95f64, f1 in 0.0..1.0f64, f2 in 0.0..1.0f64, pfa in 0.01..0.99f64) {
        let (lo, hi) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
        let h = entropy(a);
        let p_lo = bound_pmd(prior(a), lo * h, pfa).unwrap();
        let p_hi = bound_pmd(prior(a), hi * h, pfa).unwrap();
        prop_assert!(p_hi <= p_lo + 1e-9);
    }

    #[test]
    fn bound_falls_as_false_alarms_grow(a in 0.05..0.95f64, frac in 0.0..1.0f64, x in 0.01..0.99f64, y in 0.01..0.99f64) {
        let (p1, p2) = if x < y { (x, y) } else { (y, x) };
        let mi = frac * entropy(a);
        prop_assert!(bound_pmd(prior(a), mi, p2).unwrap() <= bound_pmd(prior(a), mi, p1).unwrap() + 1e-9);
    }

    #[test]
    fn equilibrium_round_trip(a in 0.02..0.98f64, frac in 0.01..0.99f64) {
        let mi = frac * entropy(a);
        let p = equilibrium_probability(prior(a), mi).unwrap();
        prop_assert!((0.0..=0.5).contains(&p));
        prop_assert!((bac(a, p, p) - mi).abs() < 1e-10);
    }

    #[test]
    fn marcum_monotone_in_both_arguments(m in 1u64..12, a in 0.0..8.0f64, da in 0.0..2.0f64, b in 0.01..10.0f64, db in 0.0..2.0f64) {
        prop_assert!(marcum_q(m, a + da, b).unwrap() >= marcum_q(m, a, b).unwrap() - 1e-13);
        prop_assert!(marcum_q(m, a, b + db).unwrap() <= marcum_q(m, a, b).unwrap() + 1e-13);
        let s = marcum_q(m, a, b).unwrap() + marcum_q_complement(m, a, b).unwrap();
        prop_assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_interval_contains_estimate(trials in 1u64..100_000, frac in 0.0..=1.0f64) {
        let s = (frac * trials as f64).round() as u64;
        let e = EstimateWithCI::wilson(s, trials);
        prop_assert!(e.ci_low <= e.value && e.value <= e.ci_high);
        prop_assert!(e.ci_low >= 0.0 && e.ci_high <= 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn biawgn_mi_increases_with_snr(a in 0.02..0.98f64, s in 0.0..40.0f64, ds in 0.01..5.0f64) {
        let p = prior(a);
        let lo = biawgn_mi(p, s, &rules().hermite).unwrap();
        let hi = biawgn_mi(p, s + ds, &rules().hermite).unwrap();
        prop_assert!(hi >= lo - 1e-12);
        prop_assert!(hi <= p.entropy() + 1e-12);
    }
}

#[test]
fn wilson_width_scales_with_root_trials() {
    let ratio = EstimateWithCI::wilson(500, 1_000).width() / EstimateWithCI::wilson(50_000, 100_000).width();
    assert!((ratio - 10.0).abs() < 2.0, "ratio {ratio}");
}

#[cfg(feature = "parallel")]
#[test]
fn monte_carlo_is_independent_of_thread_count() {
    let sc = Scenario::new(
        2,
        3,
        0.4,
        GainModel::Rayleigh(vec![1.0, 2.0]),
        SignalModel::Fixed(vec![Complex64::new(0.5, 0.5); 3]),
        vec![1.0, 0.5],
        99,
    )
    .unwrap();
    let grid = [0.0, 2.0, 4.0, 8.0];
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate_detector_roc(&sc, &grid, 20_000).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}
