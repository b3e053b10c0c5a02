use proptest::prelude::*;
use scrutiny::io::{read_rows, rows_to_string, wtp_sweep, Format, RunConfig, WtpRow};
use scrutiny::oracle::brute_force_voi;
use scrutiny::{
    classify_pair, conditional_second, h_set, pairwise_outcome, pb_probability, posterior_after_both,
    posterior_after_first, signal_probability, willingness_to_pay, Environment, InformationStructure,
    PayoffStructure, Signal, SignalValue,
};

use SignalValue::{Alpha, Beta};

fn precisions() -> impl Strategy<Value = (f64, f64)> {
    (0.501f64..0.999, 0.501f64..0.999)
}

fn prior() -> impl Strategy<Value = f64> {
    0.0f64..=1.0
}

fn interior() -> impl Strategy<Value = f64> {
    0.001f64..0.999
}

fn value() -> impl Strategy<Value = SignalValue> {
    prop_oneof![Just(Alpha), Just(Beta)]
}

fn signal() -> impl Strategy<Value = Signal> {
    (value(), value()).prop_map(|(a, b)| Signal::new(a, b))
}

fn env(t: (f64, f64), du: f64, c: f64) -> Environment {
    Environment::new(
        InformationStructure::new(t.0, t.1).unwrap(),
        PayoffStructure::new(du, 0.0).unwrap(),
        c,
    )
    .unwrap()
}

proptest! {
    #[test]
    fn posteriors_stay_in_the_unit_interval(t in precisions(), p in prior(), s in signal()) {
        let info = InformationStructure::new(t.0, t.1).unwrap();
        for q in [posterior_after_first(p, &info, s.first).unwrap(),
                  posterior_after_both(p, &info, s.first, s.second).unwrap()] {
            prop_assert!((0.0..=1.0).contains(&q));
        }
    }

    #[test]
    fn interim_belief_is_the_average_full_posterior(t in precisions(), p in prior(), s1 in value()) {
        let info = InformationStructure::new(t.0, t.1).unwrap();
        let interim = posterior_after_first(p, &info, s1).unwrap();
        let avg: f64 = [Alpha, Beta]
            .into_iter()
            .map(|s2| conditional_second(interim, &info, s2).unwrap()
                * posterior_after_both(p, &info, s1, s2).unwrap())
            .sum();
        prop_assert!((avg - interim).abs() < 1e-12);
    }

    #[test]
    fn updating_in_two_steps_matches_one_step(t in precisions(), p in prior(), s in signal()) {
        let info = InformationStructure::new(t.0, t.1).unwrap();
        let swapped = InformationStructure::new(t.1, t.0).unwrap();
        // the second component alone, then the first
        let mid = posterior_after_first(p, &swapped, s.second).unwrap();
        let two_step = posterior_after_first(mid, &info, s.first).unwrap();
        let one_step = posterior_after_both(p, &info, s.first, s.second).unwrap();
        prop_assert!((two_step - one_step).abs() < 1e-12);
    }

    #[test]
    fn relabelling_states_mirrors_posteriors(t in precisions(), p in prior(), s in signal()) {
        let info = InformationStructure::new(t.0, t.1).unwrap();
        let q = posterior_after_both(p, &info, s.first, s.second).unwrap();
        let mirrored = posterior_after_both(1.0 - p, &info, s.first.other(), s.second.other()).unwrap();
        prop_assert!((q - (1.0 - mirrored)).abs() < 1e-12);
    }

    #[test]
    fn signal_probabilities_sum_to_one(t in precisions(), p in prior()) {
        let info = InformationStructure::new(t.0, t.1).unwrap();
        let total: f64 = Signal::ALL.iter().map(|&s| signal_probability(p, &info, s).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wtp_is_mirror_symmetric(t in precisions(), du in 0.1f64..10.0, p in prior()) {
        let info = InformationStructure::new(t.0, t.1).unwrap();
        let pay = PayoffStructure::new(du, 0.0).unwrap();
        let a = willingness_to_pay(p, &info, &pay, Alpha).unwrap();
        let b = willingness_to_pay(1.0 - p, &info, &pay, Beta).unwrap();
        prop_assert!((a - b).abs() < 1e-12 * du.max(1.0));
    }

    #[test]
    fn wtp_equals_brute_force_value_of_information(
        t in precisions(), du in 0.1f64..10.0, p in prior(), s1 in value()
    ) {
        let info = InformationStructure::new(t.0, t.1).unwrap();
        let pay = PayoffStructure::new(du - 1.0, -1.0).unwrap();
        let w = willingness_to_pay(p, &info, &pay, s1).unwrap();
        let v = brute_force_voi(p, &info, &pay, s1).unwrap();
        prop_assert!((w - v).abs() <= 1e-10 * du.max(1.0));
    }

    #[test]
    fn h_set_is_exactly_the_strict_payers(
        t in precisions(), c in 0.0f64..0.5, p in interior(), s1 in value()
    ) {
        let info = InformationStructure::new(t.0, t.1).unwrap();
        let pay = PayoffStructure::unit();
        let w = willingness_to_pay(p, &info, &pay, s1).unwrap();
        prop_assume!((w - c).abs() > 1e-9);
        prop_assert_eq!(h_set(c, &info, &pay, s1).unwrap().contains(p), w > c);
    }

    #[test]
    fn b_sets_lie_inside_v_sets(t in precisions(), c in 0.0f64..0.5, a in prior(), b in prior()) {
        let (p_i, p_j) = if a <= b { (a, b) } else { (b, a) };
        let info = InformationStructure::new(t.0, t.1).unwrap();
        let pc = classify_pair(p_i, p_j, c, &info, &PayoffStructure::unit()).unwrap();
        prop_assert!(!pc.in_b_ij_alpha || pc.in_v_ij_alpha);
        prop_assert!(!pc.in_b_ji_beta || pc.in_v_ji_beta);
        prop_assert!(!pc.in_b_ji_alpha || pc.in_v_ji_alpha);
        prop_assert!(!pc.in_b_ij_beta || pc.in_v_ij_beta);
    }

    #[test]
    fn polarization_is_divergence_and_inversion(
        t in precisions(), c in 0.0f64..0.5, a in prior(), b in prior(), s in signal()
    ) {
        let (p_i, p_j) = if a <= b { (a, b) } else { (b, a) };
        let o = pairwise_outcome(p_i, p_j, &env(t, 1.0, c), s).unwrap();
        prop_assert_eq!(o.polarized, o.divergence < 0.0 && o.inversion < 0.0);
    }

    #[test]
    fn closed_form_polarization_probability_is_at_most_half(
        t in precisions(), du in 0.1f64..5.0, c in 0.0f64..2.5, ps in prior(), a in prior(), b in prior()
    ) {
        prop_assume!(a != b);
        let (p_i, p_j) = if a < b { (a, b) } else { (b, a) };
        let info = InformationStructure::new(t.0, t.1).unwrap();
        let pay = PayoffStructure::new(du, 0.0).unwrap();
        let pr = pb_probability(ps, p_i, p_j, &info, &pay, c).unwrap();
        prop_assert!((0.0..=0.5 + 1e-12).contains(&pr));
    }

    #[test]
    fn config_round_trips(
        t in precisions(), cost in 0.0f64..1.0, ps in proptest::collection::vec(prior(), 1..=2),
        seed in any::<u64>(), grid in 2usize..500, subj in proptest::option::of(prior())
    ) {
        let mut ps = ps;
        ps.sort_by(f64::total_cmp);
        let cfg = RunConfig {
            theta1: t.0, theta2: t.1, cost, priors: ps, subjective_p: subj, seed, grid,
            ..RunConfig::default()
        };
        cfg.validate().unwrap();
        let back = RunConfig::parse(&cfg.to_config_string()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn csv_and_json_decode_identically(t in precisions(), grid in 2usize..60) {
        let cfg = RunConfig { theta1: t.0, theta2: t.1, grid, ..RunConfig::default() };
        let rows = wtp_sweep(&cfg).unwrap();
        let from_csv: Vec<WtpRow> = read_rows(&rows_to_string(&rows, Format::Csv).unwrap(), Format::Csv).unwrap();
        let from_json: Vec<WtpRow> = read_rows(&rows_to_string(&rows, Format::Json).unwrap(), Format::Json).unwrap();
        prop_assert_eq!(&from_csv, &rows);
        prop_assert_eq!(&from_json, &rows);
    }
}
