mod common;

use checkers::reduce::{is_hnf, normalize, simulate_plain, PlainStrategy, SimulationVerdict, Strategy};
use checkers::{evaluate_head, head_step, paint, wash, Color, EvalResult, StepKind};
use proptest::prelude::*;

const FUEL: usize = 300;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn normal_results_are_hnfs_with_counted_trace(t in common::term(true)) {
        if let EvalResult::Normal { hnf, interactions, silents, trace } = evaluate_head(&t, FUEL) {
            prop_assert!(is_hnf(&hnf) && head_step(&hnf).is_none());
            prop_assert_eq!(interactions, trace.iter().filter(|(_, k)| *k == StepKind::InteractionHead).count());
            prop_assert_eq!(silents, trace.iter().filter(|(_, k)| *k == StepKind::SilentHead).count());
            prop_assert!(trace.iter().all(|(_, k)| k.is_head()));
            for w in trace.windows(2) {
                prop_assert_eq!(head_step(&w[0].0).map(|(n, _)| n), Some(w[1].0.clone()));
            }
        }
    }

    #[test]
    fn painting_invariance(t in common::plain()) {
        let black = evaluate_head(&paint(Color::Black, &t), FUEL);
        let white = evaluate_head(&paint(Color::White, &t), FUEL);
        match (&black, &white) {
            (EvalResult::Normal { trace: tb, interactions: 0, .. }, EvalResult::Normal { trace: tw, interactions: 0, .. }) => {
                prop_assert_eq!(tb.len(), tw.len());
                for ((a, _), (b, _)) in tb.iter().zip(tw) {
                    prop_assert_eq!(wash(a), wash(b));
                }
                prop_assert_eq!(wash(black.hnf().unwrap()), wash(white.hnf().unwrap()));
            }
            (EvalResult::FuelExhausted { interactions: 0, .. }, EvalResult::FuelExhausted { interactions: 0, .. }) => {}
            _ => prop_assert!(false, "{:?} / {:?}", black, white),
        }
    }

    #[test]
    fn plain_head_reduction_is_simulated(t in common::plain(), c in common::color(), seed in any::<u64>()) {
        let v = simulate_plain(&t, PlainStrategy::Head, c, 50, seed);
        prop_assert!(!matches!(v, SimulationVerdict::Fails { .. }), "{:?}", v);
    }

    #[test]
    fn normal_forms_agree_across_strategies(t in common::term(true), seed in any::<u64>()) {
        let a = normalize(&t, Strategy::LeftmostOutermost, FUEL);
        let b = normalize(&t, Strategy::Random(seed), FUEL);
        if let (Some((a, _)), Some((b, _))) = (a, b) {
            prop_assert!(checkers::alpha_eq(&a, &b), "{} vs {}", a, b);
        }
    }
}
