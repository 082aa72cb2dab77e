mod common;

use checkers::types::{LinearType, MultiType, Ty, TypeEnv};
use checkers::whiten::{check_whitening, compose_whitening, decide_whitening, variants, Direction, Polarity, WObj};
use checkers::Color;
use proptest::prelude::*;

fn polarity() -> impl Strategy<Value = Polarity> {
    prop_oneof![Just(Polarity::Positive), Just(Polarity::Negative)]
}

fn obj() -> impl Strategy<Value = WObj> {
    prop_oneof![
        common::linear(3).prop_map(WObj::Linear),
        common::multi().prop_map(WObj::Multi),
        common::env().prop_map(WObj::Env),
        (common::env(), common::linear(3)).prop_map(|(e, l)| WObj::pair(e, l)),
    ]
}

fn wash(o: &WObj) -> WObj {
    match o {
        WObj::Linear(l) => WObj::Linear(l.wash()),
        WObj::Multi(m) => WObj::Multi(m.wash()),
        WObj::Env(e) => WObj::Env(e.wash()),
        WObj::Pair(e, Ty::Linear(l)) => WObj::pair(e.wash(), l.wash()),
        WObj::Pair(e, Ty::Multi(m)) => WObj::Pair(e.wash(), Ty::Multi(m.wash())),
    }
}

fn pick<T: Clone>(v: &[T], i: prop::sample::Index) -> T {
    v[i.index(v.len())].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn whitening_is_reflexive_with_count_zero(o in obj(), p in polarity()) {
        let w = decide_whitening(p, &o, &o).expect("reflexive");
        prop_assert_eq!(w.count, 0);
        prop_assert!(check_whitening(&w).is_ok());
    }

    #[test]
    fn variants_are_decided_with_their_count(o in obj(), p in polarity(), i in any::<prop::sample::Index>()) {
        let (v, k) = pick(&variants(p, &o, Direction::Whiter), i);
        let w = decide_whitening(p, &v, &o).expect("whiter variant is related");
        prop_assert_eq!(w.count, k);
        prop_assert_eq!(w.count, w.whitened_nodes());
        prop_assert!(check_whitening(&w).is_ok());
        prop_assert_eq!(wash(&v), wash(&o));
        prop_assert_eq!(v.count_color(Color::White), o.count_color(Color::White) + k);
        prop_assert_eq!(v.count_color(Color::Black) + k, o.count_color(Color::Black));

        let (b, kb) = pick(&variants(p, &o, Direction::Blacker), i);
        prop_assert_eq!(decide_whitening(p, &o, &b).map(|w| w.count), Some(kb));
    }

    #[test]
    fn whitening_is_antisymmetric(o in obj(), p in polarity(), i in any::<prop::sample::Index>()) {
        let (v, _) = pick(&variants(p, &o, Direction::Whiter), i);
        if v != o {
            prop_assert!(decide_whitening(p, &o, &v).is_none());
        }
    }

    #[test]
    fn composition_adds_counts(
        o in obj(),
        p in polarity(),
        i in any::<prop::sample::Index>(),
        j in any::<prop::sample::Index>(),
    ) {
        let (mid, k2) = pick(&variants(p, &o, Direction::Whiter), i);
        let (low, k1) = pick(&variants(p, &mid, Direction::Whiter), j);
        let w1 = decide_whitening(p, &low, &mid).unwrap();
        let w2 = decide_whitening(p, &mid, &o).unwrap();
        let w = compose_whitening(&w1, &w2).unwrap();
        prop_assert_eq!(w.count, k1 + k2);
        prop_assert!(check_whitening(&w).is_ok());
        prop_assert_eq!(decide_whitening(p, &low, &o), Some(w));
    }
}

#[test]
fn opposite_polarities_on_a_single_arrow() {
    let arrow = |c| WObj::Linear(LinearType::arrow(MultiType::single(LinearType::x()), c, LinearType::x()));
    assert_eq!(decide_whitening(Polarity::Positive, &arrow(Color::White), &arrow(Color::Black)).map(|w| w.count), Some(1));
    assert!(decide_whitening(Polarity::Negative, &arrow(Color::White), &arrow(Color::Black)).is_none());
    assert!(decide_whitening(Polarity::Positive, &WObj::Env(TypeEnv::empty()), &arrow(Color::Black)).is_none());
}
