mod common;

use std::collections::BTreeSet;

use checkers::types::{
    check_derivation, check_soundness, enumerate_typings, interpretation, MultiType, SoundnessVerdict, TypeBound, Typing,
};
use checkers::{alpha_eq, head_step, StepKind, Term};
use proptest::prelude::*;

const FUEL: usize = 200;

fn bound() -> TypeBound {
    TypeBound { limit: 400, ..TypeBound::new(2, 3) }
}

fn shift(set: &BTreeSet<Typing>, by: usize) -> BTreeSet<Typing> {
    set.iter().map(|t| Typing { index: t.index + by, ..t.clone() }).collect()
}

/// Small terms only: the enumeration is exponential in the term size.
fn small() -> impl Strategy<Value = Term> {
    common::term(true).prop_filter("small", |t| t.size() <= 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiset_sum_is_a_commutative_monoid(a in common::multi(), b in common::multi(), c in common::multi()) {
        prop_assert_eq!(a.sum(&b), b.sum(&a));
        prop_assert_eq!(a.sum(&b).sum(&c), a.sum(&b.sum(&c)));
        prop_assert_eq!(a.sum(&MultiType::empty()), a.clone());
        prop_assert_eq!(a.sum(&b).len(), a.len() + b.len());
        prop_assert_eq!(a.sum(&b).difference(&b), Some(a));
    }

    #[test]
    fn environment_sum_is_commutative(a in common::env(), b in common::env()) {
        prop_assert_eq!(a.sum(&b), b.sum(&a));
        prop_assert_eq!(a.sum(&b).difference(&b), Some(a));
    }

    #[test]
    fn enumerated_derivations_check_and_are_sound(t in small()) {
        if let Ok(en) = enumerate_typings(&t, bound(), FUEL) {
            let mut outside = 0;
            for (ty, d) in &en.typings {
                prop_assert!(check_derivation(d).is_ok(), "{:?}", check_derivation(d));
                prop_assert!(alpha_eq(&d.term, &t));
                prop_assert_eq!(ty.index, d.index);
                // Only the zero-weight typing may exceed the bound.
                outside += usize::from(!bound().admits(ty));
                let sound = matches!(check_soundness(&t, d, FUEL), SoundnessVerdict::Holds { .. });
                prop_assert!(sound, "unsound derivation of index {}", d.index);
            }
            prop_assert!(outside <= 1);
        }
    }

    /// A silent head step keeps the interpretation; an interaction shifts
    /// every index by one.
    #[test]
    fn head_steps_move_the_interpretation(t in small()) {
        let Some((next, kind)) = head_step(&t) else { return Ok(()) };
        let (Ok((a, ta)), Ok((b, tb))) = (interpretation(&t, bound(), FUEL), interpretation(&next, bound(), FUEL)) else {
            return Ok(());
        };
        if ta || tb {
            return Ok(());
        }
        let by = usize::from(kind == StepKind::InteractionHead);
        prop_assert_eq!(a, shift(&b, by));
    }
}
