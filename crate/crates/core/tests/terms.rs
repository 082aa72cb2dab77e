mod common;

use checkers::syntax::{
    context_to_json, env_from_json, env_to_json, multi_from_json, multi_to_json, parse_env, parse_multi, print_env, print_multi,
    print_type, term_from_json, term_to_json, type_from_json, type_to_json,
};
use checkers::term::{compose, fresh, is_plain, rename_free, substitute};
use checkers::{alpha_eq, paint, parse_term, parse_type, plug, print_term, wash, Color, Term};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn wash_undoes_paint(t in common::plain(), c in common::color()) {
        prop_assert!(is_plain(&t));
        prop_assert_eq!(wash(&paint(c, &t)), t);
    }

    #[test]
    fn paint_commutes_with_substitution(t in common::plain(), u in common::plain(), c in common::color()) {
        let lhs = paint(c, &substitute(&t, "x", &u));
        let rhs = substitute(&paint(c, &t), "x", &paint(c, &u));
        prop_assert!(alpha_eq(&lhs, &rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn substitution_free_variables(t in common::term(true), u in common::term(true)) {
        let s = substitute(&t, "x", &u);
        let mut allowed = t.free_vars();
        allowed.remove("x");
        allowed.extend(u.free_vars());
        prop_assert!(s.free_vars().is_subset(&allowed));
        if t.free_vars().contains("x") {
            prop_assert!(u.free_vars().is_subset(&s.free_vars()));
        }
    }

    #[test]
    fn bound_renaming_is_alpha_equivalent(t in common::term(true), c in common::color()) {
        let mut avoid = std::collections::BTreeSet::new();
        t.all_names(&mut avoid);
        let v = fresh("v", &avoid);
        let renamed = Term::Abs(c, v.clone(), rename_free(&t, "x", &v).into());
        prop_assert!(alpha_eq(&Term::Abs(c, "x".into(), t.clone().into()), &renamed));
        prop_assert_eq!(alpha_eq(&renamed, &Term::Abs(c.flip(), "x".into(), t.into())), false);
    }

    #[test]
    fn plug_distributes_over_composition(c1 in common::context(true), c2 in common::context(true), t in common::term(true)) {
        prop_assert_eq!(plug(&c1, &plug(&c2, &t)), plug(&compose(&c1, &c2), &t));
    }

    #[test]
    fn print_parse_round_trip(t in common::term(true)) {
        let s = print_term(&t);
        let back = parse_term(&s).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(print_term(&back), s);
    }

    #[test]
    fn types_round_trip_exactly(l in common::linear(4), m in common::multi(), e in common::env()) {
        prop_assert_eq!(parse_type(&print_type(&l)).unwrap(), l.clone());
        prop_assert_eq!(parse_multi(&print_multi(&m)).unwrap(), m.clone());
        prop_assert_eq!(parse_env(&print_env(&e)).unwrap(), e.clone());
        prop_assert_eq!(type_from_json(&type_to_json(&l)).unwrap(), l);
        prop_assert_eq!(multi_from_json(&multi_to_json(&m)).unwrap(), m);
        prop_assert_eq!(env_from_json(&env_to_json(&e)).unwrap(), e);
    }

    #[test]
    fn term_json_round_trip(t in common::term(true)) {
        let v = term_to_json(&t);
        let text = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(term_from_json(&serde_json::from_str(&text).unwrap()).unwrap(), t);
    }

    #[test]
    fn contexts_have_one_hole(c in common::context(true)) {
        let text = context_to_json(&c).to_string();
        prop_assert_eq!(text.matches("\"hole\"").count(), 1, "{}", text);
    }
}

#[test]
fn plugging_captures() {
    let c = checkers::parse_context("\\w x. []").unwrap();
    let t = plug(&c, &Term::var("x"));
    assert!(t.free_vars().is_empty());
    assert_eq!(wash(&t), paint(Color::Black, &parse_term("\\x. x").unwrap()));
}
