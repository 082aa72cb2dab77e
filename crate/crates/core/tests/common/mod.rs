#![allow(dead_code)]

use std::sync::Arc;

use checkers::gen;
use checkers::term::name;
use checkers::types::{LinearType, MultiType, TypeEnv};
use checkers::{Color, Context, Term};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn color() -> impl Strategy<Value = Color> {
    prop_oneof![Just(Color::Black), Just(Color::White)]
}

fn var_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["x", "y", "z", "u"])
}

/// Terms over the variables `x y z u`; all black unless `colored`.
pub fn term(colored: bool) -> impl Strategy<Value = Term> {
    let c = move || color().prop_map(move |c| if colored { c } else { Color::Black });
    var_name().prop_map(Term::var).prop_recursive(5, 24, 2, move |inner| {
        prop_oneof![
            (c(), var_name(), inner.clone()).prop_map(|(c, x, b)| Term::Abs(c, name(x), Arc::new(b))),
            (c(), inner.clone(), inner).prop_map(|(c, f, a)| Term::app(c, f, a)),
        ]
    })
}

pub fn plain() -> impl Strategy<Value = Term> {
    term(false)
}

pub fn context(colored: bool) -> impl Strategy<Value = Context> {
    (any::<u64>(), 0..6usize).prop_map(move |(s, n)| gen::context(&mut ChaCha8Rng::seed_from_u64(s), n, &["x", "y"], colored))
}

pub fn linear(depth: u32) -> impl Strategy<Value = LinearType> {
    Just(LinearType::x()).prop_recursive(depth, 16, 2, |inner| {
        (prop::collection::vec(inner.clone(), 0..3), color(), inner)
            .prop_map(|(m, c, l)| LinearType::arrow(MultiType::new(m), c, l))
    })
}

pub fn multi() -> impl Strategy<Value = MultiType> {
    prop::collection::vec(linear(3), 0..3).prop_map(MultiType::new)
}

pub fn env() -> impl Strategy<Value = TypeEnv> {
    (multi(), multi()).prop_map(|(a, b)| [(name("x"), a), (name("y"), b)].into_iter().filter(|(_, m)| !m.is_empty()).collect())
}
