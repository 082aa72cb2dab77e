//! Seeded random generators for terms, contexts and types.

use rand::Rng;

use crate::term::{name, Color, Context, Term};
use crate::types::{LinearType, MultiType, TypeEnv};

pub fn color(rng: &mut impl Rng) -> Color {
    if rng.gen::<bool>() {
        Color::Black
    } else {
        Color::White
    }
}

const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

/// A random term of at most `size` constructors over `free` free variables.
/// With `colored` false every constructor is black.
pub fn term(rng: &mut impl Rng, size: usize, free: &[&str], colored: bool) -> Term {
    let mut scope: Vec<String> = free.iter().map(|s| s.to_string()).collect();
    go(rng, size.max(1), &mut scope, colored)
}

fn go(rng: &mut impl Rng, size: usize, scope: &mut Vec<String>, colored: bool) -> Term {
    let c = if colored { color(rng) } else { Color::Black };
    let choice = if size <= 1 { 0 } else { rng.gen_range(0..3) };
    match choice {
        0 if !scope.is_empty() => Term::var(&scope[rng.gen_range(0..scope.len())]),
        0 | 1 => {
            let x = NAMES[rng.gen_range(0..NAMES.len())].to_string();
            scope.push(x.clone());
            let body = go(rng, size.saturating_sub(1).max(1), scope, colored);
            scope.pop();
            Term::Abs(c, name(&x), body.into())
        }
        _ => {
            let left = rng.gen_range(1..size - 1 + 1).min(size - 1).max(1);
            let f = go(rng, left, scope, colored);
            let a = go(rng, (size - 1).saturating_sub(left).max(1), scope, colored);
            Term::app(c, f, a)
        }
    }
}

/// A random context with one hole; at most `size` constructors besides it.
pub fn context(rng: &mut impl Rng, size: usize, free: &[&str], colored: bool) -> Context {
    if size == 0 {
        return Context::Hole;
    }
    let c = if colored { color(rng) } else { Color::Black };
    match rng.gen_range(0..3) {
        0 => {
            let x = NAMES[rng.gen_range(0..NAMES.len())];
            Context::abs(c, x, context(rng, size - 1, free, colored))
        }
        1 => {
            let s = rng.gen_range(0..size);
            let arg = term(rng, s.max(1), free, colored);
            Context::app_left(c, context(rng, size - 1 - s.min(size - 1), free, colored), arg)
        }
        _ => {
            let s = rng.gen_range(0..size);
            let fun = term(rng, s.max(1), free, colored);
            Context::app_right(c, fun, context(rng, size - 1 - s.min(size - 1), free, colored))
        }
    }
}

/// A random linear type of depth at most `depth`, multisets of size at most
/// `width`, over the single atom `X`.
pub fn linear_type(rng: &mut impl Rng, depth: usize, width: usize) -> LinearType {
    if depth <= 1 || rng.gen_range(0..4) == 0 {
        return LinearType::x();
    }
    let m = multi_type(rng, depth - 1, width);
    let r = linear_type(rng, depth - 1, width);
    LinearType::arrow(m, color(rng), r)
}

pub fn multi_type(rng: &mut impl Rng, depth: usize, width: usize) -> MultiType {
    let n = rng.gen_range(0..=width);
    MultiType::new((0..n).map(|_| linear_type(rng, depth, width)).collect())
}

pub fn env(rng: &mut impl Rng, vars: &[&str], depth: usize, width: usize) -> TypeEnv {
    vars.iter().map(|x| (name(x), multi_type(rng, depth, width))).filter(|(_, m)| !m.is_empty()).collect()
}
