//! Named terms used throughout the examples and tests.

use crate::term::{Color, Term};

fn v(x: &str) -> Term {
    Term::var(x)
}

/// `I_c = λ_c x. x`.
pub fn identity(c: Color) -> Term {
    Term::abs(c, "x", v("x"))
}

/// `D_c = λ_c y. λ_c x. x c@ (y c@ x)`.
pub fn delta(c: Color) -> Term {
    Term::abss(c, &["y", "x"], Term::app(c, v("x"), Term::app(c, v("y"), v("x"))))
}

/// `1_c = λ_c x. λ_c y. x c@ y`, the η-expansion of the identity.
pub fn one(c: Color) -> Term {
    Term::abss(c, &["x", "y"], Term::app(c, v("x"), v("y")))
}

/// `Ω_c = (λ_c x. x x) (λ_c y. y y)`.
pub fn omega(c: Color) -> Term {
    Term::app(c, Term::abs(c, "x", Term::app(c, v("x"), v("x"))), Term::abs(c, "y", Term::app(c, v("y"), v("y"))))
}

/// Curry's fixed-point combinator `λf. (λx. f (x x)) (λx. f (x x))`.
pub fn y_comb(c: Color) -> Term {
    let half = Term::abs(c, "x", Term::app(c, v("f"), Term::app(c, v("x"), v("x"))));
    Term::abs(c, "f", Term::app(c, half.clone(), half))
}

/// The functional `λz x y. x (z y)` whose fixed point is Wadsworth's J.
pub fn j_functional(c: Color) -> Term {
    Term::abss(c, &["z", "x", "y"], Term::app(c, v("x"), Term::app(c, v("z"), v("y"))))
}

/// `J = Y (λz x y. x (z y))`.
pub fn j_comb(c: Color) -> Term {
    Term::app(c, y_comb(c), j_functional(c))
}

/// `F^n(seed)` for the J functional `F`, as nested applications.
pub fn j_iterate(c: Color, n: usize, seed: Term) -> Term {
    (0..n).fold(seed, |acc, _| Term::app(c, j_functional(c), acc))
}

/// The finite approximant `F^n(Ω)` of J.
pub fn j_approx(c: Color, n: usize) -> Term {
    j_iterate(c, n, omega(c))
}

/// The unfolding `F^n(J)`, β-equal to J itself.
pub fn j_unfold(c: Color, n: usize) -> Term {
    j_iterate(c, n, j_comb(c))
}

fn indexed(prefix: &str, i: usize) -> String {
    format!("{prefix}{i}")
}

/// `⟨t1, ..., tn⟩ = λ_c z. z c@ t1 ... c@ tn`, with `z` chosen fresh.
pub fn tuple(c: Color, items: Vec<Term>) -> Term {
    let mut avoid = std::collections::BTreeSet::new();
    for t in &items {
        t.all_names(&mut avoid);
    }
    let z = crate::term::fresh("z", &avoid);
    Term::Abs(c, z.clone(), std::sync::Arc::new(Term::apps(c, Term::Var(z), items)))
}

/// Tupler `T_n = λ x1 ... xn. ⟨x1, ..., xn⟩`.
pub fn tupler(c: Color, n: usize) -> Term {
    let names: Vec<String> = (1..=n).map(|i| indexed("x", i)).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let body = tuple(c, names.iter().map(|x| v(x)).collect());
    Term::abss(c, &refs, body)
}

/// Selector `P^n_i = λ x1 ... xn. xi`, with `1 <= i <= n`.
pub fn selector(c: Color, n: usize, i: usize) -> Term {
    assert!(1 <= i && i <= n, "selector index out of range");
    let names: Vec<String> = (1..=n).map(|k| indexed("x", k)).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Term::abss(c, &refs, v(&names[i - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::alpha_eq;

    #[test]
    fn tupler_shape() {
        let t2 = tupler(Color::White, 2);
        let expected = Term::abss(Color::White, &["a", "b", "z"], Term::apps(Color::White, v("z"), [v("a"), v("b")]));
        assert!(alpha_eq(&t2, &expected));
    }

    #[test]
    fn selector_one_one_is_identity() {
        assert!(alpha_eq(&selector(Color::Black, 1, 1), &identity(Color::Black)));
    }

    #[test]
    fn j_approx_zero_is_omega() {
        assert_eq!(j_approx(Color::Black, 0), omega(Color::Black));
    }
}
