//! Checkers terms, contexts and the basic syntactic operations on them.
//!
//! Plain λ-terms are not a separate syntax tree: a plain term is a [`Term`]
//! in wash-normal form, i.e. every constructor carries [`Color::Black`].
//! [`wash`] produces that form and [`is_plain`] recognises it.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Variable names. Cheap to clone and shareable across threads.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "w")]
    White,
    #[serde(rename = "b")]
    Black,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }

    pub fn ascii(self) -> char {
        match self {
            Color::White => 'w',
            Color::Black => 'b',
        }
    }

    pub fn glyph(self) -> char {
        match self {
            Color::White => '∘',
            Color::Black => '•',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    Abs(Color, Name, Arc<Term>),
    App(Color, Arc<Term>, Arc<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(name(x))
    }

    pub fn abs(c: Color, x: &str, body: Term) -> Term {
        Term::Abs(c, name(x), Arc::new(body))
    }

    pub fn app(c: Color, f: Term, a: Term) -> Term {
        Term::App(c, Arc::new(f), Arc::new(a))
    }

    /// Left-nested application `f c@ a1 c@ ... c@ an`.
    pub fn apps(c: Color, f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, |acc, a| Term::app(c, acc, a))
    }

    /// Nested abstraction `λ_c x1. ... λ_c xn. body`.
    pub fn abss(c: Color, xs: &[&str], body: Term) -> Term {
        xs.iter().rev().fold(body, |acc, x| Term::abs(c, x, acc))
    }

    /// Number of constructors.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, _, b) => 1 + b.size(),
            Term::App(_, f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        collect_fv(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_free(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => &**y == x,
            Term::Abs(_, y, b) => &**y != x && b.is_free(x),
            Term::App(_, f, a) => f.is_free(x) || a.is_free(x),
        }
    }

    /// Every variable name occurring in the term, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(y) => {
                out.insert(y.clone());
            }
            Term::Abs(_, y, b) => {
                out.insert(y.clone());
                b.all_names(out);
            }
            Term::App(_, f, a) => {
                f.all_names(out);
                a.all_names(out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

fn collect_fv(t: &Term, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Abs(_, x, b) => {
            bound.push(x.clone());
            collect_fv(b, bound, out);
            bound.pop();
        }
        Term::App(_, f, a) => {
            collect_fv(f, bound, out);
            collect_fv(a, bound, out);
        }
    }
}

/// A name derived from `base` that is not in `avoid`.
pub fn fresh(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "v" } else { stem };
    if !avoid.contains(stem) && stem != base {
        return name(stem);
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|cand| !avoid.contains(cand.as_str()))
        .map(|s| name(&s))
        .expect("infinitely many candidates")
}

/// Capture-avoiding substitution `t{x:=u}`.
pub fn substitute(t: &Term, x: &str, u: &Term) -> Term {
    let fvu = u.free_vars();
    subst(t, x, u, &fvu)
}

fn subst(t: &Term, x: &str, u: &Term, fvu: &BTreeSet<Name>) -> Term {
    match t {
        Term::Var(y) => {
            if &**y == x {
                u.clone()
            } else {
                t.clone()
            }
        }
        Term::App(c, f, a) => {
            if !t.is_free(x) {
                return t.clone();
            }
            Term::App(*c, Arc::new(subst(f, x, u, fvu)), Arc::new(subst(a, x, u, fvu)))
        }
        Term::Abs(c, y, b) => {
            if &**y == x || !b.is_free(x) {
                t.clone()
            } else if !fvu.contains(y) {
                Term::Abs(*c, y.clone(), Arc::new(subst(b, x, u, fvu)))
            } else {
                let mut avoid = b.free_vars();
                avoid.extend(fvu.iter().cloned());
                avoid.insert(name(x));
                let y2 = fresh(y, &avoid);
                let b2 = rename_free(b, y, &y2);
                Term::Abs(*c, y2, Arc::new(subst(&b2, x, u, fvu)))
            }
        }
    }
}

/// Rename free occurrences of `x` to the variable `y`, assumed not to be
/// captured in `t`.
pub fn rename_free(t: &Term, x: &str, y: &Name) -> Term {
    substitute(t, x, &Term::Var(y.clone()))
}

/// Simultaneous-free sequential substitution of several variables.
pub fn substitute_many(t: &Term, subs: &[(Name, Term)]) -> Term {
    subs.iter().fold(t.clone(), |acc, (x, u)| substitute(&acc, x, u))
}

/// α-equivalence with exact color matching.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    alpha_rec(t, u, &mut Vec::new(), &mut Vec::new())
}

fn alpha_rec(t: &Term, u: &Term, lt: &mut Vec<Name>, lu: &mut Vec<Name>) -> bool {
    match (t, u) {
        (Term::Var(x), Term::Var(y)) => {
            let ix = lt.iter().rposition(|b| b == x);
            let iy = lu.iter().rposition(|b| b == y);
            match (ix, iy) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Term::Abs(c1, x, b1), Term::Abs(c2, y, b2)) => {
            if c1 != c2 {
                return false;
            }
            lt.push(x.clone());
            lu.push(y.clone());
            let r = alpha_rec(b1, b2, lt, lu);
            lt.pop();
            lu.pop();
            r
        }
        (Term::App(c1, f1, a1), Term::App(c2, f2, a2)) => c1 == c2 && alpha_rec(f1, f2, lt, lu) && alpha_rec(a1, a2, lt, lu),
        _ => false,
    }
}

/// Paint every constructor with color `c`; also recolors checkers terms.
pub fn paint(c: Color, t: &Term) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::Abs(_, x, b) => Term::Abs(c, x.clone(), Arc::new(paint(c, b))),
        Term::App(_, f, a) => Term::App(c, Arc::new(paint(c, f)), Arc::new(paint(c, a))),
    }
}

/// Erase colors. The result is in wash-normal form (all black).
pub fn wash(t: &Term) -> Term {
    paint(Color::Black, t)
}

pub fn is_plain(t: &Term) -> bool {
    is_monochrome(t, Color::Black)
}

pub fn is_monochrome(t: &Term, c: Color) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Abs(d, _, b) => *d == c && is_monochrome(b, c),
        Term::App(d, f, a) => *d == c && is_monochrome(f, c) && is_monochrome(a, c),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    Hole,
    Abs(Color, Name, Box<Context>),
    AppLeft(Color, Box<Context>, Term),
    AppRight(Color, Term, Box<Context>),
}

impl Context {
    pub fn abs(c: Color, x: &str, body: Context) -> Context {
        Context::Abs(c, name(x), Box::new(body))
    }

    pub fn app_left(c: Color, f: Context, a: Term) -> Context {
        Context::AppLeft(c, Box::new(f), a)
    }

    pub fn app_right(c: Color, f: Term, a: Context) -> Context {
        Context::AppRight(c, f, Box::new(a))
    }

    /// `⟨·⟩ c@ a1 c@ ... c@ an`.
    pub fn applied(c: Color, args: impl IntoIterator<Item = Term>) -> Context {
        args.into_iter().fold(Context::Hole, |acc, a| Context::app_left(c, acc, a))
    }

    /// Constructors outside the hole.
    pub fn size(&self) -> usize {
        match self {
            Context::Hole => 0,
            Context::Abs(_, _, b) => 1 + b.size(),
            Context::AppLeft(_, b, t) | Context::AppRight(_, t, b) => 1 + b.size() + t.size(),
        }
    }
}

/// Replace the hole by `t`, capturing free variables of `t`.
pub fn plug(ctx: &Context, t: &Term) -> Term {
    match ctx {
        Context::Hole => t.clone(),
        Context::Abs(c, x, b) => Term::Abs(*c, x.clone(), Arc::new(plug(b, t))),
        Context::AppLeft(c, b, a) => Term::App(*c, Arc::new(plug(b, t)), Arc::new(a.clone())),
        Context::AppRight(c, f, b) => Term::App(*c, Arc::new(f.clone()), Arc::new(plug(b, t))),
    }
}

/// The context `outer⟨inner⟩`.
pub fn compose(outer: &Context, inner: &Context) -> Context {
    match outer {
        Context::Hole => inner.clone(),
        Context::Abs(c, x, b) => Context::Abs(*c, x.clone(), Box::new(compose(b, inner))),
        Context::AppLeft(c, b, a) => Context::AppLeft(*c, Box::new(compose(b, inner)), a.clone()),
        Context::AppRight(c, f, b) => Context::AppRight(*c, f.clone(), Box::new(compose(b, inner))),
    }
}

pub fn paint_context(c: Color, ctx: &Context) -> Context {
    match ctx {
        Context::Hole => Context::Hole,
        Context::Abs(_, x, b) => Context::Abs(c, x.clone(), Box::new(paint_context(c, b))),
        Context::AppLeft(_, b, a) => Context::AppLeft(c, Box::new(paint_context(c, b)), paint(c, a)),
        Context::AppRight(_, f, b) => Context::AppRight(c, paint(c, f), Box::new(paint_context(c, b))),
    }
}

pub fn wash_context(ctx: &Context) -> Context {
    paint_context(Color::Black, ctx)
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ascii())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::*;

    fn ib() -> Term {
        Term::abs(Black, "x", Term::var("x"))
    }

    #[test]
    fn flip_is_involutive() {
        for c in [White, Black] {
            assert_eq!(c.flip().flip(), c);
        }
    }

    #[test]
    fn substitute_variable_case() {
        let id = Term::abs(Black, "y", Term::var("y"));
        assert!(alpha_eq(&substitute(&Term::var("x"), "x", &id), &id));
    }

    #[test]
    fn substitute_renames_binder() {
        let t = Term::abs(Black, "y", Term::var("x"));
        let r = substitute(&t, "x", &Term::var("y"));
        let expected = Term::abs(Black, "z", Term::var("y"));
        assert!(alpha_eq(&r, &expected), "{r:?}");
        assert!(r.is_free("y"));
    }

    #[test]
    fn substitute_is_homomorphic() {
        let t = Term::app(Black, Term::var("x"), Term::var("x"));
        let r = substitute(&t, "x", &ib());
        assert_eq!(r, Term::app(Black, ib(), ib()));
    }

    #[test]
    fn substitute_stops_at_shadowing_binder() {
        let t = Term::abs(White, "x", Term::var("x"));
        assert_eq!(substitute(&t, "x", &Term::var("z")), t);
    }

    #[test]
    fn painting_and_washing() {
        let plain = Term::abs(Black, "x", Term::var("x"));
        assert_eq!(paint(Black, &plain), ib());
        let xy = Term::app(Black, Term::var("x"), Term::var("y"));
        assert_eq!(paint(White, &xy), Term::app(White, Term::var("x"), Term::var("y")));
        let mixed = Term::abs(Black, "x", Term::app(White, Term::var("x"), Term::var("x")));
        assert_eq!(wash(&mixed), Term::abs(Black, "x", Term::app(Black, Term::var("x"), Term::var("x"))));
        assert_eq!(wash(&ib()), wash(&Term::abs(White, "x", Term::var("x"))));
    }

    #[test]
    fn plug_examples() {
        let c = Context::app_left(Black, Context::Hole, ib());
        let iw = Term::abs(White, "x", Term::var("x"));
        assert_eq!(plug(&c, &iw), Term::app(Black, iw.clone(), ib()));
        assert_eq!(plug(&Context::Hole, &iw), iw);
        let cap = Context::abs(Black, "x", Context::Hole);
        assert_eq!(plug(&cap, &Term::var("x")), ib());
    }

    #[test]
    fn alpha_examples() {
        assert!(alpha_eq(&ib(), &Term::abs(Black, "y", Term::var("y"))));
        assert!(!alpha_eq(&ib(), &Term::abs(White, "x", Term::var("x"))));
        let a = Term::abss(Black, &["x", "y"], Term::app(Black, Term::var("x"), Term::var("y")));
        let b = Term::abss(Black, &["a", "b"], Term::app(Black, Term::var("a"), Term::var("b")));
        assert!(alpha_eq(&a, &b));
        let k1 = Term::abss(Black, &["x", "y"], Term::var("x"));
        let k2 = Term::abss(Black, &["x", "y"], Term::var("y"));
        assert!(!alpha_eq(&k1, &k2));
    }

    #[test]
    fn fresh_avoids() {
        let avoid: BTreeSet<Name> = ["x", "x1"].iter().map(|s| name(s)).collect();
        assert_eq!(&*fresh("x", &avoid), "x2");
        assert_eq!(&*fresh("x1", &BTreeSet::new()), "x");
    }
}
