//! Derivation transformations: zero-weight typing of head normal forms,
//! splitting and merging of multi type derivations, substitution and
//! anti-substitution, and quantitative subject reduction and expansion.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::reduce::{classify_redex, head_redex_path, Hnf, RedexKind, Sel, StepKind};
use crate::term::{alpha_eq, fresh, rename_free, substitute, Name, Term};

use super::{Derivation, LinearType, MultiType, Rule};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("term has a head redex")]
    NotHnf,
    #[error("the multiset is not part of the derivation's conclusion")]
    BadPartition,
    #[error("derivations type different terms")]
    TermMismatch,
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("marking does not match the derivation: {0}")]
    MarkingInvalid(String),
    #[error("derivation does not follow the step: {0}")]
    StepMismatch(String),
}

/// Zero-weight derivation for a head normal form: the head gets
/// `[] ->b1 ... [] ->bm X` and every argument the empty multi type.
pub fn type_hnf_zero(h: &Term) -> Result<Derivation, LemmaError> {
    let hnf = Hnf::of(h).ok_or(LemmaError::NotHnf)?;
    let head_ty = LinearType::curry(hnf.args.iter().map(|(b, _)| (MultiType::empty(), *b)).collect(), LinearType::x());
    let mut d = Derivation::ax(hnf.head.clone(), head_ty);
    for (b, t) in &hnf.args {
        d = Derivation::app(*b, d, Derivation::many(t.clone(), vec![]));
    }
    for (a, x) in hnf.binders.iter().rev() {
        d = Derivation::lam(*a, x.clone(), d);
    }
    Ok(d)
}

/// Split a `many` derivation along `n + o = m`, returning the parts for `n`
/// and for `o`.
pub fn split_derivation(d: &Derivation, n: &MultiType) -> Result<(Derivation, Derivation), LemmaError> {
    let Rule::Many(children) = &d.rule else {
        return Err(LemmaError::BadPartition);
    };
    let mut rest: Vec<Option<&Derivation>> = children.iter().map(Some).collect();
    let mut taken = Vec::new();
    for l in n.elems() {
        let slot = rest.iter_mut().find(|c| c.is_some_and(|c| c.ty.linear() == Some(l))).ok_or(LemmaError::BadPartition)?;
        taken.push(slot.take().expect("slot is occupied").clone());
    }
    let left = rest.into_iter().flatten().cloned().collect();
    Ok((Derivation::many(d.term.clone(), taken), Derivation::many(d.term.clone(), left)))
}

pub fn merge_derivations(d1: &Derivation, d2: &Derivation) -> Result<Derivation, LemmaError> {
    let (Rule::Many(a), Rule::Many(b)) = (&d1.rule, &d2.rule) else {
        return Err(LemmaError::TypeMismatch("merge needs two many derivations".into()));
    };
    if !alpha_eq(&d1.term, &d2.term) {
        return Err(LemmaError::TermMismatch);
    }
    let children = a.iter().chain(b.iter()).cloned().collect();
    Ok(Derivation::many(d1.term.clone(), children))
}

/// Rename the free variable `y` to `z` in the term and environment.
pub fn rename_derivation(d: &Derivation, y: &str, z: &Name) -> Derivation {
    match &d.rule {
        Rule::Ax => match &d.term {
            Term::Var(x) if &**x == y => Derivation::ax(z.clone(), d.ty.linear().cloned().expect("ax is linear")),
            _ => d.clone(),
        },
        Rule::Many(ch) => Derivation::many(rename_free(&d.term, y, z), ch.iter().map(|c| rename_derivation(c, y, z)).collect()),
        Rule::Lam(b) => match &d.term {
            Term::Abs(_, x, _) if &**x == y => d.clone(),
            Term::Abs(c, x, _) => Derivation::lam(*c, x.clone(), rename_derivation(b, y, z)),
            _ => d.clone(),
        },
        Rule::App { app, fun, arg, .. } => Derivation::app(*app, rename_derivation(fun, y, z), rename_derivation(arg, y, z)),
    }
}

fn names_of(terms: &[&Term]) -> BTreeSet<Name> {
    let mut s = BTreeSet::new();
    for t in terms {
        t.all_names(&mut s);
    }
    s
}

/// From `Γ, x:M ⊢k t : T` and `Δ ⊢k' u : M` (a `many` derivation), build
/// `Γ ⊎ Δ ⊢(k+k') t{x:=u} : T`.
pub fn substitute_derivation(d: &Derivation, x: &str, e: &Derivation) -> Result<Derivation, LemmaError> {
    let m = e.ty.multi().ok_or_else(|| LemmaError::TypeMismatch("substituted derivation must be many".into()))?;
    if d.env.get(x) != *m {
        return Err(LemmaError::TypeMismatch(format!("variable is typed {} but the argument has {}", d.env.get(x), m)));
    }
    subst(d, x, e)
}

fn subst(d: &Derivation, x: &str, e: &Derivation) -> Result<Derivation, LemmaError> {
    let u = &e.term;
    match &d.rule {
        Rule::Ax => match &d.term {
            Term::Var(y) if &**y == x => match &e.rule {
                Rule::Many(ch) if ch.len() == 1 => Ok(ch[0].clone()),
                _ => Err(LemmaError::TypeMismatch("substituted variable needs one premise".into())),
            },
            _ => Ok(d.clone()),
        },
        Rule::Many(ch) => {
            let mut rest = e.clone();
            let mut out = Vec::with_capacity(ch.len());
            for c in ch {
                let (mine, left) = split_derivation(&rest, &c.env.get(x))?;
                out.push(subst(c, x, &mine)?);
                rest = left;
            }
            Ok(Derivation::many(substitute(&d.term, x, u), out))
        }
        Rule::Lam(b) => {
            let Term::Abs(c, y, _) = &d.term else {
                return Err(LemmaError::TermMismatch);
            };
            if &**y == x || !d.term.is_free(x) {
                return Ok(d.clone());
            }
            if u.is_free(y) {
                let z = fresh(y, &names_of(&[&d.term, u]));
                let renamed = rename_derivation(b, y, &z);
                return Ok(Derivation::lam(*c, z, subst(&renamed, x, e)?));
            }
            Ok(Derivation::lam(*c, y.clone(), subst(b, x, e)?))
        }
        Rule::App { app, fun, arg, .. } => {
            let (ef, ea) = split_derivation(e, &fun.env.get(x))?;
            Ok(Derivation::app(*app, subst(fun, x, &ef)?, subst(arg, x, &ea)?))
        }
    }
}

/// Given a derivation for `t{x:=u}` and the marking `t`, recover
/// `(M, Γ, x:M ⊢ t : T, Δ ⊢ u : M)`.
pub fn anti_substitute(
    d: &Derivation,
    marking: &Term,
    x: &Name,
    u: &Term,
) -> Result<(MultiType, Derivation, Derivation), LemmaError> {
    let (dt, du) = anti(d, marking, x, u)?;
    let m = du.ty.multi().cloned().unwrap_or_default();
    Ok((m, dt, du))
}

fn empty_many(u: &Term) -> Derivation {
    Derivation::many(u.clone(), vec![])
}

fn anti(d: &Derivation, t: &Term, x: &Name, u: &Term) -> Result<(Derivation, Derivation), LemmaError> {
    let invalid = |why: &str| LemmaError::MarkingInvalid(why.into());
    if let Rule::Many(ch) = &d.rule {
        let mut dts = Vec::with_capacity(ch.len());
        let mut du = empty_many(u);
        for c in ch {
            let (ct, cu) = anti(c, t, x, u)?;
            dts.push(ct);
            du = merge_derivations(&du, &cu)?;
        }
        return Ok((Derivation::many(t.clone(), dts), du));
    }
    if !t.is_free(x) {
        if !alpha_eq(&d.term, t) {
            return Err(invalid("unmarked subterm differs from the derivation"));
        }
        let mut dt = d.clone();
        dt.term = t.clone();
        return Ok((dt, empty_many(u)));
    }
    match (t, &d.rule) {
        (Term::Var(_), _) => {
            if !alpha_eq(&d.term, u) {
                return Err(invalid("marked occurrence is not the substituted term"));
            }
            let l = d.ty.linear().cloned().ok_or_else(|| invalid("occurrence typed by a multi type"))?;
            Ok((Derivation::ax(x.clone(), l), Derivation::many(u.clone(), vec![d.clone()])))
        }
        (Term::Abs(c, y, b), Rule::Lam(db)) => {
            let Term::Abs(c2, z, _) = &d.term else {
                return Err(invalid("abstraction expected"));
            };
            if c != c2 {
                return Err(invalid("abstraction colors differ"));
            }
            let b = if y == z { (**b).clone() } else { rename_free(b, y, z) };
            let (bt, bu) = anti(db, &b, x, u)?;
            Ok((Derivation::lam(*c, z.clone(), bt), bu))
        }
        (Term::App(c, f, a), Rule::App { app, fun, arg, .. }) => {
            if c != app {
                return Err(invalid("application colors differ"));
            }
            let (ft, fu) = anti(fun, f, x, u)?;
            let (at, au) = anti(arg, a, x, u)?;
            Ok((Derivation::app(*c, ft, at), merge_derivations(&fu, &au)?))
        }
        _ => Err(invalid("shape of the marking differs from the derivation")),
    }
}

/// Follow a head path through `lam` bodies and `app` functions.
fn descend<'a>(d: &'a Derivation, path: &[Sel]) -> Result<&'a Derivation, LemmaError> {
    let mut cur = d;
    for s in path {
        cur = match (s, &cur.rule) {
            (Sel::Body, Rule::Lam(b)) => b,
            (Sel::Fun, Rule::App { fun, .. }) => fun,
            _ => return Err(LemmaError::StepMismatch("derivation does not follow the head path".into())),
        };
    }
    Ok(cur)
}

/// Replace the node at `path` and rebuild the conclusions above it.
fn replace_node(d: &Derivation, path: &[Sel], new: Derivation) -> Result<Derivation, LemmaError> {
    let Some((s, rest)) = path.split_first() else {
        return Ok(new);
    };
    match (s, &d.rule, &d.term) {
        (Sel::Body, Rule::Lam(b), Term::Abs(c, x, _)) => Ok(Derivation::lam(*c, x.clone(), replace_node(b, rest, new)?)),
        (Sel::Fun, Rule::App { app, fun, arg, .. }, _) => {
            Ok(Derivation::app(*app, replace_node(fun, rest, new)?, (**arg).clone()))
        }
        _ => Err(LemmaError::StepMismatch("derivation does not follow the head path".into())),
    }
}

/// Transport `d` along the head step of its subject.
pub fn subject_reduce(d: &Derivation) -> Result<(Derivation, StepKind), LemmaError> {
    let path = head_redex_path(&d.term).ok_or_else(|| LemmaError::StepMismatch("no head redex".into()))?;
    let node = descend(d, &path)?;
    let kind = classify_redex(&node.term).ok_or_else(|| LemmaError::StepMismatch("not a redex".into()))?;
    let Rule::App { fun, arg, .. } = &node.rule else {
        return Err(LemmaError::StepMismatch("redex not typed by app".into()));
    };
    let (Rule::Lam(body), Term::Abs(_, x, _)) = (&fun.rule, &fun.term) else {
        return Err(LemmaError::StepMismatch("redex function not typed by lam".into()));
    };
    let reduct = substitute_derivation(body, x, arg)?;
    let kind = StepKind::new(kind, true);
    Ok((replace_node(d, &path, reduct)?, kind))
}

/// Transport `d`, a derivation for the head reduct of `t`, back to `t`.
pub fn subject_expand(d: &Derivation, t: &Term) -> Result<Derivation, LemmaError> {
    let path = head_redex_path(t).ok_or_else(|| LemmaError::StepMismatch("no head redex".into()))?;
    expand_at(d, t, &path)
}

fn expand_at(d: &Derivation, t: &Term, path: &[Sel]) -> Result<Derivation, LemmaError> {
    let mismatch = |why: &str| LemmaError::StepMismatch(why.into());
    let Some((s, rest)) = path.split_first() else {
        let Term::App(b, f, u) = t else {
            return Err(mismatch("redex expected"));
        };
        let Term::Abs(a, x, body) = &**f else {
            return Err(mismatch("redex expected"));
        };
        if d.ty.linear().is_none() {
            return Err(mismatch("reduct typed by a multi type"));
        }
        let (_, db, du) = anti_substitute(d, body, x, u)?;
        let lam = Derivation::lam(*a, x.clone(), db);
        debug_assert_eq!(classify_redex(t), Some(if a == b { RedexKind::Silent } else { RedexKind::Interaction }));
        return Ok(Derivation::app(*b, lam, du));
    };
    match (s, t, &d.rule) {
        (Sel::Body, Term::Abs(c, y, tb), Rule::Lam(db)) => {
            let Term::Abs(_, z, _) = &d.term else {
                return Err(mismatch("abstraction expected"));
            };
            let tb = if y == z { (**tb).clone() } else { rename_free(tb, y, z) };
            Ok(Derivation::lam(*c, z.clone(), expand_at(db, &tb, rest)?))
        }
        (Sel::Fun, Term::App(c, tf, ta), Rule::App { fun, arg, .. }) => {
            let mut arg = (**arg).clone();
            arg.term = (**ta).clone();
            Ok(Derivation::app(*c, expand_at(fun, tf, rest)?, arg))
        }
        _ => Err(mismatch("derivation does not follow the head path")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::identity;
    use crate::term::name;
    use crate::term::Color::{self, *};
    use crate::types::{check_derivation, Ty, TypeEnv};

    fn y_redex(c: Color) -> Term {
        Term::app(Black, identity(c), Term::var("y"))
    }

    fn typed_redex(c: Color) -> Derivation {
        let lam = Derivation::lam(c, name("x"), Derivation::ax(name("x"), LinearType::x()));
        let arg = Derivation::many(Term::var("y"), vec![Derivation::ax(name("y"), LinearType::x())]);
        Derivation::app(Black, lam, arg)
    }

    #[test]
    fn hnf_zero_examples() {
        let d = type_hnf_zero(&identity(Black)).unwrap();
        check_derivation(&d).unwrap();
        assert_eq!(d.ty, Ty::Linear(LinearType::arrow(MultiType::single(LinearType::x()), Black, LinearType::x())));
        let xt = Term::app(White, Term::var("x"), Term::var("t1"));
        let d = type_hnf_zero(&xt).unwrap();
        assert_eq!(d.index, 0);
        let hx = LinearType::arrow(MultiType::empty(), White, LinearType::x());
        assert_eq!(d.env, TypeEnv::single(name("x"), MultiType::single(hx)));
        let k = Term::abs(Black, "x", Term::var("y"));
        let d = type_hnf_zero(&k).unwrap();
        assert_eq!(d.ty, Ty::Linear(LinearType::arrow(MultiType::empty(), Black, LinearType::x())));
        assert_eq!(type_hnf_zero(&y_redex(Black)), Err(LemmaError::NotHnf));
    }

    #[test]
    fn split_and_merge() {
        let xs = Derivation::many(
            Term::var("x"),
            vec![Derivation::ax(name("x"), LinearType::x()), Derivation::ax(name("x"), LinearType::x())],
        );
        let (a, b) = split_derivation(&xs, &MultiType::single(LinearType::x())).unwrap();
        assert_eq!(a.index + b.index, 0);
        assert_eq!(merge_derivations(&a, &b).unwrap(), xs);
        let empty = Derivation::many(Term::var("x"), vec![]);
        let (p, q) = split_derivation(&empty, &MultiType::empty()).unwrap();
        assert_eq!((p.clone(), q), (empty.clone(), empty.clone()));
        assert_eq!(merge_derivations(&p, &p).unwrap(), empty);
        assert_eq!(split_derivation(&empty, &MultiType::single(LinearType::x())), Err(LemmaError::BadPartition));
    }

    #[test]
    fn substitution_cases() {
        let e = Derivation::many(Term::var("y"), vec![Derivation::ax(name("y"), LinearType::x())]);
        let r = substitute_derivation(&Derivation::ax(name("x"), LinearType::x()), "x", &e).unwrap();
        assert_eq!(r, Derivation::ax(name("y"), LinearType::x()));
        let d = Derivation::ax(name("z"), LinearType::x());
        let r = substitute_derivation(&d, "x", &Derivation::many(Term::var("y"), vec![])).unwrap();
        assert_eq!(r, d);
    }

    #[test]
    fn subject_reduction_root_cases() {
        let d = typed_redex(White);
        assert_eq!(d.index, 1);
        let (r, k) = subject_reduce(&d).unwrap();
        assert_eq!((r.index, k), (0, StepKind::InteractionHead));
        assert_eq!(r.term, Term::var("y"));
        let (r, k) = subject_reduce(&typed_redex(Black)).unwrap();
        assert_eq!((r.index, k), (0, StepKind::SilentHead));
    }

    #[test]
    fn subject_expansion_root_cases() {
        let y = Derivation::ax(name("y"), LinearType::x());
        let d = subject_expand(&y, &y_redex(White)).unwrap();
        check_derivation(&d).unwrap();
        assert_eq!(d.index, 1);
        let d = subject_expand(&y, &y_redex(Black)).unwrap();
        assert_eq!(d.index, 0);
        assert_eq!(d.applicative_size(), 1);
    }

    #[test]
    fn expansion_through_renamed_binder() {
        // (λx. λy. x) y  →h  λy1. y
        let t = Term::app(Black, Term::abss(Black, &["x", "y"], Term::var("x")), Term::var("y"));
        let (reduct, _) = crate::reduce::head_step(&t).unwrap();
        let d = type_hnf_zero(&reduct).unwrap();
        let back = subject_expand(&d, &t).unwrap();
        check_derivation(&back).unwrap();
        assert!(alpha_eq(&back.term, &t));
        let (again, _) = subject_reduce(&back).unwrap();
        assert_eq!(again.typing(), d.typing());
    }
}
