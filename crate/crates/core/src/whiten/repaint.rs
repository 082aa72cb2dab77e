//! Repainting derivations along whitenings of their conclusions.

use thiserror::Error;

use crate::term::{Color, Name};
use crate::types::{Derivation, LinearType, MultiType, Rule, Ty, TypeEnv};

use super::{decide_whitening, first_step, overlay, Polarity, WObj, Witness};

/// One recolored arrow, located either in an environment entry or in the
/// type of a judgement. `old` is the element being replaced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Change {
    Env { var: Name, old: LinearType, new: LinearType },
    Ty { old: Ty, new: Ty },
}

/// How the repainted conclusion relates to the requested one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The conclusion differs from the target by the given positive change;
    /// the index is unchanged.
    Propagated(Change),
    /// The conclusion is the target; the index moved by this amount.
    Shifted(isize),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RepaintError {
    #[error("the witness does not end at the derivation's conclusion")]
    WrongConclusion,
    #[error("expected a single negative whitening step")]
    NotASingleStep,
    #[error("expected a negative whitening")]
    WrongPolarity,
    #[error("the change does not occur in the derivation: {0}")]
    Misplaced(String),
    #[error("the argument and the function's domain are not related by whitening")]
    Unrelated,
    #[error("repainting left the whitening relation: {0}")]
    Invariant(String),
}

type Concl = (TypeEnv, Ty);

fn conclusion(d: &Derivation) -> Concl {
    (d.env.clone(), d.ty.clone())
}

fn pair(c: &Concl) -> WObj {
    WObj::Pair(c.0.clone(), c.1.clone())
}

fn replace_one(m: &MultiType, old: &LinearType, new: &LinearType) -> Option<MultiType> {
    Some(m.remove_one(old)?.sum(&MultiType::single(new.clone())))
}

fn apply(ch: &Change, c: &Concl) -> Result<Concl, RepaintError> {
    match ch {
        Change::Env { var, old, new } => {
            let m = replace_one(&c.0.get(var), old, new).ok_or_else(|| RepaintError::Misplaced(format!("{var} : {old}")))?;
            let mut env = c.0.clone();
            env.insert(var.clone(), m);
            Ok((env, c.1.clone()))
        }
        Change::Ty { old, new } => {
            if *old != c.1 {
                return Err(RepaintError::Misplaced("type".into()));
            }
            Ok((c.0.clone(), new.clone()))
        }
    }
}

fn single_diff(a: &MultiType, b: &MultiType) -> Option<(LinearType, LinearType)> {
    let gone = a.difference(&common(a, b))?;
    let came = b.difference(&common(a, b))?;
    match (gone.elems(), came.elems()) {
        ([x], [y]) => Some((x.clone(), y.clone())),
        _ => None,
    }
}

fn common(a: &MultiType, b: &MultiType) -> MultiType {
    let mut rest = b.clone();
    let mut out = Vec::new();
    for e in a.elems() {
        if let Some(r) = rest.remove_one(e) {
            rest = r;
            out.push(e.clone());
        }
    }
    MultiType::new(out)
}

/// The single change taking `from` to `to`, if they differ in one place.
fn diff(from: &Concl, to: &Concl) -> Option<Change> {
    let vars: Vec<Name> = from
        .0
        .support()
        .chain(to.0.support())
        .filter(|x| from.0.get(x) != to.0.get(x))
        .cloned()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    match (vars.as_slice(), from.1 == to.1) {
        ([], false) => Some(Change::Ty { old: from.1.clone(), new: to.1.clone() }),
        ([x], true) => {
            let (old, new) = single_diff(&from.0.get(x), &to.0.get(x))?;
            Some(Change::Env { var: x.clone(), old, new })
        }
        _ => None,
    }
}

fn outcome(target: &Concl, d: &Derivation, index_before: usize) -> Result<Outcome, RepaintError> {
    let got = conclusion(d);
    if got == *target {
        return Ok(Outcome::Shifted(d.index as isize - index_before as isize));
    }
    diff(target, &got)
        .map(Outcome::Propagated)
        .ok_or_else(|| RepaintError::Invariant("the conclusion moved in more than one place".into()))
}

/// The result of [`repaint_one`].
#[derive(Clone, Debug)]
pub struct Repainted {
    pub derivation: Derivation,
    pub outcome: Outcome,
    /// `⟨Γ'';L''⟩ ⊑^+_i ⟨Γ';L'⟩` from the new conclusion to the target.
    pub witness: Witness,
    pub i: usize,
}

/// Repaint `d` along a one-step negative whitening `w` of its conclusion.
pub fn repaint_one(d: &Derivation, w: &Witness) -> Result<Repainted, RepaintError> {
    if w.polarity != Polarity::Negative {
        return Err(RepaintError::WrongPolarity);
    }
    if w.count != 1 {
        return Err(RepaintError::NotASingleStep);
    }
    let here = conclusion(d);
    if w.rhs != pair(&here) {
        return Err(RepaintError::WrongConclusion);
    }
    let WObj::Pair(e, t) = &w.lhs else {
        return Err(RepaintError::WrongConclusion);
    };
    let target = (e.clone(), t.clone());
    let ch = diff(&here, &target).ok_or(RepaintError::NotASingleStep)?;
    let derivation = rp(d, &ch)?;
    let outcome = outcome(&target, &derivation, d.index)?;
    let i = usize::from(matches!(outcome, Outcome::Propagated(_)));
    let witness = decide_whitening(Polarity::Positive, &pair(&conclusion(&derivation)), &w.lhs)
        .filter(|v| v.count == i)
        .ok_or_else(|| RepaintError::Invariant(format!("expected a positive whitening of count {i}")))?;
    Ok(Repainted { derivation, outcome, witness, i })
}

fn rp(d: &Derivation, ch: &Change) -> Result<Derivation, RepaintError> {
    match &d.rule {
        Rule::Ax => {
            let x = match &d.term {
                crate::term::Term::Var(x) => x.clone(),
                _ => return Err(RepaintError::Misplaced("axiom on a non-variable".into())),
            };
            let new = match ch {
                Change::Env { new, .. } => new.clone(),
                Change::Ty { new: Ty::Linear(l), .. } => l.clone(),
                Change::Ty { .. } => return Err(RepaintError::Misplaced("multi type on an axiom".into())),
            };
            Ok(Derivation::ax(x, new))
        }
        Rule::Many(children) => {
            let (k, sub) = match ch {
                Change::Env { var, old, .. } => {
                    let k = children
                        .iter()
                        .position(|c| c.env.get(var).contains(old))
                        .ok_or_else(|| RepaintError::Misplaced(format!("{var} : {old}")))?;
                    (k, ch.clone())
                }
                Change::Ty { old: Ty::Multi(m), new: Ty::Multi(m2) } => {
                    let (old, new) = single_diff(m, m2).ok_or(RepaintError::NotASingleStep)?;
                    let k = children
                        .iter()
                        .position(|c| c.ty == Ty::Linear(old.clone()))
                        .ok_or_else(|| RepaintError::Misplaced(format!("element {old}")))?;
                    (k, Change::Ty { old: Ty::Linear(old), new: Ty::Linear(new) })
                }
                Change::Ty { .. } => return Err(RepaintError::Misplaced("linear type on many".into())),
            };
            let mut children = children.clone();
            children[k] = rp(&children[k], &sub)?;
            Ok(Derivation::many(d.term.clone(), children))
        }
        Rule::Lam(body) => {
            let (a, x) = match &d.term {
                crate::term::Term::Abs(a, x, _) => (*a, x.clone()),
                _ => return Err(RepaintError::Misplaced("λ rule on a non-abstraction".into())),
            };
            let sub = match ch {
                Change::Env { .. } => ch.clone(),
                Change::Ty { old: Ty::Linear(LinearType::Arrow(m, _, l)), new: Ty::Linear(LinearType::Arrow(m2, a2, l2)) } => {
                    if *a2 != a {
                        return Err(RepaintError::Misplaced("top arrow recolored at negative polarity".into()));
                    }
                    if m != m2 {
                        let (old, new) = single_diff(m, m2).ok_or(RepaintError::NotASingleStep)?;
                        Change::Env { var: x.clone(), old, new }
                    } else {
                        Change::Ty { old: Ty::Linear((**l).clone()), new: Ty::Linear((**l2).clone()) }
                    }
                }
                Change::Ty { .. } => return Err(RepaintError::Misplaced("abstraction typed by a non-arrow".into())),
            };
            Ok(Derivation::lam(a, x, rp(body, &sub)?))
        }
        Rule::App { app, fun, arg, .. } => {
            let mut f = (**fun).clone();
            let mut u = (**arg).clone();
            let mut pending = match ch {
                Change::Env { var, old, .. } if f.env.get(var).contains(old) => Side::Fun(ch.clone()),
                Change::Env { .. } => Side::Arg(ch.clone()),
                Change::Ty { old, new: Ty::Linear(l2) } => {
                    let Ty::Linear(LinearType::Arrow(m, a, l)) = &f.ty else {
                        return Err(RepaintError::Misplaced("function typed by a non-arrow".into()));
                    };
                    if *old != Ty::Linear((**l).clone()) {
                        return Err(RepaintError::Misplaced("type".into()));
                    }
                    Side::Fun(Change::Ty { old: f.ty.clone(), new: Ty::Linear(LinearType::arrow(m.clone(), *a, l2.clone())) })
                }
                Change::Ty { .. } => return Err(RepaintError::Misplaced("multi type on an application".into())),
            };
            // Each round whitens the domain further, so this stops.
            for _ in 0..=4 * (d.ty.count_color(Color::Black) + f.ty.count_color(Color::Black) + 2) {
                match pending {
                    Side::Fun(ch) => {
                        let target = apply(&ch, &conclusion(&f))?;
                        f = rp(&f, &ch)?;
                        match outcome(&target, &f, 0)? {
                            Outcome::Propagated(Change::Ty {
                                old: Ty::Linear(LinearType::Arrow(m1, a1, l1)),
                                new: Ty::Linear(LinearType::Arrow(m2, a2, l2)),
                            }) if a1 == a2 && l1 == l2 && m1 != m2 => {
                                pending = Side::Arg(Change::Ty { old: Ty::Multi(m1), new: Ty::Multi(m2) });
                            }
                            _ => return Ok(Derivation::app(*app, f, u)),
                        }
                    }
                    Side::Arg(ch) => {
                        let target = apply(&ch, &conclusion(&u))?;
                        u = rp(&u, &ch)?;
                        match outcome(&target, &u, 0)? {
                            Outcome::Propagated(Change::Ty { new: Ty::Multi(m3), .. }) => {
                                let Ty::Linear(LinearType::Arrow(_, a, l)) = &f.ty else {
                                    return Err(RepaintError::Misplaced("function typed by a non-arrow".into()));
                                };
                                pending = Side::Fun(Change::Ty {
                                    old: f.ty.clone(),
                                    new: Ty::Linear(LinearType::arrow(m3, *a, (**l).clone())),
                                });
                            }
                            _ => return Ok(Derivation::app(*app, f, u)),
                        }
                    }
                }
            }
            Err(RepaintError::Invariant("application repainting did not settle".into()))
        }
    }
}

enum Side {
    Fun(Change),
    Arg(Change),
}

/// The result of [`multirepaint`].
#[derive(Clone, Debug)]
pub struct MultiRepainted {
    pub derivation: Derivation,
    pub k2: usize,
    /// `⟨Γ'';L''⟩ ⊑^+_k2` the requested conclusion.
    pub witness: Witness,
}

/// Repaint `d` along a negative whitening of any count, one arrow at a time.
pub fn multirepaint(d: &Derivation, w: &Witness) -> Result<MultiRepainted, RepaintError> {
    if w.polarity != Polarity::Negative {
        return Err(RepaintError::WrongPolarity);
    }
    if w.rhs != pair(&conclusion(d)) {
        return Err(RepaintError::WrongConclusion);
    }
    let original = w.lhs.clone();
    let mut goal = w.lhs.clone();
    let mut cur = d.clone();
    loop {
        let here = pair(&conclusion(&cur));
        let remaining = decide_whitening(Polarity::Negative, &goal, &here)
            .ok_or_else(|| RepaintError::Invariant("goal left the negative cone".into()))?;
        if remaining.count == 0 {
            break;
        }
        let step = first_step(&remaining).ok_or_else(|| RepaintError::Invariant("no step to take".into()))?;
        let step_w = decide_whitening(Polarity::Negative, &step, &here)
            .filter(|s| s.count == 1)
            .ok_or_else(|| RepaintError::Invariant("first step is not a single whitening".into()))?;
        let r = repaint_one(&cur, &step_w)?;
        if r.i == 1 {
            let rest = decide_whitening(Polarity::Negative, &goal, &step)
                .ok_or_else(|| RepaintError::Invariant("goal is not below the step".into()))?;
            goal = overlay(&rest, &r.witness).ok_or_else(|| RepaintError::Invariant("commutation failed".into()))?;
        }
        cur = r.derivation;
    }
    let witness = decide_whitening(Polarity::Positive, &pair(&conclusion(&cur)), &original)
        .ok_or_else(|| RepaintError::Invariant("result is not a positive whitening of the goal".into()))?;
    Ok(MultiRepainted { derivation: cur, k2: witness.count, witness })
}

/// The result of [`app_repaint`].
#[derive(Clone, Debug)]
pub struct AppRepainted {
    pub derivation: Derivation,
    /// The count `δ'` of `witness`.
    pub delta_prime: usize,
    /// From the new conclusion to `⟨Γ + Δ; L⟩`, positive.
    pub witness: Witness,
}

/// Type `t b@ u` from `d1 : Γ ⊢ t : M ->a L` and `d2 : Δ ⊢ u : N` where `M`
/// and `N` differ by a whitening, by repainting the two sides until they meet.
pub fn app_repaint(d1: &Derivation, d2: &Derivation, b: Color) -> Result<AppRepainted, RepaintError> {
    let Ty::Linear(LinearType::Arrow(_, _, l)) = &d1.ty else {
        return Err(RepaintError::Misplaced("function typed by a non-arrow".into()));
    };
    let start = WObj::pair(d1.env.sum(&d2.env), (**l).clone());
    let (mut f, mut u) = (d1.clone(), d2.clone());
    let bound = 4 * (d1.ty.count_color(Color::Black) + d2.ty.count_color(Color::Black) + 2);
    for _ in 0..bound {
        let Ty::Linear(LinearType::Arrow(m, a, l)) = &f.ty else {
            return Err(RepaintError::Invariant("function lost its arrow".into()));
        };
        let Ty::Multi(n) = &u.ty else {
            return Err(RepaintError::Misplaced("argument must conclude a multi type".into()));
        };
        if m == n {
            let derivation = Derivation::app(b, f, u);
            let witness = decide_whitening(Polarity::Positive, &pair(&conclusion(&derivation)), &start)
                .ok_or_else(|| RepaintError::Invariant("result is not a positive whitening".into()))?;
            return Ok(AppRepainted { delta_prime: witness.count, derivation, witness });
        }
        if decide_whitening(Polarity::Negative, &WObj::Multi(m.clone()), &WObj::Multi(n.clone())).is_some() {
            let target = WObj::Pair(u.env.clone(), Ty::Multi(m.clone()));
            let w = decide_whitening(Polarity::Negative, &target, &pair(&conclusion(&u))).ok_or(RepaintError::Unrelated)?;
            u = multirepaint(&u, &w)?.derivation;
        } else if decide_whitening(Polarity::Positive, &WObj::Multi(n.clone()), &WObj::Multi(m.clone())).is_some() {
            let target = WObj::pair(f.env.clone(), LinearType::arrow(n.clone(), *a, (**l).clone()));
            let w = decide_whitening(Polarity::Negative, &target, &pair(&conclusion(&f))).ok_or(RepaintError::Unrelated)?;
            f = multirepaint(&f, &w)?.derivation;
        } else {
            return Err(RepaintError::Unrelated);
        }
    }
    Err(RepaintError::Invariant("function and argument did not meet".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type};
    use crate::term::name;
    use crate::types::check_derivation;

    #[test]
    fn axiom_on_the_type_propagates_to_the_environment() {
        let l = parse_type("[] ->b X").unwrap();
        let d = Derivation::ax(name("x"), l.clone());
        let env_white = TypeEnv::single(name("x"), MultiType::single(parse_type("[] ->w X").unwrap()));
        let goal = WObj::pair(env_white, l);
        let w = decide_whitening(Polarity::Negative, &goal, &pair(&conclusion(&d))).unwrap();
        let r = repaint_one(&d, &w).unwrap();
        assert_eq!(r.i, 1);
        assert_eq!(r.derivation.ty, Ty::Linear(parse_type("[] ->w X").unwrap()));
        check_derivation(&r.derivation).unwrap();
    }

    #[test]
    fn application_arrow_shift() {
        // x : [[] ->b X] ⊢ x @w y ... with the function's arrow whitened the
        // index drops by one.
        let t = parse_term("x @w y").unwrap();
        let fun_ty = parse_type("[X] ->b X").unwrap();
        let d = Derivation::app(
            Color::White,
            Derivation::ax(name("x"), fun_ty),
            Derivation::many(parse_term("y").unwrap(), vec![Derivation::ax(name("y"), LinearType::x())]),
        );
        assert_eq!(d.term, t);
        assert_eq!(d.index, 1);
        let mut env = d.env.clone();
        env.insert(name("x"), MultiType::single(parse_type("[X] ->w X").unwrap()));
        let w = decide_whitening(Polarity::Negative, &WObj::Pair(env, d.ty.clone()), &pair(&conclusion(&d))).unwrap();
        let r = repaint_one(&d, &w).unwrap();
        assert_eq!(r.outcome, Outcome::Shifted(-1));
        assert_eq!(r.derivation.index, 0);
        check_derivation(&r.derivation).unwrap();
    }

    #[test]
    fn app_repaint_meets_in_the_middle() {
        let f = Derivation::ax(name("f"), parse_type("[[] ->b X] ->b X").unwrap());
        let u = Derivation::many(parse_term("z").unwrap(), vec![Derivation::ax(name("z"), parse_type("[] ->w X").unwrap())]);
        let r = app_repaint(&f, &u, Color::Black).unwrap();
        check_derivation(&r.derivation).unwrap();
        assert!(r.derivation.index <= f.index + u.index + 1 - r.delta_prime);
    }
}
