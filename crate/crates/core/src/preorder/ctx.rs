use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde_json::{json, Value};

use crate::combinators::{identity, omega, selector, tupler};
use crate::reduce::head_step;
use crate::syntax::print_context;
use crate::term::{alpha_eq, fresh, paint, plug, Color, Context, Name, Term};

use super::{unknown_json, Verdict};

/// Limits on the head contexts searched: total weight of the plugged
/// arguments and substitutions, and the number of arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CtxBound {
    pub max_size: usize,
    pub max_args: usize,
}

impl Default for CtxBound {
    fn default() -> Self {
        CtxBound { max_size: 8, max_args: 3 }
    }
}

/// A context in which the right term costs more interactions than the left
/// one. `None` means no head normal form within fuel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub context: Context,
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
}

/// No separating context within the bound. This is evidence, not proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtxHolds {
    pub contexts: usize,
    pub bounded: bool,
}

/// Head evaluation counting interactions; `None` on fuel exhaustion or on
/// a step that returns to an α-equivalent term.
pub(crate) fn count(t: &Term, fuel: usize) -> Option<usize> {
    let mut cur = t.clone();
    let mut k = 0;
    for _ in 0..fuel {
        match head_step(&cur) {
            None => return Some(k),
            Some((next, kind)) => {
                k += usize::from(kind.is_interaction());
                if next.size() == cur.size() && alpha_eq(&next, &cur) {
                    return None;
                }
                cur = next;
            }
        }
    }
    None
}

#[derive(Clone)]
struct Piece {
    term: Term,
    weight: usize,
}

fn library(colors: &[Color], free: &[Name]) -> Vec<Piece> {
    let mut out = Vec::new();
    for &c in colors {
        out.push(Piece { term: identity(c), weight: 1 });
        for n in 0..=3 {
            out.push(Piece { term: tupler(c, n), weight: n + 1 });
        }
        for n in 1..=3 {
            for i in 1..=n {
                out.push(Piece { term: selector(c, n, i), weight: n });
            }
        }
    }
    for z in free {
        out.push(Piece { term: Term::Var(z.clone()), weight: 1 });
    }
    out
}

fn substitutes(colors: &[Color]) -> Vec<Piece> {
    let mut out = Vec::new();
    for &c in colors {
        for n in 0..=3 {
            out.push(Piece { term: tupler(c, n), weight: n + 1 });
        }
        out.push(Piece { term: omega(c), weight: 2 });
    }
    out
}

/// All head contexts within the bound, lightest first.
fn contexts(fv: &[Name], avoid: &BTreeSet<Name>, bound: CtxBound, colors: &[Color]) -> Vec<(usize, Context)> {
    let mut avoid = avoid.clone();
    let z = fresh("z", &avoid);
    avoid.insert(z.clone());
    let w = fresh("w", &avoid);
    let lib = library(colors, &[z, w]);
    let subs = substitutes(colors);

    // Substitutions: each free variable kept or replaced.
    let mut assignments: Vec<(usize, Vec<Option<usize>>)> = vec![(0, vec![])];
    for _ in fv {
        let mut next = Vec::new();
        for (wt, a) in &assignments {
            let mut keep = a.clone();
            keep.push(None);
            next.push((*wt, keep));
            for (i, s) in subs.iter().enumerate() {
                if wt + s.weight <= bound.max_size {
                    let mut b = a.clone();
                    b.push(Some(i));
                    next.push((wt + s.weight, b));
                }
            }
        }
        assignments = next;
    }

    // Argument sequences, each argument with an application color.
    let mut seqs: Vec<(usize, Vec<(usize, Color)>)> = vec![(0, vec![])];
    let mut frontier = seqs.clone();
    for _ in 0..bound.max_args {
        let mut next = Vec::new();
        for (wt, s) in &frontier {
            for (i, p) in lib.iter().enumerate() {
                for &c in colors {
                    if wt + p.weight <= bound.max_size {
                        let mut s2 = s.clone();
                        s2.push((i, c));
                        next.push((wt + p.weight, s2));
                    }
                }
            }
        }
        seqs.extend(next.iter().cloned());
        frontier = next;
    }

    let mut out = Vec::new();
    for (wa, a) in &assignments {
        for (ws, s) in &seqs {
            let weight = wa + ws;
            if weight > bound.max_size {
                continue;
            }
            let mut ctx = Context::Hole;
            let replaced: Vec<(&Name, usize)> = fv.iter().zip(a).filter_map(|(x, o)| o.map(|i| (x, i))).collect();
            for (x, _) in replaced.iter().rev() {
                ctx = Context::Abs(Color::White, (*x).clone(), Box::new(ctx));
            }
            for (_, i) in &replaced {
                ctx = Context::app_left(Color::White, ctx, subs[*i].term.clone());
            }
            for (i, c) in s {
                ctx = Context::app_left(*c, ctx, lib[*i].term.clone());
            }
            out.push((weight, ctx));
        }
    }
    out.sort_by_key(|(w, _)| *w);
    out
}

/// Search white head contexts for one where `u` costs more than `t`; both
/// plain terms are painted black first.
pub fn interaction_improvement_check(t: &Term, u: &Term, bound: CtxBound, fuel: usize) -> Verdict<CtxHolds, Separation> {
    search(&paint(Color::Black, t), &paint(Color::Black, u), bound, fuel, &[Color::White])
}

/// The same search on checkers terms, over contexts of both colors.
pub fn interaction_improvement_check_colored(t: &Term, u: &Term, bound: CtxBound, fuel: usize) -> Verdict<CtxHolds, Separation> {
    search(t, u, bound, fuel, &[Color::White, Color::Black])
}

fn search(t: &Term, u: &Term, bound: CtxBound, fuel: usize, colors: &[Color]) -> Verdict<CtxHolds, Separation> {
    let fv: Vec<Name> = t.free_vars().union(&u.free_vars()).cloned().collect();
    let mut avoid = BTreeSet::new();
    t.all_names(&mut avoid);
    u.all_names(&mut avoid);
    let all = contexts(&fv, &avoid, bound, colors);
    let separates = |ctx: &Context| -> Option<Separation> {
        let lhs = count(&plug(ctx, t), fuel)?;
        let rhs = count(&plug(ctx, u), fuel);
        if rhs.is_none_or(|r| r > lhs) {
            Some(Separation { context: ctx.clone(), lhs: Some(lhs), rhs })
        } else {
            None
        }
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let best = AtomicUsize::new(usize::MAX);
    // A single worker runs inline, so the search also works without threads.
    let found: Option<(usize, Separation)> = if workers == 1 {
        all.iter().enumerate().find_map(|(i, (_, c))| separates(c).map(|s| (i, s)))
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let (separates, best, all) = (&separates, &best, &all);
                    s.spawn(move || {
                        let mut i = w;
                        while i < all.len() && i < best.load(Ordering::Relaxed) {
                            if let Some(sep) = separates(&all[i].1) {
                                best.fetch_min(i, Ordering::Relaxed);
                                return Some((i, sep));
                            }
                            i += workers;
                        }
                        None
                    })
                })
                .collect();
            handles.into_iter().filter_map(|h| h.join().expect("context worker")).min_by_key(|(i, _)| *i)
        })
    };
    match found {
        Some((_, sep)) => Verdict::Fails(sep),
        None => Verdict::Holds(CtxHolds { contexts: all.len(), bounded: true }),
    }
}

pub(crate) fn verdict_json(v: &Verdict<CtxHolds, Separation>) -> Value {
    match v {
        Verdict::Holds(h) => json!({"verdict": "holds", "bounded": h.bounded, "contexts": h.contexts}),
        Verdict::Fails(s) => json!({
            "verdict": "fails",
            "context": print_context(&s.context),
            "lhs_interactions": s.lhs,
            "rhs_interactions": s.rhs,
        }),
        Verdict::Unknown(r) => unknown_json(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::one;
    use crate::syntax::parse_term;

    #[test]
    fn identity_against_its_expansion() {
        let i = identity(Color::Black);
        let o = one(Color::Black);
        let Verdict::Fails(s) = interaction_improvement_check(&i, &o, CtxBound::default(), 1000) else { panic!() };
        assert!(s.rhs.unwrap() > s.lhs.unwrap());
        assert_eq!(count(&plug(&s.context, &paint(Color::Black, &o)), 1000), s.rhs);
        assert!(interaction_improvement_check(&o, &i, CtxBound::default(), 1000).holds());
    }

    #[test]
    fn colored_identities() {
        let w = parse_term("\\w x. x").unwrap();
        let b = parse_term("\\b x. x").unwrap();
        let Verdict::Fails(s) = interaction_improvement_check_colored(&b, &w, CtxBound { max_size: 1, max_args: 1 }, 100) else {
            panic!()
        };
        assert_eq!((s.lhs, s.rhs), (Some(0), Some(1)));
        let Verdict::Fails(s) = interaction_improvement_check_colored(&w, &b, CtxBound { max_size: 1, max_args: 1 }, 100) else {
            panic!()
        };
        assert_eq!((s.lhs, s.rhs), (Some(0), Some(1)));
    }
}
