use std::collections::BTreeSet;
use std::fmt;

use serde_json::{json, Value};

use crate::reduce::{head_normalize, Hnf};
use crate::term::{fresh, rename_free, wash, Name, Term};

use super::{unknown_json, Verdict};

/// A finite approximant of a Böhm tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BohmApproximant {
    Bottom,
    Cut,
    Node { binders: Vec<Name>, head: Name, children: Vec<BohmApproximant> },
}

pub fn bohm_approximant(t: &Term, depth: usize, fuel: usize) -> BohmApproximant {
    let Some((h, _)) = head_normalize(&wash(t), fuel) else {
        return BohmApproximant::Bottom;
    };
    if depth == 0 {
        return BohmApproximant::Cut;
    }
    let h = Hnf::of(&h).expect("hnf");
    BohmApproximant::Node {
        binders: h.binders.iter().map(|(_, x)| x.clone()).collect(),
        head: h.head.clone(),
        children: h.args.iter().map(|(_, a)| bohm_approximant(a, depth - 1, fuel)).collect(),
    }
}

impl fmt::Display for BohmApproximant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BohmApproximant::Bottom => write!(f, "bot"),
            BohmApproximant::Cut => write!(f, "..."),
            BohmApproximant::Node { binders, head, children } => {
                if !binders.is_empty() {
                    write!(f, "\\")?;
                    for (i, x) in binders.iter().enumerate() {
                        write!(f, "{}{x}", if i == 0 { "" } else { " " })?;
                    }
                    write!(f, ". ")?;
                }
                write!(f, "{head}")?;
                for c in children {
                    match c {
                        BohmApproximant::Node { binders, children, .. } if !binders.is_empty() || !children.is_empty() => {
                            write!(f, " ({c})")?
                        }
                        _ => write!(f, " {c}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Which clause closed a node of the comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clause {
    /// The left term has no head normal form within fuel.
    Bottom,
    /// Matching spines with `extra` η-reduced binders on the left.
    Spine { extra: usize },
}

/// The clause used at each visited node, by path of argument indices.
pub type BohmTrace = Vec<(Vec<usize>, Clause)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// The right node is an η-expansion of the left one by `extra` binders.
    EtaGap {
        extra: usize,
    },
    HeadMismatch,
    ArityMismatch,
    /// The left term has a head normal form and the right one none within fuel.
    RightDiverges,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BohmFailure {
    pub path: Vec<usize>,
    pub kind: FailureKind,
    pub lhs: Term,
    pub rhs: Term,
}

enum Out {
    Ok,
    Unknown(String),
    Fail(BohmFailure),
}

/// Compare the Böhm trees of `t` and `u` up to η-reduction on the left,
/// down to `depth` nodes.
pub fn bohm_leq_eta_red(t: &Term, u: &Term, depth: usize, fuel: usize) -> Verdict<BohmTrace, BohmFailure> {
    let mut trace = Vec::new();
    match leq(&wash(t), &wash(u), depth, fuel, &mut vec![], &mut trace) {
        Out::Ok => Verdict::Holds(trace),
        Out::Unknown(r) => Verdict::Unknown(r),
        Out::Fail(f) => Verdict::Fails(f),
    }
}

/// Both spines with binders renamed to shared names fresh for both terms.
pub(super) fn aligned(th: &Hnf, uh: &Hnf, t: &Term, u: &Term) -> (Hnf, Hnf) {
    let mut avoid = BTreeSet::new();
    t.all_names(&mut avoid);
    u.all_names(&mut avoid);
    let n = th.binders.len().max(uh.binders.len());
    let mut shared = Vec::with_capacity(n);
    for _ in 0..n {
        let z = fresh("v", &avoid);
        avoid.insert(z.clone());
        shared.push(z);
    }
    let rename = |h: &Hnf| {
        let mut term = h.to_term();
        let mut binders = Vec::new();
        for (i, _) in h.binders.iter().enumerate() {
            let Term::Abs(c, x, b) = term else { unreachable!() };
            binders.push((c, shared[i].clone()));
            term = rename_free(&b, &x, &shared[i]);
        }
        let mut out = Hnf::of(&term).expect("hnf body");
        out.binders = binders;
        out
    };
    (rename(th), rename(uh))
}

fn leq(t: &Term, u: &Term, depth: usize, fuel: usize, path: &mut Vec<usize>, trace: &mut BohmTrace) -> Out {
    let Some((th, _)) = head_normalize(t, fuel) else {
        trace.push((path.clone(), Clause::Bottom));
        return Out::Ok;
    };
    if depth == 0 {
        return Out::Unknown(format!("depth frontier reached at {path:?}"));
    }
    let fail = |kind, path: &Vec<usize>| Out::Fail(BohmFailure { path: path.clone(), kind, lhs: t.clone(), rhs: u.clone() });
    let Some((uh, _)) = head_normalize(u, fuel) else {
        return fail(FailureKind::RightDiverges, path);
    };
    let (th, uh) = aligned(&Hnf::of(&th).unwrap(), &Hnf::of(&uh).unwrap(), &th, &uh);
    let (nt, nu, kt, ku) = (th.binders.len(), uh.binders.len(), th.args.len(), uh.args.len());
    if th.head != uh.head {
        return fail(FailureKind::HeadMismatch, path);
    }
    if nt < nu {
        let kind =
            if ku >= kt && ku - kt == nu - nt { FailureKind::EtaGap { extra: nu - nt } } else { FailureKind::ArityMismatch };
        return fail(kind, path);
    }
    let p = nt - nu;
    if kt < ku || kt - ku != p {
        return fail(FailureKind::ArityMismatch, path);
    }
    trace.push((path.clone(), Clause::Spine { extra: p }));
    let mut unknown = None;
    for (i, (_, ti)) in th.args.iter().enumerate() {
        let ui = match uh.args.get(i) {
            Some((_, ui)) => ui.clone(),
            None => Term::Var(th.binders[nu + i - ku].1.clone()),
        };
        path.push(i);
        let r = leq(ti, &ui, depth - 1, fuel, path, trace);
        path.pop();
        match r {
            Out::Ok => {}
            Out::Unknown(r) => {
                unknown.get_or_insert(r);
            }
            f @ Out::Fail(_) => return f,
        }
    }
    match unknown {
        Some(r) => Out::Unknown(r),
        None => Out::Ok,
    }
}

pub(crate) fn verdict_json(v: &Verdict<BohmTrace, BohmFailure>) -> Value {
    match v {
        Verdict::Holds(trace) => json!({
            "verdict": "holds",
            "nodes": trace.len(),
            "eta_reductions": trace.iter().map(|(_, c)| match c { Clause::Spine { extra } => *extra, Clause::Bottom => 0 }).sum::<usize>(),
            "bottoms": trace.iter().filter(|(_, c)| *c == Clause::Bottom).count(),
        }),
        Verdict::Fails(f) => json!({
            "verdict": "fails",
            "path": f.path,
            "kind": match &f.kind {
                FailureKind::EtaGap { extra } => format!("eta-gap({extra})"),
                FailureKind::HeadMismatch => "head-mismatch".into(),
                FailureKind::ArityMismatch => "arity-mismatch".into(),
                FailureKind::RightDiverges => "right-diverges".into(),
            },
            "lhs": super::term_str(&f.lhs),
            "rhs": super::term_str(&f.rhs),
        }),
        Verdict::Unknown(r) => unknown_json(r),
    }
}
