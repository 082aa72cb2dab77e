use thiserror::Error;

use crate::combinators::{selector, tupler};
use crate::reduce::{head_normalize, Hnf};
use crate::term::{paint, plug, wash, Color, Context, Term};

use super::bohm::{aligned, bohm_leq_eta_red, FailureKind};
use super::Verdict;

/// A white context on which the right term costs strictly more.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separator {
    pub context: Context,
    /// Tupler width used throughout.
    pub k: usize,
    pub lhs: usize,
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeparateError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("the synthesized context does not separate: {0}")]
    Invariant(String),
}

struct Node {
    binders: usize,
    args: usize,
    bound_head: bool,
    select: Option<usize>,
    extra: usize,
}

fn spines(t: &Term, u: &Term, fuel: usize) -> Result<(Hnf, Hnf), SeparateError> {
    let missing = || SeparateError::PreconditionFailed("a node on the failing path has no head normal form".into());
    let (th, _) = head_normalize(t, fuel).ok_or_else(missing)?;
    let (uh, _) = head_normalize(u, fuel).ok_or_else(missing)?;
    Ok(aligned(&Hnf::of(&th).unwrap(), &Hnf::of(&uh).unwrap(), &th, &uh))
}

/// Build a white context separating `t` from its partial η-expansion `u`,
/// following the path where the Böhm comparison fails.
pub fn bohm_out_separator(t: &Term, u: &Term, depth: usize, fuel: usize) -> Result<Separator, SeparateError> {
    let (t, u) = (wash(t), wash(u));
    let failure = match bohm_leq_eta_red(&t, &u, depth, fuel) {
        Verdict::Fails(f) => f,
        Verdict::Holds(_) => return Err(SeparateError::PreconditionFailed("the Böhm comparison holds".into())),
        Verdict::Unknown(r) => return Err(SeparateError::PreconditionFailed(format!("the Böhm comparison is undecided: {r}"))),
    };
    if !matches!(failure.kind, FailureKind::EtaGap { .. }) {
        return Err(SeparateError::PreconditionFailed(format!(
            "the failing node differs by more than η-expansion ({:?})",
            failure.kind
        )));
    }

    let mut nodes = Vec::new();
    let (mut a, mut b) = (t.clone(), u.clone());
    for &j in &failure.path {
        let (ha, hb) = spines(&a, &b, fuel)?;
        if ha.binders.len() != hb.binders.len() || ha.args.len() != hb.args.len() {
            return Err(SeparateError::PreconditionFailed("the failing path crosses an η-reduced node".into()));
        }
        nodes.push(Node {
            binders: ha.binders.len(),
            args: ha.args.len(),
            bound_head: ha.head_binder().is_some(),
            select: Some(j),
            extra: 0,
        });
        a = ha.args[j].1.clone();
        b = hb.args[j].1.clone();
    }
    let (ha, hb) = spines(&a, &b, fuel)?;
    nodes.push(Node {
        binders: ha.binders.len(),
        args: ha.args.len(),
        bound_head: ha.head_binder().is_some(),
        select: None,
        extra: hb.binders.len() - ha.binders.len(),
    });

    let k = nodes.iter().map(|n| n.args + n.extra).max().unwrap_or(0) + 2;
    let tk = tupler(Color::White, k);
    let mut args = Vec::new();
    for n in &nodes {
        match n.select {
            Some(j) => {
                args.extend(std::iter::repeat_n(tk.clone(), n.binders + k - n.args));
                args.push(selector(Color::White, k, j + 1));
            }
            None if n.bound_head => args.extend(std::iter::repeat_n(tk.clone(), n.binders)),
            None => {}
        }
    }

    let fv: Vec<_> = t.free_vars().union(&u.free_vars()).cloned().collect();
    let mut ctx = Context::Hole;
    for x in fv.iter().rev() {
        ctx = Context::Abs(Color::White, x.clone(), Box::new(ctx));
    }
    for _ in &fv {
        ctx = Context::app_left(Color::White, ctx, tk.clone());
    }
    for a in args {
        ctx = Context::app_left(Color::White, ctx, a);
    }

    let eval = |s: &Term| head_normalize(&plug(&ctx, &paint(Color::Black, s)), fuel).map(|(_, i)| i);
    let lhs = eval(&t).ok_or_else(|| SeparateError::Invariant("the left term diverges in the context".into()))?;
    let rhs = eval(&u).ok_or_else(|| SeparateError::Invariant("the right term diverges in the context".into()))?;
    if rhs <= lhs {
        return Err(SeparateError::Invariant(format!("counts {lhs} and {rhs}")));
    }
    Ok(Separator { context: ctx, k, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::{identity, one};
    use crate::syntax::parse_term;

    #[test]
    fn identity_base_case() {
        let s = bohm_out_separator(&identity(Color::Black), &one(Color::Black), 6, 1000).unwrap();
        assert!(s.rhs > s.lhs);
    }

    #[test]
    fn inductive_case_selects_the_child() {
        let t = parse_term("x y").unwrap();
        let u = parse_term("x (\\z. y z)").unwrap();
        let s = bohm_out_separator(&t, &u, 6, 1000).unwrap();
        assert_eq!(s.rhs, s.lhs + 1);
    }

    #[test]
    fn plain_differences_are_out_of_scope() {
        let t = parse_term("x").unwrap();
        let u = parse_term("y").unwrap();
        assert!(matches!(bohm_out_separator(&t, &u, 6, 1000), Err(SeparateError::PreconditionFailed(_))));
    }
}
