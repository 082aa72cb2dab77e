use serde_json::{json, Value};

use crate::syntax::print_typing;
use crate::term::{paint, Color, Term};
use crate::types::{interpretation, Membership, MembershipSolver, Ty, TypeBound, Typing};
use crate::whiten::{decide_whitening, variants, Direction, Polarity, WObj, Witness};

use super::{unknown_json, Verdict};

/// A typing of the left term answered by a whiter, cheaper one of the right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwcMatch {
    pub typing: Typing,
    pub matched: Typing,
    pub delta: usize,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwcHolds {
    pub matches: Vec<PwcMatch>,
    /// The left interpretation was cut by the candidate limit.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwcFailure {
    /// A typing of the left term no whiter typing of the right one pays for.
    pub typing: Typing,
    /// Some evaluation of the right term ran out of fuel on the way.
    pub fuel_hit: bool,
}

/// The whiter-cheaper check on plain terms, both painted black.
pub fn pwc_check(t: &Term, u: &Term, bound: TypeBound, fuel: usize) -> Verdict<PwcHolds, PwcFailure> {
    pwc_check_colored(&paint(Color::Black, t), &paint(Color::Black, u), bound, fuel)
}

/// The whiter-cheaper check on checkers terms as given.
pub fn pwc_check_colored(t: &Term, u: &Term, bound: TypeBound, fuel: usize) -> Verdict<PwcHolds, PwcFailure> {
    // No typings when the left term has no head normal form.
    let Ok((typings, truncated)) = interpretation(t, bound, fuel) else {
        return Verdict::Holds(PwcHolds { matches: vec![], truncated: false });
    };
    let mut solver = MembershipSolver::new(fuel, false);
    let mut matches = Vec::with_capacity(typings.len());
    for typing in typings {
        match answer(&mut solver, u, &typing) {
            Some(m) => matches.push(m),
            None => return Verdict::Fails(PwcFailure { typing, fuel_hit: solver.fuel_hit() }),
        }
    }
    Verdict::Holds(PwcHolds { matches, truncated })
}

fn answer(solver: &mut MembershipSolver, u: &Term, typing: &Typing) -> Option<PwcMatch> {
    let here = WObj::pair(typing.env.clone(), typing.ty.clone());
    let mut candidates: Vec<(WObj, usize)> =
        variants(Polarity::Positive, &here, Direction::Whiter).into_iter().filter(|(_, d)| *d <= typing.index).collect();
    candidates.sort_by_key(|(_, d)| *d);
    for (cand, delta) in candidates {
        let WObj::Pair(env, Ty::Linear(ty)) = &cand else { continue };
        if let Membership::Member { index, .. } = solver.query(u, env, ty) {
            if index + delta <= typing.index {
                let witness = decide_whitening(Polarity::Positive, &cand, &here).expect("candidate is a whitening");
                return Some(PwcMatch {
                    typing: typing.clone(),
                    matched: Typing { env: env.clone(), ty: ty.clone(), index },
                    delta,
                    witness,
                });
            }
        }
    }
    None
}

pub(crate) fn verdict_json(v: &Verdict<PwcHolds, PwcFailure>) -> Value {
    match v {
        Verdict::Holds(h) => {
            let whiter = h.matches.iter().filter(|m| m.delta > 0).count();
            let example = h.matches.iter().find(|m| m.delta > 0).map(|m| {
                json!({
                    "typing": print_typing(&m.typing),
                    "matched": print_typing(&m.matched),
                    "delta": m.delta,
                })
            });
            json!({
                "verdict": "holds",
                "typings": h.matches.len(),
                "strictly_whiter": whiter,
                "truncated": h.truncated,
                "example": example,
            })
        }
        Verdict::Fails(f) => json!({
            "verdict": "fails",
            "typing": print_typing(&f.typing),
            "fuel_hit": f.fuel_hit,
        }),
        Verdict::Unknown(r) => unknown_json(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_typing};

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn eta_expansion_is_an_improvement() {
        let v = pwc_check(&p("\\y. x y"), &p("x"), TypeBound::default(), 1000);
        let Verdict::Holds(h) = v else { panic!("{v:?}") };
        let target = parse_typing("x : [[] ->w X] ; [] ->b X ; 1").unwrap();
        let m = h.matches.iter().find(|m| m.typing == target).expect("typing enumerated");
        assert_eq!(m.delta, 1);
        assert_eq!(m.matched, parse_typing("x : [[] ->w X] ; [] ->w X ; 0").unwrap());
    }

    #[test]
    fn eta_reduction_is_not() {
        let v = pwc_check(&p("x"), &p("\\y. x y"), TypeBound::default(), 1000);
        let Verdict::Fails(f) = v else { panic!("{v:?}") };
        assert_eq!(f.typing, parse_typing("x : [X] ; X ; 0").unwrap());
    }

    #[test]
    fn reflexive() {
        for s in ["\\x. x", "x (\\y. y)", "\\f. \\x. f (f x)"] {
            let v = pwc_check(&p(s), &p(s), TypeBound::default(), 1000);
            let Verdict::Holds(h) = v else { panic!("{s}") };
            assert!(h.matches.iter().all(|m| m.delta == 0 || m.matched.index + m.delta <= m.typing.index));
        }
    }

    #[test]
    fn separating_typing_needs_depth_four() {
        let (t, u) = (p("\\x. x (\\y. y)"), p("\\x. x ((\\x. x x) (\\y. y y))"));
        assert!(pwc_check(&t, &u, TypeBound::new(2, 3), 1000).holds());
        let v = pwc_check(&t, &u, TypeBound::new(2, 4), 1000);
        let Verdict::Fails(f) = v else { panic!("{v:?}") };
        assert_eq!(f.typing, parse_typing("{} ; [[[X] ->b X] ->w X] ->b X ; 1").unwrap());
    }
}
