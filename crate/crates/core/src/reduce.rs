//! Silent and interaction β, the checkers head strategy, and evaluation.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::term::{alpha_eq, paint, substitute, wash, Color, Name, Term};

pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RedexKind {
    Silent,
    Interaction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StepKind {
    SilentHead,
    InteractionHead,
    SilentInternal,
    InteractionInternal,
}

impl StepKind {
    pub fn new(kind: RedexKind, head: bool) -> StepKind {
        match (kind, head) {
            (RedexKind::Silent, true) => StepKind::SilentHead,
            (RedexKind::Interaction, true) => StepKind::InteractionHead,
            (RedexKind::Silent, false) => StepKind::SilentInternal,
            (RedexKind::Interaction, false) => StepKind::InteractionInternal,
        }
    }

    pub fn is_interaction(self) -> bool {
        matches!(self, StepKind::InteractionHead | StepKind::InteractionInternal)
    }

    pub fn is_head(self) -> bool {
        matches!(self, StepKind::SilentHead | StepKind::InteractionHead)
    }
}

/// One selector of a path into a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sel {
    Body,
    Fun,
    Arg,
}

/// Which redexes `reduce_anywhere` accepts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindFilter {
    Any,
    Silent,
    Interaction,
}

impl KindFilter {
    fn accepts(self, k: RedexKind) -> bool {
        match self {
            KindFilter::Any => true,
            KindFilter::Silent => k == RedexKind::Silent,
            KindFilter::Interaction => k == RedexKind::Interaction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotARedex {
    pub path: Vec<Sel>,
}

impl fmt::Display for NotARedex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no redex of the requested kind at {:?}", self.path)
    }
}

impl std::error::Error for NotARedex {}

/// Root classification: silent iff abstraction and application colors agree.
pub fn classify_redex(t: &Term) -> Option<RedexKind> {
    match t {
        Term::App(b, f, _) => match &**f {
            Term::Abs(a, _, _) => Some(if a == b { RedexKind::Silent } else { RedexKind::Interaction }),
            _ => None,
        },
        _ => None,
    }
}

/// Contract the redex at the root.
pub fn contract(t: &Term) -> Option<Term> {
    match t {
        Term::App(_, f, u) => match &**f {
            Term::Abs(_, x, b) => Some(substitute(b, x, u)),
            _ => None,
        },
        _ => None,
    }
}

/// Path to the head redex, if any: under the spine of abstractions, then
/// leftwards through applications.
pub fn head_redex_path(t: &Term) -> Option<Vec<Sel>> {
    let mut path = Vec::new();
    let mut cur = t;
    while let Term::Abs(_, _, b) = cur {
        path.push(Sel::Body);
        cur = b;
    }
    loop {
        match cur {
            Term::App(_, f, _) => {
                if matches!(&**f, Term::Abs(..)) {
                    return Some(path);
                }
                path.push(Sel::Fun);
                cur = f;
            }
            _ => return None,
        }
    }
}

pub fn is_hnf(t: &Term) -> bool {
    head_redex_path(t).is_none()
}

pub fn subterm<'a>(t: &'a Term, path: &[Sel]) -> Option<&'a Term> {
    let mut cur = t;
    for s in path {
        cur = match (s, cur) {
            (Sel::Body, Term::Abs(_, _, b)) => b,
            (Sel::Fun, Term::App(_, f, _)) => f,
            (Sel::Arg, Term::App(_, _, a)) => a,
            _ => return None,
        };
    }
    Some(cur)
}

/// Replace the subterm at `path` by `f(subterm)`.
pub fn replace_at(t: &Term, path: &[Sel], f: &mut dyn FnMut(&Term) -> Option<Term>) -> Option<Term> {
    let Some((s, rest)) = path.split_first() else {
        return f(t);
    };
    Some(match (s, t) {
        (Sel::Body, Term::Abs(c, x, b)) => Term::Abs(*c, x.clone(), Arc::new(replace_at(b, rest, f)?)),
        (Sel::Fun, Term::App(c, g, a)) => Term::App(*c, Arc::new(replace_at(g, rest, f)?), a.clone()),
        (Sel::Arg, Term::App(c, g, a)) => Term::App(*c, g.clone(), Arc::new(replace_at(a, rest, f)?)),
        _ => return None,
    })
}

/// A checkers head normal form `λ_a1 x1 ... λ_an xn. y b1@ t1 ... bm@ tm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hnf {
    pub binders: Vec<(Color, Name)>,
    pub head: Name,
    pub args: Vec<(Color, Term)>,
}

impl Hnf {
    pub fn of(t: &Term) -> Option<Hnf> {
        let mut binders = Vec::new();
        let mut cur = t;
        while let Term::Abs(c, x, b) = cur {
            binders.push((*c, x.clone()));
            cur = b;
        }
        let mut args = Vec::new();
        loop {
            match cur {
                Term::App(c, f, a) => {
                    args.push((*c, (**a).clone()));
                    cur = f;
                }
                Term::Var(y) => {
                    args.reverse();
                    return Some(Hnf { binders, head: y.clone(), args });
                }
                Term::Abs(..) => return None,
            }
        }
    }

    pub fn to_term(&self) -> Term {
        let body = self.args.iter().fold(Term::Var(self.head.clone()), |acc, (c, a)| Term::app(*c, acc, a.clone()));
        self.binders.iter().rev().fold(body, |acc, (c, x)| Term::Abs(*c, x.clone(), Arc::new(acc)))
    }

    /// Position of the binder the head refers to, innermost occurrence first.
    pub fn head_binder(&self) -> Option<usize> {
        self.binders.iter().rposition(|(_, x)| *x == self.head)
    }
}

/// One step of the checkers head strategy. `None` iff `t` is a checkers hnf.
pub fn head_step(t: &Term) -> Option<(Term, StepKind)> {
    let path = head_redex_path(t)?;
    let mut kind = None;
    let next = replace_at(t, &path, &mut |r| {
        kind = classify_redex(r);
        contract(r)
    })?;
    Some((next, StepKind::new(kind?, true)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalResult {
    /// `trace[i]` is the source term of the i-th step and its kind.
    Normal {
        hnf: Term,
        interactions: usize,
        silents: usize,
        trace: Vec<(Term, StepKind)>,
    },
    FuelExhausted {
        last: Term,
        interactions: usize,
    },
}

impl EvalResult {
    pub fn hnf(&self) -> Option<&Term> {
        match self {
            EvalResult::Normal { hnf, .. } => Some(hnf),
            EvalResult::FuelExhausted { .. } => None,
        }
    }

    pub fn interactions(&self) -> usize {
        match self {
            EvalResult::Normal { interactions, .. } | EvalResult::FuelExhausted { interactions, .. } => *interactions,
        }
    }
}

/// Iterate `head_step`, recording the trace. Fuel counts every head step.
pub fn evaluate_head(t: &Term, fuel: usize) -> EvalResult {
    let mut cur = t.clone();
    let mut trace = Vec::new();
    let (mut interactions, mut silents) = (0, 0);
    for _ in 0..=fuel {
        match head_step(&cur) {
            None => return EvalResult::Normal { hnf: cur, interactions, silents, trace },
            Some(_) if trace.len() == fuel => break,
            Some((next, kind)) => {
                if kind == StepKind::InteractionHead {
                    interactions += 1;
                } else {
                    silents += 1;
                }
                trace.push((cur, kind));
                cur = next;
            }
        }
    }
    EvalResult::FuelExhausted { last: cur, interactions }
}

/// Head-normalize without keeping a trace: `(hnf, interactions)`.
pub fn head_normalize(t: &Term, fuel: usize) -> Option<(Term, usize)> {
    let mut cur = t.clone();
    let mut interactions = 0;
    for _ in 0..fuel {
        match head_step(&cur) {
            None => return Some((cur, interactions)),
            Some((next, kind)) => {
                interactions += usize::from(kind == StepKind::InteractionHead);
                cur = next;
            }
        }
    }
    is_hnf(&cur).then_some((cur, interactions))
}

/// Contract the redex at `path` if it matches `filter`.
pub fn reduce_anywhere(t: &Term, path: &[Sel], filter: KindFilter) -> Result<(Term, StepKind), NotARedex> {
    let err = || NotARedex { path: path.to_vec() };
    let redex = subterm(t, path).ok_or_else(err)?;
    let kind = classify_redex(redex).filter(|k| filter.accepts(*k)).ok_or_else(err)?;
    let next = replace_at(t, path, &mut contract).ok_or_else(err)?;
    let head = head_redex_path(t).as_deref() == Some(path);
    Ok((next, StepKind::new(kind, head)))
}

/// All redex positions, in leftmost-outermost order.
pub fn redex_paths(t: &Term) -> Vec<Vec<Sel>> {
    let mut out = Vec::new();
    collect_redexes(t, &mut Vec::new(), &mut out);
    out
}

fn collect_redexes(t: &Term, path: &mut Vec<Sel>, out: &mut Vec<Vec<Sel>>) {
    if classify_redex(t).is_some() {
        out.push(path.clone());
    }
    match t {
        Term::Var(_) => {}
        Term::Abs(_, _, b) => {
            path.push(Sel::Body);
            collect_redexes(b, path, out);
            path.pop();
        }
        Term::App(_, f, a) => {
            path.push(Sel::Fun);
            collect_redexes(f, path, out);
            path.pop();
            path.push(Sel::Arg);
            collect_redexes(a, path, out);
            path.pop();
        }
    }
}

/// How `normalize` picks the next redex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    RightmostInnermost,
    Random(u64),
}

/// Full βc normalization. `None` if fuel runs out.
pub fn normalize(t: &Term, strategy: Strategy, fuel: usize) -> Option<(Term, usize)> {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut cur = t.clone();
    let mut interactions = 0;
    for _ in 0..=fuel {
        let paths = redex_paths(&cur);
        if paths.is_empty() {
            return Some((cur, interactions));
        }
        let pick = match (&mut rng, strategy) {
            (Some(r), _) => r.gen_range(0..paths.len()),
            (None, Strategy::RightmostInnermost) => paths.len() - 1,
            _ => 0,
        };
        let (next, kind) = reduce_anywhere(&cur, &paths[pick], KindFilter::Any).ok()?;
        interactions += usize::from(kind.is_interaction());
        cur = next;
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfluenceVerdict {
    Holds { normal_form: Term, terminating: usize },
    Unknown,
    CounterexampleFound { first: Term, second: Term },
}

/// Run `trials` random maximal reduction sequences and compare their ends.
pub fn confluence_probe(t: &Term, trials: usize, fuel: usize, seed: u64) -> ConfluenceVerdict {
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let mut found: Option<Term> = None;
    let mut terminating = 0;
    for _ in 0..trials {
        let s: u64 = seeds.gen();
        if let Some((nf, _)) = normalize(t, Strategy::Random(s), fuel) {
            terminating += 1;
            match &found {
                None => found = Some(nf),
                Some(prev) if !alpha_eq(prev, &nf) => {
                    return ConfluenceVerdict::CounterexampleFound { first: prev.clone(), second: nf }
                }
                Some(_) => {}
            }
        }
    }
    match found {
        Some(normal_form) => ConfluenceVerdict::Holds { normal_form, terminating },
        None => ConfluenceVerdict::Unknown,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlainStrategy {
    Head,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimulationVerdict {
    Holds { steps: usize },
    Fails { step: usize, reason: String },
}

/// Colorblind step on the washed term: the reference plain β reduction.
fn plain_step(t: &Term, strategy: PlainStrategy) -> Option<(Vec<Sel>, Term)> {
    let w = wash(t);
    let path = match strategy {
        PlainStrategy::Head => head_redex_path(&w)?,
        PlainStrategy::Full => redex_paths(&w).into_iter().next()?,
    };
    let next = replace_at(&w, &path, &mut contract)?;
    Some((path, next))
}

/// Check that plain steps are silent steps on `paint(c, ·)`, and that steps
/// on an arbitrary recoloring wash back to the plain step.
pub fn simulate_plain(t: &Term, strategy: PlainStrategy, color: Color, max_steps: usize, seed: u64) -> SimulationVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = wash(t);
    for step in 0..max_steps {
        let Some((path, next)) = plain_step(&cur, strategy) else {
            return SimulationVerdict::Holds { steps: step };
        };
        let painted = paint(color, &cur);
        match reduce_anywhere(&painted, &path, KindFilter::Any) {
            Ok((p_next, kind)) => {
                if kind.is_interaction() {
                    return SimulationVerdict::Fails { step, reason: "monochrome step counted as interaction".into() };
                }
                if strategy == PlainStrategy::Head && !kind.is_head() {
                    return SimulationVerdict::Fails { step, reason: "plain head step is not a checkers head step".into() };
                }
                if !alpha_eq(&p_next, &paint(color, &next)) {
                    return SimulationVerdict::Fails {
                        step,
                        reason: "painted reduct differs from painting of the reduct".into(),
                    };
                }
            }
            Err(e) => return SimulationVerdict::Fails { step, reason: e.to_string() },
        }
        let recolored = random_coloring(&cur, &mut rng);
        match reduce_anywhere(&recolored, &path, KindFilter::Any) {
            Ok((r_next, _)) if alpha_eq(&wash(&r_next), &next) => {}
            _ => return SimulationVerdict::Fails { step, reason: "washed checkers step differs from the plain step".into() },
        }
        cur = next;
    }
    SimulationVerdict::Holds { steps: max_steps }
}

/// Assign independent random colors to every constructor.
pub fn random_coloring(t: &Term, rng: &mut impl Rng) -> Term {
    let mut pick = |rng: &mut dyn rand::RngCore| if rng.gen::<bool>() { Color::Black } else { Color::White };
    fn go(t: &Term, rng: &mut dyn rand::RngCore, pick: &mut dyn FnMut(&mut dyn rand::RngCore) -> Color) -> Term {
        match t {
            Term::Var(_) => t.clone(),
            Term::Abs(_, x, b) => {
                let c = pick(rng);
                Term::Abs(c, x.clone(), Arc::new(go(b, rng, pick)))
            }
            Term::App(_, f, a) => {
                let c = pick(rng);
                Term::App(c, Arc::new(go(f, rng, pick)), Arc::new(go(a, rng, pick)))
            }
        }
    }
    go(t, rng, &mut pick)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::*;
    use crate::term::Context;
    use Color::*;

    #[test]
    fn classify_examples() {
        assert_eq!(classify_redex(&Term::app(Black, identity(Black), delta(White))), Some(RedexKind::Silent));
        assert_eq!(classify_redex(&Term::app(White, identity(Black), delta(White))), Some(RedexKind::Interaction));
        assert_eq!(classify_redex(&Term::app(Black, Term::var("x"), Term::var("y"))), None);
    }

    #[test]
    fn head_step_examples() {
        let t = Term::app(Black, identity(White), identity(Black));
        let (r, k) = head_step(&t).unwrap();
        assert!(alpha_eq(&r, &identity(Black)));
        assert_eq!(k, StepKind::InteractionHead);
        let (r, k) = head_step(&omega(Black)).unwrap();
        assert!(alpha_eq(&r, &omega(Black)));
        assert_eq!(k, StepKind::SilentHead);
        let hnf = Term::abs(Black, "x", Term::app(Black, Term::var("x"), Term::var("y")));
        assert!(head_step(&hnf).is_none());
    }

    #[test]
    fn preorder_example_counts() {
        let c = Context::app_left(Black, Context::Hole, identity(Black));
        let a = evaluate_head(&crate::term::plug(&c, &identity(White)), DEFAULT_FUEL);
        let b = evaluate_head(&crate::term::plug(&c, &identity(Black)), DEFAULT_FUEL);
        assert_eq!(a.interactions(), 1);
        assert_eq!(b.interactions(), 0);
        assert!(b.hnf().is_some());
    }

    #[test]
    fn omega_exhausts_fuel() {
        assert!(matches!(evaluate_head(&omega(Black), 1000), EvalResult::FuelExhausted { .. }));
    }

    #[test]
    fn interactions_match_trace() {
        let t = Term::apps(Black, delta(White), [identity(Black), identity(Black)]);
        let EvalResult::Normal { hnf, interactions, trace, .. } = evaluate_head(&t, 100) else {
            panic!("diverged");
        };
        assert!(alpha_eq(&hnf, &identity(Black)));
        let counted = trace.iter().filter(|(_, k)| *k == StepKind::InteractionHead).count();
        assert_eq!(counted, interactions);
    }

    #[test]
    fn reduce_anywhere_examples() {
        let dd = Term::app(White, delta(White), delta(White));
        let (r, k) = reduce_anywhere(&dd, &[], KindFilter::Silent).unwrap();
        let expected = Term::abs(White, "x", Term::app(White, Term::var("x"), Term::app(White, delta(White), Term::var("x"))));
        assert!(alpha_eq(&r, &expected));
        assert_eq!(k, StepKind::SilentHead);
        let ii = Term::app(Black, identity(Black), identity(Black));
        assert!(alpha_eq(&reduce_anywhere(&ii, &[], KindFilter::Silent).unwrap().0, &identity(Black)));
        assert!(reduce_anywhere(&ii, &[Sel::Fun], KindFilter::Any).is_err());
        assert!(reduce_anywhere(&ii, &[], KindFilter::Interaction).is_err());
    }

    #[test]
    fn delta_delta_normal_form() {
        let dd = Term::app(White, delta(White), delta(White));
        let expected = Term::abs(
            White,
            "x",
            Term::app(
                White,
                Term::var("x"),
                Term::abs(White, "z", Term::app(White, Term::var("z"), Term::app(White, Term::var("x"), Term::var("z")))),
            ),
        );
        match confluence_probe(&dd, 20, 1000, 7) {
            ConfluenceVerdict::Holds { normal_form, .. } => assert!(alpha_eq(&normal_form, &expected)),
            other => panic!("{other:?}"),
        }
        assert_eq!(confluence_probe(&omega(Black), 5, 200, 1), ConfluenceVerdict::Unknown);
    }

    #[test]
    fn simulate_plain_examples() {
        let t = Term::app(Black, identity(Black), Term::abs(Black, "y", Term::var("y")));
        assert!(matches!(simulate_plain(&t, PlainStrategy::Full, Black, 10, 0), SimulationVerdict::Holds { .. }));
        let u = Term::abs(Black, "x", Term::app(Black, Term::abs(Black, "y", Term::var("y")), Term::var("x")));
        assert_eq!(simulate_plain(&u, PlainStrategy::Head, White, 10, 0), SimulationVerdict::Holds { steps: 1 });
    }
}
