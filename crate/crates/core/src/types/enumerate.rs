//! Enumeration of the colored interpretation of a term within a bound, and
//! exact membership with minimal index.
//!
//! Both work on the head normal form: every typing of `λx⃗. y t⃗` types the
//! head with `N1 ->c1 ... Nm ->cm L0` and each argument `tj` with `Nj`.
//! Typings of the term itself are obtained by adding the interaction steps
//! of the head reduction, and derivations by subject expansion along it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use thiserror::Error;

use crate::reduce::{evaluate_head, EvalResult, Hnf, StepKind};
use crate::term::{fresh, Color, Name, Term};

use super::lemmas::{subject_expand, type_hnf_zero};
use super::{xor_color, Derivation, LinearType, MultiType, TypeEnv, Typing};

/// Limits on the typings considered: multiset width, type depth (atoms
/// have depth 1), number of atoms, and a cap on generated candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TypeBound {
    pub width: usize,
    pub depth: usize,
    pub atoms: usize,
    pub limit: usize,
}

impl Default for TypeBound {
    fn default() -> Self {
        TypeBound { width: 2, depth: 3, atoms: 1, limit: 200_000 }
    }
}

impl TypeBound {
    pub fn new(width: usize, depth: usize) -> TypeBound {
        TypeBound { width, depth, ..TypeBound::default() }
    }

    pub fn admits(&self, t: &Typing) -> bool {
        t.ty.depth() <= self.depth && t.ty.width() <= self.width && t.env.depth() <= self.depth && t.env.width() <= self.width
    }

    fn atom_names(&self) -> Vec<LinearType> {
        const NAMES: [&str; 6] = ["X", "Y", "Z", "U", "V", "W"];
        (0..self.atoms.max(1))
            .map(|i| match NAMES.get(i) {
                Some(n) => LinearType::atom(n),
                None => LinearType::atom(&format!("X{i}")),
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("no head normal form within fuel ({interactions} interactions so far)")]
pub struct Diverged {
    pub interactions: usize,
}

/// The typings found, each with a checking derivation.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub typings: Vec<(Typing, Derivation)>,
    /// Set when the candidate limit cut the search short.
    pub truncated: bool,
}

#[derive(Clone, Debug)]
struct Item {
    typing: Typing,
    deriv: Option<Derivation>,
}

type Memo = HashMap<(Term, usize), Result<Rc<Vec<Item>>, Diverged>>;

/// A multiset an argument may receive, with its summed environment, index
/// and derivations.
type ArgChoice = (MultiType, TypeEnv, usize, Vec<Derivation>);

struct Enumerator {
    bound: TypeBound,
    fuel: usize,
    build: bool,
    types: HashMap<usize, Vec<LinearType>>,
    produced: usize,
    truncated: bool,
    memo: Memo,
}

/// Sub-multisets (as index lists into `items`) of size at most `w`.
fn multisets(p: usize, w: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..w {
        let mut next = Vec::new();
        for s in &frontier {
            let from = s.last().copied().unwrap_or(0);
            for i in from..p {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl Enumerator {
    fn new(bound: TypeBound, fuel: usize, build: bool) -> Enumerator {
        Enumerator { bound, fuel, build, types: HashMap::new(), produced: 0, truncated: false, memo: HashMap::new() }
    }

    /// All linear types of depth at most `k` within the width bound.
    fn all_types(&mut self, k: usize) -> Vec<LinearType> {
        if k == 0 {
            return vec![];
        }
        if let Some(v) = self.types.get(&k) {
            return v.clone();
        }
        let mut out = self.bound.atom_names();
        if k >= 2 {
            let smaller = self.all_types(k - 1);
            let ms: Vec<MultiType> = multisets(smaller.len(), self.bound.width)
                .into_iter()
                .map(|ix| ix.into_iter().map(|i| smaller[i].clone()).collect())
                .collect();
            for m in &ms {
                for c in [Color::Black, Color::White] {
                    for l in &smaller {
                        out.push(LinearType::arrow(m.clone(), c, l.clone()));
                    }
                }
            }
        }
        out.sort();
        self.types.insert(k, out.clone());
        out
    }

    fn bump(&mut self) -> bool {
        self.produced += 1;
        if self.produced > self.bound.limit {
            self.truncated = true;
        }
        !self.truncated
    }

    /// Typings of `t` whose type has depth at most `tdepth`.
    fn typings_of(&mut self, t: &Term, tdepth: usize) -> Result<Rc<Vec<Item>>, Diverged> {
        let key = (t.clone(), tdepth);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = self.compute(t, tdepth).map(Rc::new);
        self.memo.insert(key, r.clone());
        r
    }

    fn compute(&mut self, t: &Term, tdepth: usize) -> Result<Vec<Item>, Diverged> {
        let (hnf, interactions, trace) = match evaluate_head(t, self.fuel) {
            EvalResult::Normal { hnf, interactions, trace, .. } => (hnf, interactions, trace),
            EvalResult::FuelExhausted { interactions, .. } => return Err(Diverged { interactions }),
        };
        let h = distinct_binders(&Hnf::of(&hnf).expect("evaluation ends in an hnf"));
        let mut items = self.hnf_typings(&h, tdepth);
        for it in &mut items {
            it.typing.index += interactions;
            if let Some(d) = it.deriv.take() {
                it.deriv = Some(expand_trace(d, &trace));
            }
        }
        Ok(items)
    }

    fn hnf_typings(&mut self, h: &Hnf, tdepth: usize) -> Vec<Item> {
        let n = h.binders.len();
        let m = h.args.len();
        if tdepth < n + 1 {
            return vec![];
        }
        let head_depth = match h.head_binder() {
            Some(i) => tdepth - (i + 1),
            None => self.bound.depth,
        };
        if head_depth < m + 1 {
            return vec![];
        }
        let l0s = self.all_types((tdepth - n).min(head_depth - m));

        let mut arg_choices: Vec<Vec<ArgChoice>> = Vec::with_capacity(m);
        for (j, (_, tj)) in h.args.iter().enumerate() {
            let items = self.typings_of(tj, head_depth - (j + 1)).unwrap_or_default();
            let items: Vec<&Item> = items.iter().filter(|it| self.fits(&it.typing)).collect();
            let mut choices = Vec::new();
            for ix in multisets(items.len(), self.bound.width) {
                let mut env = TypeEnv::empty();
                let mut index = 0;
                let mut tys = Vec::new();
                let mut ds = Vec::new();
                for i in ix {
                    env = env.sum(&items[i].typing.env);
                    index += items[i].typing.index;
                    tys.push(items[i].typing.ty.clone());
                    if let Some(d) = &items[i].deriv {
                        ds.push(d.clone());
                    }
                }
                if env.width() <= self.bound.width {
                    choices.push((MultiType::new(tys), env, index, ds));
                }
            }
            arg_choices.push(choices);
        }

        let mut out: BTreeMap<Typing, Option<Derivation>> = BTreeMap::new();
        let mut pick = vec![0usize; m];
        let mut colors = vec![Color::Black; m];
        'outer: loop {
            for l0 in &l0s {
                for mask in 0..(1u32 << m) {
                    for (j, c) in colors.iter_mut().enumerate() {
                        *c = if mask & (1 << j) == 0 { Color::Black } else { Color::White };
                    }
                    if !self.bump() {
                        break 'outer;
                    }
                    let typing = self.assemble(h, l0, &arg_choices, &pick, &colors);
                    if self.admits_partial(&typing, tdepth) && !out.contains_key(&typing) {
                        let deriv = self.build.then(|| self.derive(h, l0, &arg_choices, &pick, &colors));
                        out.insert(typing, deriv);
                    }
                }
            }
            // Advance the mixed-radix counter over argument choices.
            let mut j = 0;
            loop {
                if j == m {
                    break 'outer;
                }
                pick[j] += 1;
                if pick[j] < arg_choices[j].len() {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
        }
        out.into_iter().map(|(typing, deriv)| Item { typing, deriv }).collect()
    }

    fn fits(&self, t: &Typing) -> bool {
        t.ty.width() <= self.bound.width && t.env.width() <= self.bound.width && t.env.depth() <= self.bound.depth
    }

    fn admits_partial(&self, t: &Typing, tdepth: usize) -> bool {
        t.ty.depth() <= tdepth && self.fits(t)
    }

    fn assemble(&self, h: &Hnf, l0: &LinearType, choices: &[Vec<ArgChoice>], pick: &[usize], colors: &[Color]) -> Typing {
        let mut index = 0;
        let mut env = TypeEnv::empty();
        let mut head_args = Vec::with_capacity(h.args.len());
        for (j, (b, _)) in h.args.iter().enumerate() {
            let (nj, ej, kj, _) = &choices[j][pick[j]];
            head_args.push((nj.clone(), colors[j]));
            env = env.sum(ej);
            index += kj + xor_color(colors[j], *b);
        }
        let head_ty = LinearType::curry(head_args, l0.clone());
        env = env.sum(&TypeEnv::single(h.head.clone(), MultiType::single(head_ty)));
        let mut ty = l0.clone();
        for (a, x) in h.binders.iter().rev() {
            ty = LinearType::arrow(env.get(x), *a, ty);
            env = env.remove(x);
        }
        Typing { env, ty, index }
    }

    fn derive(&self, h: &Hnf, l0: &LinearType, choices: &[Vec<ArgChoice>], pick: &[usize], colors: &[Color]) -> Derivation {
        let head_args = (0..h.args.len()).map(|j| (choices[j][pick[j]].0.clone(), colors[j])).collect();
        let mut d = Derivation::ax(h.head.clone(), LinearType::curry(head_args, l0.clone()));
        for (j, (b, tj)) in h.args.iter().enumerate() {
            let ds = choices[j][pick[j]].3.clone();
            d = Derivation::app(*b, d, Derivation::many(tj.clone(), ds));
        }
        for (a, x) in h.binders.iter().rev() {
            d = Derivation::lam(*a, x.clone(), d);
        }
        d
    }
}

/// Rename shadowed binders apart. A shadowed binder has no occurrences,
/// so only the binder itself changes.
fn distinct_binders(h: &Hnf) -> Hnf {
    let mut avoid = BTreeSet::new();
    h.to_term().all_names(&mut avoid);
    let mut seen = BTreeSet::new();
    let mut out = h.clone();
    for (_, x) in out.binders.iter_mut().rev() {
        if !seen.insert(x.clone()) {
            let z = fresh(x, &avoid);
            avoid.insert(z.clone());
            *x = z;
        }
    }
    out
}

fn expand_trace(mut d: Derivation, trace: &[(Term, StepKind)]) -> Derivation {
    for (t, _) in trace.iter().rev() {
        d = subject_expand(&d, t).expect("subject expansion along the head trace");
    }
    d
}

fn collect(items: Rc<Vec<Item>>, bound: &TypeBound) -> BTreeMap<Typing, Option<Derivation>> {
    let items = Rc::try_unwrap(items).unwrap_or_else(|rc| (*rc).clone());
    items.into_iter().filter(|it| bound.admits(&it.typing)).map(|it| (it.typing, it.deriv)).collect()
}

/// The typings of `t` within `bound`, each with a derivation, always
/// including the zero-weight typing of the head normal form.
pub fn enumerate_typings(t: &Term, bound: TypeBound, fuel: usize) -> Result<Enumeration, Diverged> {
    let mut e = Enumerator::new(bound, fuel, true);
    let items = e.typings_of(t, bound.depth)?;
    let mut found = collect(items, &bound);
    if let EvalResult::Normal { hnf, interactions, trace, .. } = evaluate_head(t, fuel) {
        let d = expand_trace(type_hnf_zero(&hnf).expect("hnf"), &trace);
        debug_assert_eq!(d.index, interactions);
        found.entry(d.typing().expect("linear conclusion")).or_insert(Some(d));
    }
    Ok(Enumeration {
        typings: found.into_iter().map(|(t, d)| (t, d.expect("derivations are built"))).collect(),
        truncated: e.truncated,
    })
}

/// The typings of `t` within `bound`, computed arithmetically without
/// building derivations.
pub fn interpretation(t: &Term, bound: TypeBound, fuel: usize) -> Result<(BTreeSet<Typing>, bool), Diverged> {
    let mut e = Enumerator::new(bound, fuel, false);
    let items = e.typings_of(t, bound.depth)?;
    Ok((collect(items, &bound).into_keys().collect(), e.truncated))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// The least index `k` with `Γ ⊢k t : L`, and a derivation when requested.
    Member {
        index: usize,
        derivation: Option<Derivation>,
    },
    NotMember,
    /// Some evaluation ran out of fuel and no derivation was found.
    Unknown,
}

impl Membership {
    pub fn index(&self) -> Option<usize> {
        match self {
            Membership::Member { index, .. } => Some(*index),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Sol {
    index: usize,
    deriv: Option<Derivation>,
}

type Evaluated = Option<(Hnf, usize, Vec<(Term, StepKind)>)>;

/// Decides `Γ ⊢k t : L` with minimal `k`, memoising across queries.
pub struct MembershipSolver {
    fuel: usize,
    build: bool,
    fuel_hit: bool,
    evals: HashMap<Term, Evaluated>,
    memo: HashMap<(Term, TypeEnv, LinearType), Option<Sol>>,
}

impl MembershipSolver {
    pub fn new(fuel: usize, build: bool) -> MembershipSolver {
        MembershipSolver { fuel, build, fuel_hit: false, evals: HashMap::new(), memo: HashMap::new() }
    }

    /// Whether any evaluation so far ran out of fuel.
    pub fn fuel_hit(&self) -> bool {
        self.fuel_hit
    }

    pub fn query(&mut self, t: &Term, env: &TypeEnv, ty: &LinearType) -> Membership {
        let before = self.fuel_hit;
        self.fuel_hit = false;
        let r = self.solve(t, env, ty);
        let hit = self.fuel_hit;
        self.fuel_hit = before || hit;
        match r {
            Some(s) => Membership::Member { index: s.index, derivation: s.deriv },
            None if hit => Membership::Unknown,
            None => Membership::NotMember,
        }
    }

    fn eval(&mut self, t: &Term) -> Evaluated {
        if let Some(e) = self.evals.get(t) {
            return e.clone();
        }
        let r = match evaluate_head(t, self.fuel) {
            EvalResult::Normal { hnf, interactions, trace, .. } => {
                let h = distinct_binders(&Hnf::of(&hnf).expect("hnf"));
                let trace = if self.build { trace } else { vec![] };
                Some((h, interactions, trace))
            }
            EvalResult::FuelExhausted { .. } => None,
        };
        self.evals.insert(t.clone(), r.clone());
        r
    }

    fn solve(&mut self, t: &Term, env: &TypeEnv, ty: &LinearType) -> Option<Sol> {
        let key = (t.clone(), env.clone(), ty.clone());
        if let Some(s) = self.memo.get(&key) {
            return s.clone();
        }
        let r = self.solve_uncached(t, env, ty);
        self.memo.insert(key, r.clone());
        r
    }

    fn solve_uncached(&mut self, t: &Term, env: &TypeEnv, ty: &LinearType) -> Option<Sol> {
        let fv = t.free_vars();
        if env.support().any(|x| !fv.contains(x)) {
            return None;
        }
        let Some((h, interactions, trace)) = self.eval(t) else {
            self.fuel_hit = true;
            return None;
        };
        let hfv = h.to_term().free_vars();
        if env.support().any(|x| !hfv.contains(x)) {
            return None;
        }
        let mut s = self.solve_hnf(&h, env, ty)?;
        s.index += interactions;
        s.deriv = s.deriv.map(|d| expand_trace(d, &trace));
        Some(s)
    }

    fn solve_hnf(&mut self, h: &Hnf, env: &TypeEnv, ty: &LinearType) -> Option<Sol> {
        let n = h.binders.len();
        let (params, l0) = ty.uncurry(n)?;
        let mut full = env.clone();
        for ((a, x), (mi, ai)) in h.binders.iter().zip(&params) {
            if a != ai {
                return None;
            }
            full.insert(x.clone(), mi.clone());
        }
        let mut heads: Vec<LinearType> = full.get(&h.head).elems().to_vec();
        heads.dedup();
        let mut best: Option<Sol> = None;
        for head_ty in heads {
            let Some((hargs, result)) = head_ty.uncurry(h.args.len()) else {
                continue;
            };
            if result != l0 {
                continue;
            }
            let rest = full
                .difference(&TypeEnv::single(h.head.clone(), MultiType::single(head_ty.clone())))
                .expect("head type is in the environment");
            let penalty: usize = h.args.iter().zip(&hargs).map(|((b, _), (_, c))| xor_color(*c, *b)).sum();
            if best.as_ref().is_some_and(|b| b.index <= penalty) {
                continue;
            }
            let mut tasks = Vec::new();
            for (j, ((_, tj), (nj, _))) in h.args.iter().zip(&hargs).enumerate() {
                for l in nj.elems() {
                    tasks.push((j, tj.clone(), l.clone()));
                }
            }
            let bound = best.as_ref().map(|b| b.index - penalty);
            if let Some((cost, ds)) = self.distribute(&tasks, 0, &rest, bound) {
                let index = cost + penalty;
                if best.as_ref().is_none_or(|b| index < b.index) {
                    let deriv = self.build.then(|| {
                        let mut d = Derivation::ax(h.head.clone(), head_ty.clone());
                        let mut it = ds.into_iter();
                        for (j, (b, tj)) in h.args.iter().enumerate() {
                            let k = hargs[j].0.len();
                            let children: Vec<Derivation> = it.by_ref().take(k).flatten().collect();
                            d = Derivation::app(*b, d, Derivation::many(tj.clone(), children));
                        }
                        for (a, x) in h.binders.iter().rev() {
                            d = Derivation::lam(*a, x.clone(), d);
                        }
                        d
                    });
                    best = Some(Sol { index, deriv });
                }
            }
        }
        best
    }

    /// Split `rest` over `tasks[i..]`, minimising the summed index. Returns
    /// the cost and the per-task derivations. `bound` is an exclusive cap.
    fn distribute(
        &mut self,
        tasks: &[(usize, Term, LinearType)],
        i: usize,
        rest: &TypeEnv,
        bound: Option<usize>,
    ) -> Option<(usize, Vec<Option<Derivation>>)> {
        if i == tasks.len() {
            return rest.is_empty().then(|| (0, vec![]));
        }
        let (_, tj, l) = &tasks[i];
        let fv = tj.free_vars();
        let mut best: Option<(usize, Vec<Option<Derivation>>)> = None;
        let candidates: Vec<TypeEnv> = if i + 1 == tasks.len() { vec![rest.clone()] } else { sub_envs(rest, &fv) };
        for mine in candidates {
            let cap = match (&best, bound) {
                (Some((c, _)), _) => Some(*c),
                (None, b) => b,
            };
            if cap == Some(0) {
                break;
            }
            let Some(s) = self.solve(tj, &mine, l) else {
                continue;
            };
            if cap.is_some_and(|c| s.index >= c) {
                continue;
            }
            let left = rest.difference(&mine).expect("sub-environment");
            let sub_cap = cap.map(|c| c - s.index);
            if let Some((c2, mut ds)) = self.distribute(tasks, i + 1, &left, sub_cap) {
                let total = s.index + c2;
                if cap.is_none_or(|c| total < c) {
                    ds.insert(0, s.deriv.clone());
                    best = Some((total, ds));
                }
            }
        }
        best
    }
}

/// All sub-environments of `env` supported on `vars`.
fn sub_envs(env: &TypeEnv, vars: &BTreeSet<Name>) -> Vec<TypeEnv> {
    let mut out = vec![TypeEnv::empty()];
    for (x, m) in env.iter() {
        if !vars.contains(x) {
            continue;
        }
        let subs = sub_multisets(m);
        let mut next = Vec::with_capacity(out.len() * subs.len());
        for e in &out {
            for s in &subs {
                let mut e2 = e.clone();
                e2.insert(x.clone(), s.clone());
                next.push(e2);
            }
        }
        out = next;
    }
    out
}

fn sub_multisets(m: &MultiType) -> Vec<MultiType> {
    let mut groups: Vec<(LinearType, usize)> = Vec::new();
    for l in m.elems() {
        match groups.last_mut() {
            Some((g, c)) if g == l => *c += 1,
            _ => groups.push((l.clone(), 1)),
        }
    }
    let mut out = vec![Vec::new()];
    for (l, c) in groups {
        let mut next = Vec::new();
        for s in &out {
            for k in 0..=c {
                let mut s2: Vec<LinearType> = s.clone();
                s2.extend(std::iter::repeat_n(l.clone(), k));
                next.push(s2);
            }
        }
        out = next;
    }
    out.into_iter().map(MultiType::new).collect()
}

/// `Γ ⊢k t : L` with the least `k`, with a derivation.
pub fn min_derivation(t: &Term, env: &TypeEnv, ty: &LinearType, fuel: usize) -> Membership {
    MembershipSolver::new(fuel, true).query(t, env, ty)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SoundnessVerdict {
    Holds { interactions: usize },
    Fails { interactions: usize },
    Unknown,
}

/// Evaluate `t` and compare its interaction count with the index of `d`.
pub fn check_soundness(t: &Term, d: &Derivation, fuel: usize) -> SoundnessVerdict {
    match evaluate_head(t, fuel) {
        EvalResult::Normal { interactions, .. } if interactions <= d.index => SoundnessVerdict::Holds { interactions },
        EvalResult::Normal { interactions, .. } => SoundnessVerdict::Fails { interactions },
        EvalResult::FuelExhausted { .. } => SoundnessVerdict::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::*;
    use crate::syntax::{parse_env, parse_term, parse_type};
    use crate::types::check_derivation;
    use Color::*;

    fn typing(env: &str, ty: &str, k: usize) -> Typing {
        Typing { env: parse_env(env).unwrap(), ty: parse_type(ty).unwrap(), index: k }
    }

    #[test]
    fn variable_interpretation() {
        let e = enumerate_typings(&Term::var("x"), TypeBound::default(), 100).unwrap();
        assert!(e.typings.iter().any(|(t, _)| *t == typing("x : [X]", "X", 0)));
        for (_, d) in &e.typings {
            check_derivation(d).unwrap();
        }
    }

    #[test]
    fn eta_expansion_interpretation() {
        let t = parse_term("\\b y. x @b y").unwrap();
        let e = enumerate_typings(&t, TypeBound::default(), 100).unwrap();
        let set: BTreeSet<Typing> = e.typings.iter().map(|(t, _)| t.clone()).collect();
        assert!(set.contains(&typing("x : [[] ->w X]", "[] ->b X", 1)));
        assert!(set.contains(&typing("x : [[] ->b X]", "[] ->b X", 0)));
        let (arith, _) = interpretation(&t, TypeBound::default(), 100).unwrap();
        assert!(arith.is_subset(&set));
    }

    #[test]
    fn omega_diverges() {
        assert!(enumerate_typings(&omega(Black), TypeBound::default(), 500).is_err());
    }

    #[test]
    fn min_derivation_examples() {
        let t = parse_term("\\b y. x @b y").unwrap();
        let r = min_derivation(&t, &parse_env("x : [[] ->w X]").unwrap(), &parse_type("[] ->b X").unwrap(), 100);
        let Membership::Member { index, derivation } = r else {
            panic!("{r:?}");
        };
        assert_eq!(index, 1);
        check_derivation(&derivation.unwrap()).unwrap();
        let x = Term::var("x");
        assert_eq!(
            min_derivation(&x, &parse_env("x : [X]").unwrap(), &parse_type("[] ->b X").unwrap(), 100),
            Membership::NotMember
        );
        let redex = Term::app(Black, identity(White), Term::var("y"));
        let r = min_derivation(&redex, &parse_env("y : [X]").unwrap(), &LinearType::x(), 100);
        assert_eq!(r.index(), Some(1));
    }

    #[test]
    fn membership_agrees_with_enumeration() {
        let t = parse_term("\\b f. f @w (f @b z)").unwrap();
        let bound = TypeBound::default();
        let e = enumerate_typings(&t, bound, 100).unwrap();
        let mut solver = MembershipSolver::new(100, false);
        for (ty, _) in &e.typings {
            let k = solver.query(&t, &ty.env, &ty.ty).index().unwrap();
            assert!(k <= ty.index);
        }
    }

    #[test]
    fn soundness_examples() {
        let d = Derivation::ax(crate::term::name("x"), LinearType::x());
        assert_eq!(check_soundness(&Term::var("x"), &d, 10), SoundnessVerdict::Holds { interactions: 0 });
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(2, 2).len(), 6);
        assert_eq!(sub_multisets(&MultiType::new(vec![LinearType::x(), LinearType::x()])).len(), 3);
    }
}
