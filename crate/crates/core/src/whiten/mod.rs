//! Polarized whitening of types, multi types, environments and pairs.
//!
//! `T' ⊑^p_k T` holds when `T'` is `T` with `k` black arrows of polarity `p`
//! turned white. Witnesses are explicit trees; multiset nodes list one child
//! per element of the right-hand side, in its canonical order.

pub mod repaint;

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::syntax::{self, SyntaxError};
use crate::term::{Color, Name};
use crate::types::{LinearType, MultiType, Ty, TypeEnv};

pub use repaint::{
    app_repaint, multirepaint, repaint_one, AppRepainted, Change, MultiRepainted, Outcome, RepaintError, Repainted,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarity {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn sign(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sign())
    }
}

/// The objects whitening relates. A pair's right component is a linear
/// type for judgements on terms, or a multi type for `many` judgements.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WObj {
    Linear(LinearType),
    Multi(MultiType),
    Env(TypeEnv),
    Pair(TypeEnv, Ty),
}

impl WObj {
    pub fn pair(env: TypeEnv, l: LinearType) -> WObj {
        WObj::Pair(env, Ty::Linear(l))
    }

    pub fn count_color(&self, c: Color) -> usize {
        match self {
            WObj::Linear(l) => l.count_color(c),
            WObj::Multi(m) => m.count_color(c),
            WObj::Env(e) => e.count_color(c),
            WObj::Pair(e, t) => e.count_color(c) + t.count_color(c),
        }
    }
}

impl fmt::Display for WObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WObj::Linear(l) => write!(f, "{l}"),
            WObj::Multi(m) => write!(f, "{m}"),
            WObj::Env(e) => write!(f, "{e}"),
            WObj::Pair(e, Ty::Linear(l)) => write!(f, "{e} ; {l}"),
            WObj::Pair(e, Ty::Multi(m)) => write!(f, "{e} ; {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WRule {
    Atom,
    /// `M' ->w L' ⊑^+ M ->b L`.
    Whiten {
        arg: Box<Witness>,
        res: Box<Witness>,
    },
    /// Same arrow color on both sides.
    Keep {
        arg: Box<Witness>,
        res: Box<Witness>,
    },
    Multi(Vec<Witness>),
    Env(Vec<(Name, Witness)>),
    Pair {
        env: Box<Witness>,
        ty: Box<Witness>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub polarity: Polarity,
    pub count: usize,
    pub lhs: WObj,
    pub rhs: WObj,
    pub rule: WRule,
}

impl Witness {
    pub fn children(&self) -> Vec<&Witness> {
        match &self.rule {
            WRule::Atom => vec![],
            WRule::Whiten { arg, res } | WRule::Keep { arg, res } => vec![arg, res],
            WRule::Multi(ch) => ch.iter().collect(),
            WRule::Env(ch) => ch.iter().map(|(_, w)| w).collect(),
            WRule::Pair { env, ty } => vec![env, ty],
        }
    }

    /// Number of whitened-arrow rule instances in the tree.
    pub fn whitened_nodes(&self) -> usize {
        usize::from(matches!(self.rule, WRule::Whiten { .. })) + self.children().iter().map(|c| c.whitened_nodes()).sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("whitening rule violated at {path:?}: {reason}")]
pub struct WhitenError {
    pub path: Vec<usize>,
    pub reason: String,
}

fn linear_of(o: &WObj) -> Option<&LinearType> {
    match o {
        WObj::Linear(l) => Some(l),
        _ => None,
    }
}

fn ty_obj(t: &Ty) -> WObj {
    match t {
        Ty::Linear(l) => WObj::Linear(l.clone()),
        Ty::Multi(m) => WObj::Multi(m.clone()),
    }
}

pub fn check_whitening(w: &Witness) -> Result<(), WhitenError> {
    check_at(w, &mut Vec::new())
}

fn bad(path: &[usize], reason: &str) -> Result<(), WhitenError> {
    Err(WhitenError { path: path.to_vec(), reason: reason.into() })
}

fn check_at(w: &Witness, path: &mut Vec<usize>) -> Result<(), WhitenError> {
    let p = w.polarity;
    let children = w.children();
    if w.count != children.iter().map(|c| c.count).sum::<usize>() + usize::from(matches!(w.rule, WRule::Whiten { .. })) {
        return bad(path, "count is not the sum over the rule's premises");
    }
    match &w.rule {
        WRule::Atom => match (&w.lhs, &w.rhs) {
            (WObj::Linear(LinearType::Atom(a)), WObj::Linear(LinearType::Atom(b))) if a == b => {}
            _ => return bad(path, "atom rule on different atoms"),
        },
        WRule::Whiten { arg, res } | WRule::Keep { arg, res } => {
            let (Some(LinearType::Arrow(m2, c2, l2)), Some(LinearType::Arrow(m, c, l))) = (linear_of(&w.lhs), linear_of(&w.rhs))
            else {
                return bad(path, "arrow rule on non-arrows");
            };
            let whiten = matches!(w.rule, WRule::Whiten { .. });
            if whiten {
                if p != Polarity::Positive {
                    return bad(path, "a black arrow is whitened at negative polarity");
                }
                if (*c2, *c) != (Color::White, Color::Black) {
                    return bad(path, "whitening rule needs a white arrow over a black one");
                }
            } else if c2 != c {
                return bad(path, "arrow colors differ without a whitening rule");
            }
            if arg.polarity != p.flip() || res.polarity != p {
                return bad(path, "premise polarities do not follow the rule");
            }
            if arg.lhs != WObj::Multi(m2.clone()) || arg.rhs != WObj::Multi(m.clone()) {
                return bad(path, "argument premise relates other multi types");
            }
            if res.lhs != WObj::Linear((**l2).clone()) || res.rhs != WObj::Linear((**l).clone()) {
                return bad(path, "result premise relates other types");
            }
        }
        WRule::Multi(ch) => {
            let (WObj::Multi(m2), WObj::Multi(m)) = (&w.lhs, &w.rhs) else {
                return bad(path, "multiset rule on non-multisets");
            };
            if ch.len() != m.len() {
                return bad(path, "one premise per element is required");
            }
            let mut lhs_elems = Vec::new();
            for (c, e) in ch.iter().zip(m.elems()) {
                if c.polarity != p || c.rhs != WObj::Linear(e.clone()) {
                    return bad(path, "premise does not relate the aligned element");
                }
                match &c.lhs {
                    WObj::Linear(l) => lhs_elems.push(l.clone()),
                    _ => return bad(path, "premise relates non-linear types"),
                }
            }
            if MultiType::new(lhs_elems) != *m2 {
                return bad(path, "premises do not form a bijection onto the left multiset");
            }
        }
        WRule::Env(ch) => {
            let (WObj::Env(e2), WObj::Env(e)) = (&w.lhs, &w.rhs) else {
                return bad(path, "environment rule on non-environments");
            };
            let vars: Vec<&Name> = e.support().collect();
            let vars2: Vec<&Name> = e2.support().collect();
            if vars != vars2 || ch.len() != vars.len() {
                return bad(path, "environments have different supports");
            }
            for ((x, c), y) in ch.iter().zip(vars) {
                if x != y || c.polarity != p || c.lhs != WObj::Multi(e2.get(x)) || c.rhs != WObj::Multi(e.get(x)) {
                    return bad(path, "environment premise does not relate the variable's entries");
                }
            }
        }
        WRule::Pair { env, ty } => {
            let (WObj::Pair(e2, t2), WObj::Pair(e, t)) = (&w.lhs, &w.rhs) else {
                return bad(path, "pair rule on non-pairs");
            };
            if env.polarity != p.flip() || ty.polarity != p {
                return bad(path, "pair premises must flip the environment's polarity");
            }
            if env.lhs != WObj::Env(e2.clone()) || env.rhs != WObj::Env(e.clone()) {
                return bad(path, "environment premise relates other environments");
            }
            if ty.lhs != ty_obj(t2) || ty.rhs != ty_obj(t) {
                return bad(path, "type premise relates other types");
            }
        }
    }
    for (i, c) in children.iter().enumerate() {
        path.push(i);
        check_at(c, path)?;
        path.pop();
    }
    Ok(())
}

/// `Some(w)` iff `lhs ⊑^pol_k rhs` for some (unique) `k = w.count`.
pub fn decide_whitening(pol: Polarity, lhs: &WObj, rhs: &WObj) -> Option<Witness> {
    match (lhs, rhs) {
        (WObj::Linear(a), WObj::Linear(b)) => decide_linear(pol, a, b),
        (WObj::Multi(a), WObj::Multi(b)) => decide_multi(pol, a, b),
        (WObj::Env(a), WObj::Env(b)) => decide_env(pol, a, b),
        (WObj::Pair(e2, t2), WObj::Pair(e, t)) => {
            let env = decide_env(pol.flip(), e2, e)?;
            let ty = match (t2, t) {
                (Ty::Linear(a), Ty::Linear(b)) => decide_linear(pol, a, b)?,
                (Ty::Multi(a), Ty::Multi(b)) => decide_multi(pol, a, b)?,
                _ => return None,
            };
            Some(Witness {
                polarity: pol,
                count: env.count + ty.count,
                lhs: lhs.clone(),
                rhs: rhs.clone(),
                rule: WRule::Pair { env: Box::new(env), ty: Box::new(ty) },
            })
        }
        _ => None,
    }
}

pub fn decide_linear(pol: Polarity, lhs: &LinearType, rhs: &LinearType) -> Option<Witness> {
    let rule = match (lhs, rhs) {
        (LinearType::Atom(a), LinearType::Atom(b)) if a == b => WRule::Atom,
        (LinearType::Arrow(m2, c2, l2), LinearType::Arrow(m, c, l)) => {
            let whiten = match (c2, c) {
                _ if c2 == c => false,
                (Color::White, Color::Black) if pol == Polarity::Positive => true,
                _ => return None,
            };
            let arg = Box::new(decide_multi(pol.flip(), m2, m)?);
            let res = Box::new(decide_linear(pol, l2, l)?);
            if whiten {
                WRule::Whiten { arg, res }
            } else {
                WRule::Keep { arg, res }
            }
        }
        _ => return None,
    };
    let count = match &rule {
        WRule::Whiten { arg, res } => arg.count + res.count + 1,
        WRule::Keep { arg, res } => arg.count + res.count,
        _ => 0,
    };
    Some(Witness { polarity: pol, count, lhs: WObj::Linear(lhs.clone()), rhs: WObj::Linear(rhs.clone()), rule })
}

/// Multisets relate under some bijection; found by augmenting paths.
pub fn decide_multi(pol: Polarity, lhs: &MultiType, rhs: &MultiType) -> Option<Witness> {
    let (l, r) = (lhs.elems(), rhs.elems());
    if l.len() != r.len() {
        return None;
    }
    let rel: Vec<Vec<Option<Witness>>> = r.iter().map(|b| l.iter().map(|a| decide_linear(pol, a, b)).collect()).collect();
    let mut owner: Vec<Option<usize>> = vec![None; l.len()];
    fn augment(i: usize, rel: &[Vec<Option<Witness>>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for j in 0..owner.len() {
            if rel[i][j].is_some() && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, rel, owner, seen)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..r.len() {
        if !augment(i, &rel, &mut owner, &mut vec![false; l.len()]) {
            return None;
        }
    }
    let mut children: Vec<Option<Witness>> = vec![None; r.len()];
    for (j, o) in owner.iter().enumerate() {
        let i = o.expect("perfect matching");
        children[i] = rel[i][j].clone();
    }
    let children: Vec<Witness> = children.into_iter().map(|c| c.expect("matched")).collect();
    Some(Witness {
        polarity: pol,
        count: children.iter().map(|c| c.count).sum(),
        lhs: WObj::Multi(lhs.clone()),
        rhs: WObj::Multi(rhs.clone()),
        rule: WRule::Multi(children),
    })
}

pub fn decide_env(pol: Polarity, lhs: &TypeEnv, rhs: &TypeEnv) -> Option<Witness> {
    if !lhs.support().eq(rhs.support()) {
        return None;
    }
    let mut children = Vec::new();
    for (x, m) in rhs.iter() {
        children.push((x.clone(), decide_multi(pol, &lhs.get(x), m)?));
    }
    Some(Witness {
        polarity: pol,
        count: children.iter().map(|(_, c)| c.count).sum(),
        lhs: WObj::Env(lhs.clone()),
        rhs: WObj::Env(rhs.clone()),
        rule: WRule::Env(children),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("the witnesses do not chain: the first one's right side is not the second one's left side")]
    Mismatch,
}

/// From `A ⊑^p_k1 B` and `B ⊑^p_k2 C`, build `A ⊑^p_(k1+k2) C`.
pub fn compose_whitening(w1: &Witness, w2: &Witness) -> Result<Witness, ComposeError> {
    if w1.polarity != w2.polarity || w1.rhs != w2.lhs {
        return Err(ComposeError::Mismatch);
    }
    let rule = match (&w1.rule, &w2.rule) {
        (WRule::Atom, WRule::Atom) => WRule::Atom,
        (
            WRule::Whiten { arg: a1, res: r1 } | WRule::Keep { arg: a1, res: r1 },
            WRule::Whiten { arg: a2, res: r2 } | WRule::Keep { arg: a2, res: r2 },
        ) => {
            let arg = Box::new(compose_whitening(a1, a2)?);
            let res = Box::new(compose_whitening(r1, r2)?);
            let (Some(LinearType::Arrow(_, ca, _)), Some(LinearType::Arrow(_, cc, _))) = (linear_of(&w1.lhs), linear_of(&w2.rhs))
            else {
                return Err(ComposeError::Mismatch);
            };
            if ca == cc {
                WRule::Keep { arg, res }
            } else {
                WRule::Whiten { arg, res }
            }
        }
        (WRule::Multi(c1), WRule::Multi(c2)) => {
            // c2[i] relates some element of B to C[i]; find it among c1, which
            // is aligned with B.
            let mut used = vec![false; c1.len()];
            let mut out = Vec::with_capacity(c2.len());
            for w in c2 {
                let k = (0..c1.len()).find(|&k| !used[k] && c1[k].rhs == w.lhs).ok_or(ComposeError::Mismatch)?;
                used[k] = true;
                out.push(compose_whitening(&c1[k], w)?);
            }
            WRule::Multi(out)
        }
        (WRule::Env(c1), WRule::Env(c2)) => {
            let mut out = Vec::with_capacity(c2.len());
            for ((x, a), (y, b)) in c1.iter().zip(c2) {
                if x != y {
                    return Err(ComposeError::Mismatch);
                }
                out.push((x.clone(), compose_whitening(a, b)?));
            }
            WRule::Env(out)
        }
        (WRule::Pair { env: e1, ty: t1 }, WRule::Pair { env: e2, ty: t2 }) => {
            WRule::Pair { env: Box::new(compose_whitening(e1, e2)?), ty: Box::new(compose_whitening(t1, t2)?) }
        }
        _ => return Err(ComposeError::Mismatch),
    };
    Ok(Witness { polarity: w1.polarity, count: w1.count + w2.count, lhs: w1.lhs.clone(), rhs: w2.rhs.clone(), rule })
}

/// `⟨Γ', x:M'; L'⟩ ⊑ ⟨Γ, x:M; L⟩` becomes `⟨Γ'; M' ->a L'⟩ ⊑ ⟨Γ; M ->a L⟩`.
pub fn invert_pair(w: &Witness, x: &Name, a: Color) -> Option<Witness> {
    let (WObj::Pair(e2, Ty::Linear(l2)), WObj::Pair(e, Ty::Linear(l))) = (&w.lhs, &w.rhs) else {
        return None;
    };
    let WRule::Pair { env, ty } = &w.rule else {
        return None;
    };
    let WRule::Env(entries) = &env.rule else {
        return None;
    };
    let (m2, m) = (e2.get(x), e.get(x));
    let arg = match entries.iter().find(|(y, _)| y == x) {
        Some((_, c)) => c.clone(),
        None => decide_multi(env.polarity, &m2, &m)?,
    };
    let rest: Vec<(Name, Witness)> = entries.iter().filter(|(y, _)| y != x).cloned().collect();
    let (e2r, er) = (e2.remove(x), e.remove(x));
    let env_w = Witness {
        polarity: env.polarity,
        count: rest.iter().map(|(_, c)| c.count).sum(),
        lhs: WObj::Env(e2r.clone()),
        rhs: WObj::Env(er.clone()),
        rule: WRule::Env(rest),
    };
    let arrow2 = LinearType::arrow(m2, a, l2.clone());
    let arrow = LinearType::arrow(m, a, l.clone());
    let ty_w = Witness {
        polarity: w.polarity,
        count: arg.count + ty.count,
        lhs: WObj::Linear(arrow2.clone()),
        rhs: WObj::Linear(arrow.clone()),
        rule: WRule::Keep { arg: Box::new(arg), res: ty.clone() },
    };
    Some(Witness {
        polarity: w.polarity,
        count: w.count,
        lhs: WObj::pair(e2r, arrow2),
        rhs: WObj::pair(er, arrow),
        rule: WRule::Pair { env: Box::new(env_w), ty: Box::new(ty_w) },
    })
}

/// The converse of [`invert_pair`]: move the arrow's argument into `x`.
pub fn uninvert_pair(w: &Witness, x: &Name) -> Option<Witness> {
    let (WObj::Pair(e2, Ty::Linear(LinearType::Arrow(m2, _, l2))), WObj::Pair(e, Ty::Linear(LinearType::Arrow(m, _, l)))) =
        (&w.lhs, &w.rhs)
    else {
        return None;
    };
    let WRule::Pair { env, ty } = &w.rule else {
        return None;
    };
    let (WRule::Keep { arg, res }, WRule::Env(entries)) = (&ty.rule, &env.rule) else {
        return None;
    };
    if !e.get(x).is_empty() || !e2.get(x).is_empty() {
        return None;
    }
    let mut e2x = e2.clone();
    e2x.insert(x.clone(), m2.clone());
    let mut ex = e.clone();
    ex.insert(x.clone(), m.clone());
    let mut entries = entries.clone();
    if !m.is_empty() {
        entries.push((x.clone(), (**arg).clone()));
        entries.sort_by(|a, b| a.0.cmp(&b.0));
    }
    let env_w = Witness {
        polarity: env.polarity,
        count: entries.iter().map(|(_, c)| c.count).sum(),
        lhs: WObj::Env(e2x.clone()),
        rhs: WObj::Env(ex.clone()),
        rule: WRule::Env(entries),
    };
    Some(Witness {
        polarity: w.polarity,
        count: w.count,
        lhs: WObj::pair(e2x, (**l2).clone()),
        rhs: WObj::pair(ex, (**l).clone()),
        rule: WRule::Pair { env: Box::new(env_w), ty: res.clone() },
    })
}

/// Which way `variants` recolors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// All `X'` with `X' ⊑^p X`.
    Whiter,
    /// All `X'` with `X ⊑^p X'`.
    Blacker,
}

/// All objects related to `obj` at polarity `pol`, each with its count.
pub fn variants(pol: Polarity, obj: &WObj, dir: Direction) -> Vec<(WObj, usize)> {
    match obj {
        WObj::Linear(l) => linear_variants(pol, l, dir).into_iter().map(|(l, k)| (WObj::Linear(l), k)).collect(),
        WObj::Multi(m) => multi_variants(pol, m, dir).into_iter().map(|(m, k)| (WObj::Multi(m), k)).collect(),
        WObj::Env(e) => env_variants(pol, e, dir).into_iter().map(|(e, k)| (WObj::Env(e), k)).collect(),
        WObj::Pair(e, t) => {
            let envs = env_variants(pol.flip(), e, dir);
            let tys: Vec<(Ty, usize)> = match t {
                Ty::Linear(l) => linear_variants(pol, l, dir).into_iter().map(|(l, k)| (Ty::Linear(l), k)).collect(),
                Ty::Multi(m) => multi_variants(pol, m, dir).into_iter().map(|(m, k)| (Ty::Multi(m), k)).collect(),
            };
            let mut out = Vec::with_capacity(envs.len() * tys.len());
            for (e2, k1) in &envs {
                for (t2, k2) in &tys {
                    out.push((WObj::Pair(e2.clone(), t2.clone()), k1 + k2));
                }
            }
            out
        }
    }
}

pub fn linear_variants(pol: Polarity, l: &LinearType, dir: Direction) -> Vec<(LinearType, usize)> {
    match l {
        LinearType::Atom(_) => vec![(l.clone(), 0)],
        LinearType::Arrow(m, c, r) => {
            let args = multi_variants(pol.flip(), m, dir);
            let ress = linear_variants(pol, r, dir);
            let flippable = pol == Polarity::Positive
                && match dir {
                    Direction::Whiter => *c == Color::Black,
                    Direction::Blacker => *c == Color::White,
                };
            let mut out = Vec::new();
            for (m2, k1) in &args {
                for (r2, k2) in &ress {
                    out.push((LinearType::arrow(m2.clone(), *c, r2.clone()), k1 + k2));
                    if flippable {
                        out.push((LinearType::arrow(m2.clone(), c.flip(), r2.clone()), k1 + k2 + 1));
                    }
                }
            }
            out
        }
    }
}

pub fn multi_variants(pol: Polarity, m: &MultiType, dir: Direction) -> Vec<(MultiType, usize)> {
    let mut acc: Vec<(Vec<LinearType>, usize)> = vec![(vec![], 0)];
    for e in m.elems() {
        let vs = linear_variants(pol, e, dir);
        let mut next = Vec::with_capacity(acc.len() * vs.len());
        for (prefix, k) in &acc {
            for (v, kv) in &vs {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push((p, k + kv));
            }
        }
        acc = next;
    }
    let mut out: Vec<(MultiType, usize)> = acc.into_iter().map(|(v, k)| (MultiType::new(v), k)).collect();
    out.sort();
    out.dedup();
    out
}

pub fn env_variants(pol: Polarity, e: &TypeEnv, dir: Direction) -> Vec<(TypeEnv, usize)> {
    let mut acc: Vec<(TypeEnv, usize)> = vec![(TypeEnv::empty(), 0)];
    for (x, m) in e.iter() {
        let vs = multi_variants(pol, m, dir);
        let mut next = Vec::with_capacity(acc.len() * vs.len());
        for (prefix, k) in &acc {
            for (v, kv) in &vs {
                let mut p = prefix.clone();
                p.insert(x.clone(), v.clone());
                next.push((p, k + kv));
            }
        }
        acc = next;
    }
    acc
}

/// The right-hand side with only the first whitened arrow of `w` applied.
pub fn first_step(w: &Witness) -> Option<WObj> {
    match (&w.rule, &w.rhs) {
        (WRule::Atom, _) => None,
        (WRule::Whiten { .. }, WObj::Linear(LinearType::Arrow(m, _, l))) => {
            Some(WObj::Linear(LinearType::Arrow(m.clone(), Color::White, l.clone())))
        }
        (WRule::Keep { arg, res }, WObj::Linear(LinearType::Arrow(m, c, l))) => {
            if let Some(WObj::Multi(m2)) = first_step(arg) {
                return Some(WObj::Linear(LinearType::Arrow(m2, *c, l.clone())));
            }
            match first_step(res) {
                Some(WObj::Linear(l2)) => Some(WObj::Linear(LinearType::arrow(m.clone(), *c, l2))),
                _ => None,
            }
        }
        (WRule::Multi(ch), WObj::Multi(m)) => ch.iter().enumerate().find_map(|(i, c)| match first_step(c) {
            Some(WObj::Linear(e)) => {
                let mut v = m.elems().to_vec();
                v[i] = e;
                Some(WObj::Multi(MultiType::new(v)))
            }
            _ => None,
        }),
        (WRule::Env(ch), WObj::Env(e)) => ch.iter().find_map(|(x, c)| match first_step(c) {
            Some(WObj::Multi(m2)) => {
                let mut e2 = e.clone();
                e2.insert(x.clone(), m2);
                Some(WObj::Env(e2))
            }
            _ => None,
        }),
        (WRule::Pair { env, ty }, WObj::Pair(e, t)) => {
            if let Some(WObj::Env(e2)) = first_step(env) {
                return Some(WObj::Pair(e2, t.clone()));
            }
            match first_step(ty)? {
                WObj::Linear(l) => Some(WObj::Pair(e.clone(), Ty::Linear(l))),
                WObj::Multi(m) => Some(WObj::Pair(e.clone(), Ty::Multi(m))),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Given `A ⊑ R` and `B ⊑ R` (any polarities), the object whose white
/// arrows are those of `A` together with those of `B`.
pub fn overlay(w1: &Witness, w2: &Witness) -> Option<WObj> {
    if w1.rhs != w2.rhs {
        return None;
    }
    match (&w1.rule, &w2.rule, &w1.rhs) {
        (WRule::Atom, WRule::Atom, r) => Some(r.clone()),
        (
            WRule::Whiten { arg: a1, res: r1 } | WRule::Keep { arg: a1, res: r1 },
            WRule::Whiten { arg: a2, res: r2 } | WRule::Keep { arg: a2, res: r2 },
            WObj::Linear(LinearType::Arrow(_, c, _)),
        ) => {
            let white = matches!(w1.rule, WRule::Whiten { .. }) || matches!(w2.rule, WRule::Whiten { .. });
            let color = if white { Color::White } else { *c };
            let (Some(WObj::Multi(m)), Some(WObj::Linear(l))) = (overlay(a1, a2), overlay(r1, r2)) else {
                return None;
            };
            Some(WObj::Linear(LinearType::arrow(m, color, l)))
        }
        (WRule::Multi(c1), WRule::Multi(c2), _) => {
            let mut elems = Vec::with_capacity(c1.len());
            for (a, b) in c1.iter().zip(c2) {
                match overlay(a, b)? {
                    WObj::Linear(l) => elems.push(l),
                    _ => return None,
                }
            }
            Some(WObj::Multi(MultiType::new(elems)))
        }
        (WRule::Env(c1), WRule::Env(c2), _) => {
            let mut e = TypeEnv::empty();
            for ((x, a), (_, b)) in c1.iter().zip(c2) {
                match overlay(a, b)? {
                    WObj::Multi(m) => e.insert(x.clone(), m),
                    _ => return None,
                }
            }
            Some(WObj::Env(e))
        }
        (WRule::Pair { env: e1, ty: t1 }, WRule::Pair { env: e2, ty: t2 }, _) => {
            let WObj::Env(e) = overlay(e1, e2)? else {
                return None;
            };
            match overlay(t1, t2)? {
                WObj::Linear(l) => Some(WObj::Pair(e, Ty::Linear(l))),
                WObj::Multi(m) => Some(WObj::Pair(e, Ty::Multi(m))),
                _ => None,
            }
        }
        _ => None,
    }
}

/// The commutation square: from `N ⊑^-_1 P` and `Q ⊑^+_1 P`, the corner
/// `C` with `C ⊑^+_1 N` and `C ⊑^-_1 Q`, witnessed.
pub fn commute(neg: &Witness, pos: &Witness) -> Option<(WObj, Witness, Witness)> {
    let c = overlay(neg, pos)?;
    let to_neg = decide_whitening(Polarity::Positive, &c, &neg.lhs)?;
    let to_pos = decide_whitening(Polarity::Negative, &c, &pos.lhs)?;
    Some((c, to_neg, to_pos))
}

/// Parse `env ; L`, an environment, a multi type `[..]`, or a linear type.
pub fn parse_wobj(src: &str) -> Result<WObj, SyntaxError> {
    if src.contains(';') {
        let (e, l) = syntax::parse_pair(src)?;
        return Ok(WObj::pair(e, l));
    }
    if let Ok(l) = syntax::parse_type(src) {
        return Ok(WObj::Linear(l));
    }
    if let Ok(m) = syntax::parse_multi(src) {
        return Ok(WObj::Multi(m));
    }
    syntax::parse_env(src).map(WObj::Env)
}

pub fn wobj_to_json(o: &WObj) -> Value {
    match o {
        WObj::Linear(l) => json!({"linear": syntax::type_to_json(l)}),
        WObj::Multi(m) => json!({"multi": syntax::multi_to_json(m)}),
        WObj::Env(e) => json!({"env": syntax::env_to_json(e)}),
        WObj::Pair(e, Ty::Linear(l)) => json!({"pair": {"env": syntax::env_to_json(e), "type": syntax::type_to_json(l)}}),
        WObj::Pair(e, Ty::Multi(m)) => json!({"pair": {"env": syntax::env_to_json(e), "multi": syntax::multi_to_json(m)}}),
    }
}

pub fn witness_to_json(w: &Witness) -> Value {
    let rule = match &w.rule {
        WRule::Atom => "atom",
        WRule::Whiten { .. } => "whiten",
        WRule::Keep { .. } => "keep",
        WRule::Multi(_) => "multi",
        WRule::Env(_) => "env",
        WRule::Pair { .. } => "pair",
    };
    json!({
        "polarity": w.polarity.sign().to_string(),
        "count": w.count,
        "rule": rule,
        "lhs": w.lhs.to_string(),
        "rhs": w.rhs.to_string(),
        "children": w.children().into_iter().map(witness_to_json).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;
    use Polarity::*;

    fn lin(s: &str) -> WObj {
        WObj::Linear(parse_type(s).unwrap())
    }

    #[test]
    fn direct_rule_instances() {
        let w = decide_whitening(Positive, &lin("[] ->w X"), &lin("[] ->b X")).unwrap();
        assert_eq!(w.count, 1);
        check_whitening(&w).unwrap();
        assert!(decide_whitening(Negative, &lin("[] ->w X"), &lin("[] ->b X")).is_none());
        assert!(decide_whitening(Positive, &lin("[] ->b X"), &lin("[] ->w X")).is_none());
    }

    #[test]
    fn forged_negative_whitening_is_rejected() {
        let mut w = decide_whitening(Positive, &lin("[] ->w X"), &lin("[] ->b X")).unwrap();
        w.polarity = Negative;
        if let WRule::Whiten { arg, .. } = &mut w.rule {
            arg.polarity = Positive;
        }
        if let WRule::Whiten { res, .. } = &mut w.rule {
            res.polarity = Negative;
        }
        assert!(check_whitening(&w).is_err());
    }

    #[test]
    fn nested_argument_flips_polarity() {
        let lhs = lin("[[] ->w X] ->b X");
        let rhs = lin("[[] ->b X] ->b X");
        assert!(decide_whitening(Positive, &lhs, &rhs).is_none());
        let w = decide_whitening(Negative, &lhs, &rhs).unwrap();
        assert_eq!(w.count, 1);
        check_whitening(&w).unwrap();
    }

    #[test]
    fn eta_pair_example() {
        let lhs = parse_wobj("x : [[] ->w X] ; [] ->w X").unwrap();
        let rhs = parse_wobj("x : [[] ->w X] ; [] ->b X").unwrap();
        let w = decide_whitening(Positive, &lhs, &rhs).unwrap();
        assert_eq!(w.count, 1);
        check_whitening(&w).unwrap();
        let y = crate::term::name("y");
        let back = uninvert_pair(&invert_pair(&w, &y, Color::Black).unwrap(), &y).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn two_step_composition() {
        let a = lin("[] ->w X");
        let b = lin("[] ->b X");
        let mid = lin("[[] ->b X] ->w X");
        let top = lin("[[] ->b X] ->b X");
        let w1 = decide_whitening(Positive, &lin("[[] ->b X] ->w [] ->w X"), &lin("[[] ->b X] ->w [] ->b X")).unwrap();
        let w2 = decide_whitening(Positive, &lin("[[] ->b X] ->w [] ->b X"), &lin("[[] ->b X] ->b [] ->b X")).unwrap();
        let c = compose_whitening(&w1, &w2).unwrap();
        assert_eq!(c.count, 2);
        check_whitening(&c).unwrap();
        let id = decide_whitening(Positive, &a, &a).unwrap();
        let w = decide_whitening(Positive, &a, &b).unwrap();
        assert_eq!(compose_whitening(&id, &w).unwrap(), w);
        assert_eq!(decide_whitening(Positive, &mid, &top).unwrap().count, 1);
    }

    #[test]
    fn multisets_need_a_bijection() {
        let lhs = WObj::Multi(crate::syntax::parse_multi("[[] ->w X, [] ->b X]").unwrap());
        let rhs = WObj::Multi(crate::syntax::parse_multi("[[] ->b X, [] ->b X]").unwrap());
        let w = decide_whitening(Positive, &lhs, &rhs).unwrap();
        assert_eq!(w.count, 1);
        check_whitening(&w).unwrap();
        let short = WObj::Multi(crate::syntax::parse_multi("[[] ->b X]").unwrap());
        assert!(decide_whitening(Positive, &short, &rhs).is_none());
    }

    #[test]
    fn variants_are_related() {
        let o = parse_wobj("x : [[[] ->b X] ->b X] ; [[] ->b X] ->b X").unwrap();
        for (v, k) in variants(Positive, &o, Direction::Whiter) {
            let w = decide_whitening(Positive, &v, &o).unwrap();
            assert_eq!(w.count, k);
        }
        for (v, k) in variants(Negative, &o, Direction::Blacker) {
            assert_eq!(decide_whitening(Negative, &o, &v).unwrap().count, k);
        }
    }

    #[test]
    fn commutation_example() {
        let p = parse_wobj("x : [[] ->b X] ; [[] ->b X] ->b X").unwrap();
        let n = parse_wobj("x : [[] ->w X] ; [[] ->b X] ->b X").unwrap();
        let q = parse_wobj("x : [[] ->b X] ; [[] ->b X] ->w X").unwrap();
        let wn = decide_whitening(Negative, &n, &p).unwrap();
        let wp = decide_whitening(Positive, &q, &p).unwrap();
        let (c, a, b) = commute(&wn, &wp).unwrap();
        assert_eq!(c, parse_wobj("x : [[] ->w X] ; [[] ->b X] ->w X").unwrap());
        assert_eq!((a.count, b.count), (1, 1));
    }
}
