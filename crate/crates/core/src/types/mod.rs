//! The colored multi type system.

pub mod derivation;
pub mod enumerate;
pub mod lemmas;

use std::collections::BTreeMap;

use crate::term::{Color, Name};

pub use derivation::{check_derivation, CheckError, Derivation, Rule, Ty};
pub use enumerate::{
    check_soundness, enumerate_typings, interpretation, min_derivation, Diverged, Enumeration, Membership, MembershipSolver,
    SoundnessVerdict, TypeBound,
};
pub use lemmas::{
    anti_substitute, merge_derivations, split_derivation, subject_expand, subject_reduce, substitute_derivation, type_hnf_zero,
    LemmaError,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinearType {
    Atom(Name),
    Arrow(MultiType, Color, Box<LinearType>),
}

/// A finite multiset of linear types, kept in canonical (sorted) order so
/// that structural equality is multiset equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiType(Vec<LinearType>);

/// A finite map from variables to non-empty multi types.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeEnv(BTreeMap<Name, MultiType>);

/// An element `(Γ, L, k)` of the colored interpretation of a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Typing {
    pub env: TypeEnv,
    pub ty: LinearType,
    pub index: usize,
}

/// `δ(a, b)`: 1 iff the colors differ.
pub fn xor_color(a: Color, b: Color) -> usize {
    usize::from(a != b)
}

impl LinearType {
    pub fn atom(x: &str) -> LinearType {
        LinearType::Atom(crate::term::name(x))
    }

    pub fn x() -> LinearType {
        LinearType::atom("X")
    }

    pub fn arrow(m: MultiType, c: Color, l: LinearType) -> LinearType {
        LinearType::Arrow(m, c, Box::new(l))
    }

    /// Atoms have depth 1; an arrow is one deeper than its deepest part.
    pub fn depth(&self) -> usize {
        match self {
            LinearType::Atom(_) => 1,
            LinearType::Arrow(m, _, l) => 1 + m.depth().max(l.depth()),
        }
    }

    /// Largest multiset cardinality anywhere in the type.
    pub fn width(&self) -> usize {
        match self {
            LinearType::Atom(_) => 0,
            LinearType::Arrow(m, _, l) => m.width().max(l.width()),
        }
    }

    pub fn arrows(&self) -> usize {
        match self {
            LinearType::Atom(_) => 0,
            LinearType::Arrow(m, _, l) => 1 + m.arrows() + l.arrows(),
        }
    }

    pub fn count_color(&self, c: Color) -> usize {
        match self {
            LinearType::Atom(_) => 0,
            LinearType::Arrow(m, d, l) => usize::from(*d == c) + m.count_color(c) + l.count_color(c),
        }
    }

    pub fn paint(&self, c: Color) -> LinearType {
        match self {
            LinearType::Atom(_) => self.clone(),
            LinearType::Arrow(m, _, l) => LinearType::arrow(m.paint(c), c, l.paint(c)),
        }
    }

    /// The uncolored skeleton, represented as the black painting.
    pub fn wash(&self) -> LinearType {
        self.paint(Color::Black)
    }

    /// Split `M1 →a1 ... Mn →an L0` into its first `n` arguments and `L0`.
    pub fn uncurry(&self, n: usize) -> Option<(Vec<(MultiType, Color)>, LinearType)> {
        let mut args = Vec::with_capacity(n);
        let mut cur = self;
        for _ in 0..n {
            match cur {
                LinearType::Arrow(m, c, l) => {
                    args.push((m.clone(), *c));
                    cur = l;
                }
                LinearType::Atom(_) => return None,
            }
        }
        Some((args, cur.clone()))
    }

    pub fn curry(args: Vec<(MultiType, Color)>, result: LinearType) -> LinearType {
        args.into_iter().rev().fold(result, |acc, (m, c)| LinearType::arrow(m, c, acc))
    }
}

impl MultiType {
    pub fn empty() -> MultiType {
        MultiType(Vec::new())
    }

    pub fn new(mut elems: Vec<LinearType>) -> MultiType {
        elems.sort();
        MultiType(elems)
    }

    pub fn single(l: LinearType) -> MultiType {
        MultiType(vec![l])
    }

    pub fn elems(&self) -> &[LinearType] {
        &self.0
    }

    pub fn into_elems(self) -> Vec<LinearType> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self, other: &MultiType) -> MultiType {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        MultiType::new(v)
    }

    pub fn contains(&self, l: &LinearType) -> bool {
        self.0.binary_search(l).is_ok()
    }

    /// `self - [l]`, if `l` occurs.
    pub fn remove_one(&self, l: &LinearType) -> Option<MultiType> {
        let i = self.0.binary_search(l).ok()?;
        let mut v = self.0.clone();
        v.remove(i);
        Some(MultiType(v))
    }

    /// `self - other` as multisets, if `other` is contained in `self`.
    pub fn difference(&self, other: &MultiType) -> Option<MultiType> {
        let mut cur = self.clone();
        for l in &other.0 {
            cur = cur.remove_one(l)?;
        }
        Some(cur)
    }

    pub fn depth(&self) -> usize {
        self.0.iter().map(LinearType::depth).max().unwrap_or(0)
    }

    pub fn width(&self) -> usize {
        self.0.iter().map(LinearType::width).max().unwrap_or(0).max(self.0.len())
    }

    pub fn arrows(&self) -> usize {
        self.0.iter().map(LinearType::arrows).sum()
    }

    pub fn count_color(&self, c: Color) -> usize {
        self.0.iter().map(|l| l.count_color(c)).sum()
    }

    pub fn paint(&self, c: Color) -> MultiType {
        MultiType::new(self.0.iter().map(|l| l.paint(c)).collect())
    }

    pub fn wash(&self) -> MultiType {
        self.paint(Color::Black)
    }
}

impl FromIterator<LinearType> for MultiType {
    fn from_iter<I: IntoIterator<Item = LinearType>>(iter: I) -> Self {
        MultiType::new(iter.into_iter().collect())
    }
}

impl TypeEnv {
    pub fn empty() -> TypeEnv {
        TypeEnv(BTreeMap::new())
    }

    pub fn single(x: Name, m: MultiType) -> TypeEnv {
        let mut e = TypeEnv::empty();
        e.insert(x, m);
        e
    }

    /// Set `x`'s multi type, dropping the entry when it is empty.
    pub fn insert(&mut self, x: Name, m: MultiType) {
        if m.is_empty() {
            self.0.remove(&x);
        } else {
            self.0.insert(x, m);
        }
    }

    pub fn get(&self, x: &str) -> MultiType {
        self.0.get(x).cloned().unwrap_or_default()
    }

    pub fn remove(&self, x: &str) -> TypeEnv {
        let mut e = self.clone();
        e.0.remove(x);
        e
    }

    pub fn support(&self) -> impl Iterator<Item = &Name> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &MultiType)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Pointwise multiset sum `Γ ⊎ Δ`.
    pub fn sum(&self, other: &TypeEnv) -> TypeEnv {
        let mut out = self.clone();
        for (x, m) in &other.0 {
            let merged = out.get(x).sum(m);
            out.insert(x.clone(), merged);
        }
        out
    }

    /// Pointwise difference, if `other` is contained in `self`.
    pub fn difference(&self, other: &TypeEnv) -> Option<TypeEnv> {
        let mut out = self.clone();
        for (x, m) in &other.0 {
            let d = out.get(x).difference(m)?;
            out.insert(x.clone(), d);
        }
        Some(out)
    }

    pub fn depth(&self) -> usize {
        self.0.values().map(MultiType::depth).max().unwrap_or(0)
    }

    pub fn width(&self) -> usize {
        self.0.values().map(MultiType::width).max().unwrap_or(0)
    }

    pub fn count_color(&self, c: Color) -> usize {
        self.0.values().map(|m| m.count_color(c)).sum()
    }

    pub fn wash(&self) -> TypeEnv {
        TypeEnv(self.0.iter().map(|(x, m)| (x.clone(), m.wash())).collect())
    }
}

impl FromIterator<(Name, MultiType)> for TypeEnv {
    fn from_iter<I: IntoIterator<Item = (Name, MultiType)>>(iter: I) -> Self {
        let mut e = TypeEnv::empty();
        for (x, m) in iter {
            let merged = e.get(&x).sum(&m);
            e.insert(x, merged);
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr(m: Vec<LinearType>, c: Color, l: LinearType) -> LinearType {
        LinearType::arrow(MultiType::new(m), c, l)
    }

    #[test]
    fn xor_table() {
        assert_eq!(xor_color(Color::Black, Color::Black), 0);
        assert_eq!(xor_color(Color::Black, Color::White), 1);
        for a in [Color::Black, Color::White] {
            for b in [Color::Black, Color::White] {
                assert_eq!(xor_color(a, b), xor_color(b, a));
            }
        }
    }

    #[test]
    fn multiset_sum_commutes_and_has_unit() {
        let a = MultiType::new(vec![LinearType::x(), arr(vec![], Color::White, LinearType::x())]);
        let b = MultiType::single(LinearType::atom("Y"));
        assert_eq!(a.sum(&b), b.sum(&a));
        assert_eq!(a.sum(&MultiType::empty()), a);
    }

    #[test]
    fn env_lookup_outside_support_is_empty() {
        let e = TypeEnv::single(crate::term::name("x"), MultiType::single(LinearType::x()));
        assert!(e.get("y").is_empty());
        let s = e.sum(&e);
        assert_eq!(s.get("x").len(), 2);
        assert_eq!(s.difference(&e), Some(e.clone()));
    }

    #[test]
    fn depth_counts_atoms_as_one() {
        assert_eq!(LinearType::x().depth(), 1);
        assert_eq!(arr(vec![], Color::Black, LinearType::x()).depth(), 2);
        let nested = arr(vec![arr(vec![], Color::White, LinearType::x())], Color::Black, LinearType::x());
        assert_eq!(nested.depth(), 3);
    }
}
