//! Typing derivations and their rule-by-rule checker.

use std::fmt;

use crate::term::{alpha_eq, Color, Name, Term};

use super::{xor_color, LinearType, MultiType, TypeEnv, Typing};

/// The right-hand side of a judgement: a linear type or, for `many`, a
/// multi type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    Linear(LinearType),
    Multi(MultiType),
}

impl Ty {
    pub fn linear(&self) -> Option<&LinearType> {
        match self {
            Ty::Linear(l) => Some(l),
            Ty::Multi(_) => None,
        }
    }

    pub fn multi(&self) -> Option<&MultiType> {
        match self {
            Ty::Multi(m) => Some(m),
            Ty::Linear(_) => None,
        }
    }

    pub fn count_color(&self, c: Color) -> usize {
        match self {
            Ty::Linear(l) => l.count_color(c),
            Ty::Multi(m) => m.count_color(c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Ax,
    Many(Vec<Derivation>),
    Lam(Box<Derivation>),
    App { arrow: Color, app: Color, fun: Box<Derivation>, arg: Box<Derivation> },
}

/// A derivation of `env ⊢_index term : ty`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub rule: Rule,
    pub env: TypeEnv,
    pub term: Term,
    pub ty: Ty,
    pub index: usize,
}

impl Derivation {
    /// `x : [L] ⊢0 x : L`.
    pub fn ax(x: Name, l: LinearType) -> Derivation {
        Derivation {
            rule: Rule::Ax,
            env: TypeEnv::single(x.clone(), MultiType::single(l.clone())),
            term: Term::Var(x),
            ty: Ty::Linear(l),
            index: 0,
        }
    }

    /// The `many` rule over derivations of linear types for `term`.
    pub fn many(term: Term, children: Vec<Derivation>) -> Derivation {
        let env = children.iter().fold(TypeEnv::empty(), |acc, d| acc.sum(&d.env));
        let ty = MultiType::new(children.iter().filter_map(|d| d.ty.linear().cloned()).collect());
        let index = children.iter().map(|d| d.index).sum();
        Derivation { rule: Rule::Many(children), env, term, ty: Ty::Multi(ty), index }
    }

    /// The `λ` rule: moves the binder's multi type into an arrow of color `c`.
    pub fn lam(c: Color, x: Name, body: Derivation) -> Derivation {
        let m = body.env.get(&x);
        let l = body.ty.linear().cloned().unwrap_or_else(LinearType::x);
        Derivation {
            env: body.env.remove(&x),
            term: Term::Abs(c, x, std::sync::Arc::new(body.term.clone())),
            ty: Ty::Linear(LinearType::arrow(m, c, l)),
            index: body.index,
            rule: Rule::Lam(Box::new(body)),
        }
    }

    /// The `@` rule for `fun app@ arg`; `fun` must conclude an arrow.
    pub fn app(app: Color, fun: Derivation, arg: Derivation) -> Derivation {
        let (arrow, result) = match &fun.ty {
            Ty::Linear(LinearType::Arrow(_, c, l)) => (*c, (**l).clone()),
            _ => (app, LinearType::x()),
        };
        Derivation {
            env: fun.env.sum(&arg.env),
            term: Term::app(app, fun.term.clone(), arg.term.clone()),
            ty: Ty::Linear(result),
            index: fun.index + arg.index + xor_color(arrow, app),
            rule: Rule::App { arrow, app, fun: Box::new(fun), arg: Box::new(arg) },
        }
    }

    /// Number of `@` rules.
    pub fn applicative_size(&self) -> usize {
        match &self.rule {
            Rule::Ax => 0,
            Rule::Many(ch) => ch.iter().map(Derivation::applicative_size).sum(),
            Rule::Lam(b) => b.applicative_size(),
            Rule::App { fun, arg, .. } => 1 + fun.applicative_size() + arg.applicative_size(),
        }
    }

    /// The conclusion as a typing, for linear conclusions.
    pub fn typing(&self) -> Option<Typing> {
        Some(Typing { env: self.env.clone(), ty: self.ty.linear()?.clone(), index: self.index })
    }

    pub fn children(&self) -> Vec<&Derivation> {
        match &self.rule {
            Rule::Ax => vec![],
            Rule::Many(ch) => ch.iter().collect(),
            Rule::Lam(b) => vec![&**b],
            Rule::App { fun, arg, .. } => vec![&**fun, &**arg],
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self.rule {
            Rule::Ax => "ax",
            Rule::Many(_) => "many",
            Rule::Lam(_) => "lam",
            Rule::App { .. } => "app",
        }
    }

    /// Recompute the conclusion of this node from its children, keeping the
    /// children and the node's own term constructor colors.
    pub fn rebuild(self) -> Derivation {
        match self.rule {
            Rule::Ax => self,
            Rule::Many(ch) => Derivation::many(self.term, ch),
            Rule::Lam(b) => match &self.term {
                Term::Abs(c, x, _) => Derivation::lam(*c, x.clone(), *b),
                _ => Derivation { rule: Rule::Lam(b), ..self },
            },
            Rule::App { app, fun, arg, .. } => Derivation::app(app, *fun, *arg),
        }
    }
}

/// The first node that fails its rule, addressed by child indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckError {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule violated at {:?}: {}", self.path, self.reason)
    }
}

impl std::error::Error for CheckError {}

pub fn check_derivation(d: &Derivation) -> Result<(), CheckError> {
    let mut path = Vec::new();
    check_at(d, &mut path)
}

fn fail(path: &[usize], reason: impl Into<String>) -> Result<(), CheckError> {
    Err(CheckError { path: path.to_vec(), reason: reason.into() })
}

fn check_children(children: &[&Derivation], path: &mut Vec<usize>) -> Result<(), CheckError> {
    for (i, c) in children.iter().enumerate() {
        path.push(i);
        check_at(c, path)?;
        path.pop();
    }
    Ok(())
}

fn check_at(d: &Derivation, path: &mut Vec<usize>) -> Result<(), CheckError> {
    match &d.rule {
        Rule::Ax => {
            let Term::Var(x) = &d.term else {
                return fail(path, "ax on a non-variable");
            };
            let Ty::Linear(l) = &d.ty else {
                return fail(path, "ax concludes a multi type");
            };
            if d.env != TypeEnv::single(x.clone(), MultiType::single(l.clone())) {
                return fail(path, "ax environment differs from x:[L]");
            }
            if d.index != 0 {
                return fail(path, "ax index must be 0");
            }
            Ok(())
        }
        Rule::Many(ch) => {
            let Ty::Multi(m) = &d.ty else {
                return fail(path, "many concludes a linear type");
            };
            let mut types = Vec::new();
            for c in ch {
                if !alpha_eq(&c.term, &d.term) {
                    return fail(path, "many premise types a different term");
                }
                match &c.ty {
                    Ty::Linear(l) => types.push(l.clone()),
                    Ty::Multi(_) => return fail(path, "many premise concludes a multi type"),
                }
            }
            if MultiType::new(types) != *m {
                return fail(path, "many multiset differs from premises");
            }
            let env = ch.iter().fold(TypeEnv::empty(), |acc, c| acc.sum(&c.env));
            if env != d.env {
                return fail(path, "many environment is not the sum of premises");
            }
            if d.index != ch.iter().map(|c| c.index).sum::<usize>() {
                return fail(path, "many index is not the sum of premises");
            }
            check_children(&ch.iter().collect::<Vec<_>>(), path)
        }
        Rule::Lam(b) => {
            let Term::Abs(c, x, body) = &d.term else {
                return fail(path, "lam on a non-abstraction");
            };
            if !alpha_eq(&b.term, body) {
                return fail(path, "lam premise types a different body");
            }
            let Ty::Linear(l) = &b.ty else {
                return fail(path, "lam premise concludes a multi type");
            };
            let expected = LinearType::arrow(b.env.get(x), *c, l.clone());
            if d.ty != Ty::Linear(expected) {
                return fail(path, "lam type is not M ->c L with the abstraction's color");
            }
            if d.env != b.env.remove(x) {
                return fail(path, "lam environment keeps the bound variable");
            }
            if d.index != b.index {
                return fail(path, "lam index differs from premise");
            }
            check_children(&[b], path)
        }
        Rule::App { arrow, app, fun, arg } => {
            let Term::App(b, f, a) = &d.term else {
                return fail(path, "app on a non-application");
            };
            if b != app {
                return fail(path, "app color differs from the term");
            }
            if !alpha_eq(&fun.term, f) || !alpha_eq(&arg.term, a) {
                return fail(path, "app premises type different subterms");
            }
            let Ty::Linear(LinearType::Arrow(m, c, l)) = &fun.ty else {
                return fail(path, "app function premise is not an arrow");
            };
            if c != arrow {
                return fail(path, "app arrow color differs from the function type");
            }
            if arg.ty != Ty::Multi(m.clone()) {
                return fail(path, "app argument multi type mismatch");
            }
            if d.ty != Ty::Linear((**l).clone()) {
                return fail(path, "app result type mismatch");
            }
            if d.env != fun.env.sum(&arg.env) {
                return fail(path, "app environment is not the sum of premises");
            }
            if d.index != fun.index + arg.index + xor_color(*arrow, *app) {
                return fail(path, "app index is not k1 + k2 + δ");
            }
            check_children(&[fun, arg], path)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::name;
    use Color::*;

    fn eta_derivation(env_arrow: Color) -> Derivation {
        // x:[[] ->c X] ⊢ λ•y. x •@ y : [] ->b X
        let fx = LinearType::arrow(MultiType::empty(), env_arrow, LinearType::x());
        let ax = Derivation::ax(name("x"), fx);
        let arg = Derivation::many(Term::var("y"), vec![]);
        let app = Derivation::app(Black, ax, arg);
        Derivation::lam(Black, name("y"), app)
    }

    #[test]
    fn eta_derivation_checks_with_index_one() {
        let d = eta_derivation(White);
        assert_eq!(d.index, 1);
        check_derivation(&d).unwrap();
        assert_eq!(d.ty, Ty::Linear(LinearType::arrow(MultiType::empty(), Black, LinearType::x())));
    }

    #[test]
    fn wrong_index_is_rejected_at_the_app_node() {
        let mut d = eta_derivation(White);
        d.index = 0;
        if let Rule::Lam(b) = &mut d.rule {
            b.index = 0;
        }
        let err = check_derivation(&d).unwrap_err();
        assert_eq!(err.path, vec![0]);
    }

    #[test]
    fn mismatched_axiom_is_rejected() {
        let white = LinearType::arrow(MultiType::empty(), White, LinearType::x());
        let black = LinearType::arrow(MultiType::empty(), Black, LinearType::x());
        let mut d = Derivation::ax(name("x"), white);
        d.ty = Ty::Linear(black);
        assert!(check_derivation(&d).is_err());
    }
}
