//! String-in, JSON-out entry points shared by the command line and the web
//! demo.

use serde_json::{json, Value};
use thiserror::Error;

use crate::preorder::{
    bohm_json, bohm_leq_eta_red, bohm_out_separator, crosscheck_main_theorem, ctx_json, interaction_improvement_check, pwc_check,
    pwc_json, Bounds, SeparateError,
};
use crate::reduce::{evaluate_head, redex_paths, reduce_anywhere, EvalResult, KindFilter, StepKind};
use crate::syntax::{parse_env, parse_term, parse_type, print_context, print_derivation, print_term, print_typing};
use crate::term::{paint, plug, Color, Term};
use crate::types::{check_derivation, enumerate_typings, min_derivation, Membership};
use crate::whiten::{check_whitening, decide_whitening, parse_wobj, witness_to_json, Polarity};

#[derive(Debug, Error)]
pub enum ApiError {
    /// Malformed or unsuitable input.
    #[error("{0}")]
    Input(String),
    /// A produced certificate failed its own check.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn term(src: &str) -> Result<Term, ApiError> {
    parse_term(src).map_err(|e| ApiError::Input(format!("`{src}`: {e}")))
}

pub fn step_kind_str(k: StepKind) -> &'static str {
    match k {
        StepKind::SilentHead => "silent-head",
        StepKind::InteractionHead => "interaction-head",
        StepKind::SilentInternal => "silent-internal",
        StepKind::InteractionInternal => "interaction-internal",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceStrategy {
    /// The head strategy, stopping at a head normal form.
    Head,
    /// Leftmost-outermost to full normal form.
    Full,
}

pub fn reduce(src: &str, strategy: ReduceStrategy, fuel: usize, trace: bool) -> Result<Value, ApiError> {
    let t = term(src)?;
    let mut steps: Vec<(Term, StepKind)> = Vec::new();
    let (result, normal, interactions, silents) = match strategy {
        ReduceStrategy::Head => match evaluate_head(&t, fuel) {
            EvalResult::Normal { hnf, interactions, silents, trace } => {
                steps = trace;
                (hnf, true, interactions, silents)
            }
            EvalResult::FuelExhausted { last, interactions } => (last, false, interactions, fuel - interactions),
        },
        ReduceStrategy::Full => {
            let mut cur = t.clone();
            let mut normal = false;
            for _ in 0..=fuel {
                let paths = redex_paths(&cur);
                if paths.is_empty() {
                    normal = true;
                    break;
                }
                if steps.len() == fuel {
                    break;
                }
                let (next, kind) =
                    reduce_anywhere(&cur, &paths[0], KindFilter::Any).map_err(|e| ApiError::Invariant(e.to_string()))?;
                steps.push((cur, kind));
                cur = next;
            }
            let interactions = steps.iter().filter(|(_, k)| k.is_interaction()).count();
            (cur, normal, interactions, steps.len() - interactions)
        }
    };
    let mut out = json!({
        "term": print_term(&t),
        "strategy": match strategy { ReduceStrategy::Head => "head", ReduceStrategy::Full => "full" },
        "fuel": fuel,
        "normal": normal,
        "result": print_term(&result),
        "interactions": interactions,
        "silents": silents,
    });
    if trace {
        out["trace"] = steps.iter().map(|(s, k)| json!({"term": print_term(s), "kind": step_kind_str(*k)})).collect();
    }
    Ok(out)
}

/// Typings within `bounds.types`, or the least index for one judgement.
pub fn typings(src: &str, judgement: Option<(&str, &str)>, bounds: &Bounds, derivations: bool) -> Result<Value, ApiError> {
    let t = term(src)?;
    if let Some((env, ty)) = judgement {
        let e = parse_env(env).map_err(|e| ApiError::Input(format!("environment: {e}")))?;
        let l = parse_type(ty).map_err(|e| ApiError::Input(format!("type: {e}")))?;
        return Ok(match min_derivation(&t, &e, &l, bounds.fuel) {
            Membership::Member { index, derivation } => {
                let d = derivation.ok_or_else(|| ApiError::Invariant("no derivation returned".into()))?;
                check_derivation(&d).map_err(|e| ApiError::Invariant(e.to_string()))?;
                let mut v = json!({"term": print_term(&t), "member": true, "index": index});
                if derivations {
                    v["derivation"] = print_derivation(&d).into();
                }
                v
            }
            Membership::NotMember => json!({"term": print_term(&t), "member": false}),
            Membership::Unknown => json!({"term": print_term(&t), "member": null, "reason": "fuel exhausted"}),
        });
    }
    let en = enumerate_typings(&t, bounds.types, bounds.fuel).map_err(|e| ApiError::Input(format!("`{src}`: {e}")))?;
    let list: Vec<Value> = en
        .typings
        .iter()
        .map(|(ty, d)| {
            let mut v = json!({"typing": print_typing(ty)});
            if derivations {
                v["derivation"] = print_derivation(d).into();
            }
            v
        })
        .collect();
    Ok(json!({
        "term": print_term(&t),
        "width": bounds.types.width,
        "depth": bounds.types.depth,
        "truncated": en.truncated,
        "typings": list,
    }))
}

pub fn whiten(polarity: Polarity, lhs: &str, rhs: &str) -> Result<Value, ApiError> {
    let parse = |s: &str| parse_wobj(s).map_err(|e| ApiError::Input(format!("`{s}`: {e}")));
    let (a, b) = (parse(lhs)?, parse(rhs)?);
    Ok(match decide_whitening(polarity, &a, &b) {
        Some(w) => {
            check_whitening(&w).map_err(|e| ApiError::Invariant(e.to_string()))?;
            json!({"polarity": polarity.to_string(), "related": true, "count": w.count, "witness": witness_to_json(&w)})
        }
        None => json!({"polarity": polarity.to_string(), "related": false}),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Pwc,
    BohmEta,
    CtxImp,
    All,
}

pub fn compare(lhs: &str, rhs: &str, rel: Relation, bounds: &Bounds) -> Result<Value, ApiError> {
    let (t, u) = (term(lhs)?, term(rhs)?);
    let mut out = json!({"lhs": print_term(&t), "rhs": print_term(&u)});
    match rel {
        Relation::Pwc => out["pwc"] = pwc_json(&pwc_check(&t, &u, bounds.types, bounds.fuel)),
        Relation::BohmEta => out["bohm"] = bohm_json(&bohm_leq_eta_red(&t, &u, bounds.depth, bounds.fuel)),
        Relation::CtxImp => out["ctx"] = ctx_json(&interaction_improvement_check(&t, &u, bounds.contexts, bounds.fuel)),
        Relation::All => {
            let r = crosscheck_main_theorem(&t, &u, bounds);
            for (k, v) in r.to_json().as_object().expect("object") {
                out[k] = v.clone();
            }
        }
    }
    Ok(out)
}

pub fn separate(lhs: &str, rhs: &str, depth: usize, fuel: usize) -> Result<Value, ApiError> {
    let (t, u) = (term(lhs)?, term(rhs)?);
    let s = bohm_out_separator(&t, &u, depth, fuel).map_err(|e| match e {
        SeparateError::PreconditionFailed(m) => ApiError::Input(m),
        SeparateError::Invariant(m) => ApiError::Invariant(m),
    })?;
    Ok(json!({
        "lhs": print_term(&t),
        "rhs": print_term(&u),
        "context": print_context(&s.context),
        "k": s.k,
        "lhs_interactions": s.lhs,
        "rhs_interactions": s.rhs,
        "plugged_lhs": print_term(&plug(&s.context, &paint(Color::Black, &t))),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_head_counts() {
        let v = reduce("(\\b x. x @b x) @w (\\b y. y)", ReduceStrategy::Head, 100, true).unwrap();
        assert_eq!(v["normal"], true);
        assert_eq!(v["interactions"], 1);
        assert_eq!(v["trace"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn full_reduction_goes_under_binders() {
        let v = reduce("\\x. (\\y. y) x", ReduceStrategy::Full, 100, false).unwrap();
        assert_eq!(v["result"], "\\b x. x");
        let h = reduce("\\x. (\\y. y) x", ReduceStrategy::Head, 100, false).unwrap();
        assert_eq!(h["silents"], 1);
    }

    #[test]
    fn bad_input_is_an_input_error() {
        assert!(matches!(reduce("\\x.", ReduceStrategy::Head, 10, false), Err(ApiError::Input(_))));
        assert!(matches!(separate("x", "y", 6, 100), Err(ApiError::Input(_))));
    }
}
