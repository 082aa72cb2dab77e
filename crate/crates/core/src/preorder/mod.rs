//! Bounded deciders for the observational preorders, the Böhm-out
//! separator, and a cross-check running the three deciders side by side.

mod bohm;
mod ctx;
mod pwc;
mod separate;

use serde::Serialize;
use serde_json::{json, Value};

use crate::syntax::print_term;
use crate::term::Term;
use crate::types::TypeBound;

pub use bohm::{bohm_approximant, bohm_leq_eta_red, BohmApproximant, BohmFailure, BohmTrace, Clause, FailureKind};
pub use ctx::{interaction_improvement_check, interaction_improvement_check_colored, CtxBound, CtxHolds, Separation};
pub use pwc::{pwc_check, pwc_check_colored, PwcFailure, PwcHolds, PwcMatch};
pub use separate::{bohm_out_separator, SeparateError, Separator};

pub(crate) use bohm::verdict_json as bohm_json;
pub(crate) use ctx::verdict_json as ctx_json;
pub(crate) use pwc::verdict_json as pwc_json;

/// A three-valued answer carrying evidence either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<H, F> {
    Holds(H),
    Fails(F),
    Unknown(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Holds,
    Fails,
    Unknown,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Holds => "holds",
            Tag::Fails => "fails",
            Tag::Unknown => "unknown",
        }
    }

    /// Two definite verdicts that disagree.
    pub fn contradicts(self, other: Tag) -> bool {
        matches!((self, other), (Tag::Holds, Tag::Fails) | (Tag::Fails, Tag::Holds))
    }
}

impl std::fmt::Display for Tag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl<H, F> Verdict<H, F> {
    pub fn tag(&self) -> Tag {
        match self {
            Verdict::Holds(_) => Tag::Holds,
            Verdict::Fails(_) => Tag::Fails,
            Verdict::Unknown(_) => Tag::Unknown,
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }
}

/// Limits shared by the three deciders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub fuel: usize,
    pub depth: usize,
    pub types: TypeBound,
    pub contexts: CtxBound,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { fuel: crate::reduce::DEFAULT_FUEL, depth: 6, types: TypeBound::default(), contexts: CtxBound::default() }
    }
}

#[derive(Clone, Debug)]
pub struct CrossReport {
    pub bohm: Verdict<BohmTrace, BohmFailure>,
    pub pwc: Verdict<PwcHolds, PwcFailure>,
    pub ctx: Verdict<CtxHolds, Separation>,
}

impl CrossReport {
    pub fn tags(&self) -> [Tag; 3] {
        [self.bohm.tag(), self.pwc.tag(), self.ctx.tag()]
    }

    /// Some pair of deciders return opposite definite verdicts.
    pub fn disagreement(&self) -> bool {
        let t = self.tags();
        (0..3).any(|i| (0..3).any(|j| t[i].contradicts(t[j])))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bohm": bohm_json(&self.bohm),
            "pwc": pwc_json(&self.pwc),
            "ctx": ctx_json(&self.ctx),
            "disagreement": self.disagreement(),
        })
    }
}

/// Run the Böhm, whiter-cheaper and context deciders on plain terms.
pub fn crosscheck_main_theorem(t: &Term, u: &Term, b: &Bounds) -> CrossReport {
    CrossReport {
        bohm: bohm_leq_eta_red(t, u, b.depth, b.fuel),
        pwc: pwc_check(t, u, b.types, b.fuel),
        ctx: interaction_improvement_check(t, u, b.contexts, b.fuel),
    }
}

pub(crate) fn unknown_json(reason: &str) -> Value {
    json!({"verdict": "unknown", "reason": reason})
}

pub(crate) fn term_str(t: &Term) -> String {
    print_term(t)
}
