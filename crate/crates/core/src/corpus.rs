//! The bundled example corpus and the batch runner.

use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::preorder::{crosscheck_main_theorem, Bounds, CtxBound, Tag};
use crate::reduce::head_normalize;
use crate::syntax::{parse_context, parse_term, SyntaxError};
use crate::term::plug;
use crate::types::TypeBound;

pub const REPORT_SCHEMA: &str = "checkers-corpus-report/1";
pub const SEED_VAR: &str = "CHECKERS_SEED";

const BUILTIN: &str = include_str!("../data/corpus.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub bohm: Tag,
    pub pwc: Tag,
    pub ctx: Tag,
}

impl Expected {
    pub fn tags(&self) -> [Tag; 3] {
        [self.bohm, self.pwc, self.ctx]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub expected: Expected,
    pub provenance: String,
}

/// A term in a named context with its expected interaction count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextCount {
    pub name: String,
    pub context: String,
    pub term: String,
    pub interactions: usize,
    pub provenance: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    #[serde(default)]
    pub contexts: Vec<ContextCount>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus does not parse: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("entry `{entry}`: {source}")]
    Term { entry: String, source: SyntaxError },
}

impl Corpus {
    pub fn builtin() -> Corpus {
        Corpus::from_json(BUILTIN).expect("bundled corpus parses")
    }

    pub fn from_json(src: &str) -> Result<Corpus, CorpusError> {
        let c: Corpus = serde_json::from_str(src).map_err(|e| CorpusError::Parse(e.to_string()))?;
        let mut names: Vec<&str> = c.entries.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(CorpusError::Parse(format!("duplicate entry `{}`", w[0])));
        }
        for e in &c.entries {
            let t = e.expected.tags();
            if t.iter().any(|a| t.iter().any(|b| a.contradicts(*b))) {
                return Err(CorpusError::Parse(format!("entry `{}` expects contradictory verdicts", e.name)));
            }
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Corpus, CorpusError> {
        let src = std::fs::read_to_string(path).map_err(|e| CorpusError::Parse(format!("{}: {e}", path.display())))?;
        Corpus::from_json(&src)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub fuel: usize,
    pub depth: usize,
    pub types: TypeBound,
    pub contexts: CtxBound,
    /// Only shuffles the work order; the report does not depend on it.
    pub seed: u64,
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let b = Bounds::default();
        RunConfig {
            fuel: b.fuel,
            depth: b.depth,
            types: b.types,
            contexts: b.contexts,
            seed: 0,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()).min(8),
        }
    }
}

impl RunConfig {
    /// Apply the seed override from the environment, if set.
    pub fn with_env(mut self) -> Result<Self, CorpusError> {
        if let Ok(s) = std::env::var(SEED_VAR) {
            self.seed = s.trim().parse().map_err(|_| CorpusError::Config(format!("{SEED_VAR}={s} is not an integer")))?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let checks = [
            ("fuel", self.fuel),
            ("depth", self.depth),
            ("type width", self.types.width),
            ("type depth", self.types.depth),
            ("context size", self.contexts.max_size),
            ("workers", self.workers),
        ];
        match checks.iter().find(|(_, v)| *v == 0) {
            Some((what, _)) => Err(CorpusError::Config(format!("{what} must be positive"))),
            None => Ok(()),
        }
    }

    pub fn bounds(&self) -> Bounds {
        Bounds { fuel: self.fuel, depth: self.depth, types: self.types, contexts: self.contexts }
    }

    fn to_json(self) -> Value {
        json!({
            "fuel": self.fuel,
            "depth": self.depth,
            "type_width": self.types.width,
            "type_depth": self.types.depth,
            "type_limit": self.types.limit,
            "context_size": self.contexts.max_size,
            "context_args": self.contexts.max_args,
            "seed": self.seed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryResult {
    pub name: String,
    pub expected: Expected,
    pub got: [Tag; 3],
    /// Relations whose verdict differs from the expected one.
    pub mismatches: Vec<&'static str>,
    pub disagreement: bool,
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextResult {
    pub name: String,
    pub expected: usize,
    pub got: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub config: RunConfig,
    pub entries: Vec<EntryResult>,
    pub contexts: Vec<ContextResult>,
}

impl Report {
    pub fn mismatches(&self) -> usize {
        self.entries.iter().filter(|e| !e.mismatches.is_empty()).count()
            + self.contexts.iter().filter(|c| c.got != Some(c.expected)).count()
    }

    pub fn disagreements(&self) -> usize {
        self.entries.iter().filter(|e| e.disagreement).count()
    }

    pub fn ok(&self) -> bool {
        self.mismatches() == 0 && self.disagreements() == 0
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "expected": e.expected,
                    "got": {"bohm": e.got[0], "pwc": e.got[1], "ctx": e.got[2]},
                    "mismatches": e.mismatches,
                    "disagreement": e.disagreement,
                    "details": e.details,
                })
            })
            .collect();
        let contexts: Vec<Value> = self
            .contexts
            .iter()
            .map(|c| json!({"name": c.name, "expected": c.expected, "got": c.got, "ok": c.got == Some(c.expected)}))
            .collect();
        json!({
            "schema": REPORT_SCHEMA,
            "config": self.config.to_json(),
            "entries": entries,
            "contexts": contexts,
            "summary": {
                "entries": self.entries.len(),
                "contexts": self.contexts.len(),
                "mismatches": self.mismatches(),
                "disagreements": self.disagreements(),
                "ok": self.ok(),
            }
        })
    }
}

fn run_entry(e: &CorpusEntry, bounds: &Bounds) -> Result<EntryResult, CorpusError> {
    let parse = |s: &str| parse_term(s).map_err(|source| CorpusError::Term { entry: e.name.clone(), source });
    let (t, u) = (parse(&e.lhs)?, parse(&e.rhs)?);
    let r = crosscheck_main_theorem(&t, &u, bounds);
    let got = r.tags();
    let mismatches = ["bohm", "pwc", "ctx"]
        .into_iter()
        .zip(e.expected.tags().into_iter().zip(got))
        .filter(|(_, (want, have))| want != have)
        .map(|(rel, _)| rel)
        .collect();
    Ok(EntryResult {
        name: e.name.clone(),
        expected: e.expected,
        got,
        mismatches,
        disagreement: r.disagreement(),
        details: r.to_json(),
    })
}

fn run_context(c: &ContextCount, fuel: usize) -> Result<ContextResult, CorpusError> {
    let err = |source| CorpusError::Term { entry: c.name.clone(), source };
    let ctx = parse_context(&c.context).map_err(err)?;
    let t = parse_term(&c.term).map_err(err)?;
    Ok(ContextResult {
        name: c.name.clone(),
        expected: c.interactions,
        got: head_normalize(&plug(&ctx, &t), fuel).map(|(_, k)| k),
    })
}

/// Cross-check every entry in parallel; results are ordered by name.
pub fn run_corpus(corpus: &Corpus, config: &RunConfig) -> Result<Report, CorpusError> {
    config.validate()?;
    let bounds = config.bounds();
    let mut order: Vec<usize> = (0..corpus.entries.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(config.seed));

    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(order.len()));
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(&j) = order.get(i) else { break };
        let r = run_entry(&corpus.entries[j], &bounds);
        results.lock().unwrap().push(r);
    };
    if config.workers == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..config.workers.min(order.len().max(1)) {
                s.spawn(worker);
            }
        });
    }
    let mut entries = results.into_inner().unwrap().into_iter().collect::<Result<Vec<_>, _>>()?;
    entries.sort_by(|a, b| a.name.cmp(&b.name));

    let mut contexts = corpus.contexts.iter().map(|c| run_context(c, config.fuel)).collect::<Result<Vec<_>, _>>()?;
    contexts.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(Report { config: *config, entries, contexts })
}
