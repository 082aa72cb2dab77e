use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use checkers::api::{self, ApiError, ReduceStrategy, Relation};
use checkers::corpus::{run_corpus, Corpus, CorpusError, RunConfig};
use checkers::preorder::{Bounds, CtxBound};
use checkers::syntax::{parse_context, parse_term, print_context_with, print_term_with, Notation, SyntaxError};
use checkers::types::TypeBound;
use checkers::whiten::Polarity;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

const EXIT_INPUT: u8 = 1;
const EXIT_INVARIANT: u8 = 70;

/// Workbench for the checkers calculus: colored λ-terms, interaction
/// counting, multi types, whitening and program preorders.
#[derive(Parser)]
#[command(name = "checkers", version)]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BoundArgs {
    /// Step budget for every evaluation.
    #[arg(long, default_value_t = checkers::DEFAULT_FUEL)]
    fuel: usize,
    /// Böhm tree depth.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Largest multiset in enumerated types.
    #[arg(long, default_value_t = 2)]
    width: usize,
    /// Deepest enumerated type (an atom has depth 1).
    #[arg(long, default_value_t = 3)]
    type_depth: usize,
    /// Cap on candidate typings per subterm.
    #[arg(long, default_value_t = 200_000)]
    limit: usize,
    /// Largest total weight of a searched context.
    #[arg(long, default_value_t = 8)]
    ctx_size: usize,
    /// Most arguments in a searched context.
    #[arg(long, default_value_t = 3)]
    ctx_args: usize,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        Bounds {
            fuel: self.fuel,
            depth: self.depth,
            types: TypeBound { limit: self.limit, ..TypeBound::new(self.width, self.type_depth) },
            contexts: CtxBound { max_size: self.ctx_size, max_args: self.ctx_args },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Head,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelArg {
    Pwc,
    BohmEta,
    CtxImp,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolarityArg {
    #[value(name = "+", alias = "positive")]
    Positive,
    #[value(name = "-", alias = "negative")]
    Negative,
}

#[derive(Clone, Copy, ValueEnum)]
enum NotationArg {
    Ascii,
    Unicode,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a term and count interaction and silent steps.
    Reduce {
        term: String,
        #[arg(long, value_enum, default_value = "head")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = checkers::DEFAULT_FUEL)]
        fuel: usize,
        /// Include every step with its kind.
        #[arg(long)]
        trace: bool,
    },
    /// Enumerate the typings of a term, or find the least index of one judgement.
    Type {
        term: String,
        /// Environment of the judgement, e.g. `x : [[] ->w X]`.
        #[arg(long, requires = "ty")]
        env: Option<String>,
        /// Type of the judgement, e.g. `[] ->b X`.
        #[arg(long = "type", requires = "env")]
        ty: Option<String>,
        /// Print derivations too.
        #[arg(long)]
        derivations: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Decide a polarized whitening `LHS ⊑ RHS`; objects are types, multi types,
    /// environments, or `env ; type` pairs.
    Whiten {
        lhs: String,
        rhs: String,
        #[arg(long, value_enum, default_value = "+")]
        polarity: PolarityArg,
    },
    /// Compare two plain terms under the observational preorders.
    Compare {
        lhs: String,
        rhs: String,
        #[arg(long, value_enum, default_value = "all")]
        rel: RelArg,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Build a white context on which the η-expanded right term costs more.
    Separate {
        lhs: String,
        rhs: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = checkers::DEFAULT_FUEL)]
        fuel: usize,
    },
    /// Cross-check a corpus of term pairs against expected verdicts.
    Corpus {
        /// Corpus file; the bundled corpus by default.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Seed for the work order; CHECKERS_SEED overrides it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        workers: Option<usize>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Parse a term or context and print it back.
    Fmt {
        source: String,
        #[arg(long, value_enum, default_value = "ascii")]
        notation: NotationArg,
    },
}

enum Failure {
    Input(String),
    Invariant(String),
}

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Self {
        match e {
            ApiError::Input(m) => Failure::Input(m),
            ApiError::Invariant(m) => Failure::Invariant(m),
        }
    }
}

impl From<CorpusError> for Failure {
    fn from(e: CorpusError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn verdict_line(rel: &str, v: &Value) -> String {
    let mut detail = v.clone();
    let verdict =
        detail.as_object_mut().and_then(|o| o.remove("verdict")).and_then(|s| s.as_str().map(str::to_string)).unwrap_or_default();
    format!("{rel:<9} {verdict:<8} {detail}")
}

fn show(json: bool, v: &Value, text: impl FnOnce(&Value) -> String) {
    let out = if json { serde_json::to_string_pretty(v).expect("json") } else { text(v) };
    // A closed pipe (`checkers ... | head`) is not an error.
    let _ = writeln!(std::io::stdout().lock(), "{out}");
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Reduce { term, strategy, fuel, trace } => {
            let s = match strategy {
                StrategyArg::Head => ReduceStrategy::Head,
                StrategyArg::Full => ReduceStrategy::Full,
            };
            let v = api::reduce(&term, s, fuel, trace)?;
            show(json, &v, |v| {
                let mut out = String::new();
                for step in v["trace"].as_array().into_iter().flatten() {
                    out += &format!("{:<22} {}\n", step["kind"].as_str().unwrap_or(""), step["term"].as_str().unwrap_or(""));
                }
                let status = if v["normal"] == true { "normal form" } else { "fuel exhausted at" };
                out += &format!(
                    "{status}: {}\ninteractions: {}  silent: {}",
                    v["result"].as_str().unwrap_or(""),
                    v["interactions"],
                    v["silents"]
                );
                out
            });
        }
        Command::Type { term, env, ty, derivations, bounds } => {
            let judgement = env.as_deref().zip(ty.as_deref());
            let v = api::typings(&term, judgement, &bounds.bounds(), derivations)?;
            show(json, &v, |v| {
                let mut out = String::new();
                if let Some(list) = v["typings"].as_array() {
                    for t in list {
                        out += &format!("{}\n", t["typing"].as_str().unwrap_or(""));
                        if let Some(d) = t["derivation"].as_str() {
                            out += &format!("{d}\n");
                        }
                    }
                    out += &format!("{} typings{}", list.len(), if v["truncated"] == true { " (truncated)" } else { "" });
                } else {
                    out += &match &v["member"] {
                        Value::Bool(true) => format!("derivable with least index {}", v["index"]),
                        Value::Bool(false) => "not derivable".to_string(),
                        _ => "unknown: fuel exhausted".to_string(),
                    };
                    if let Some(d) = v["derivation"].as_str() {
                        out += &format!("\n{d}");
                    }
                }
                out
            });
        }
        Command::Whiten { lhs, rhs, polarity } => {
            let p = match polarity {
                PolarityArg::Positive => Polarity::Positive,
                PolarityArg::Negative => Polarity::Negative,
            };
            let v = api::whiten(p, &lhs, &rhs)?;
            show(json, &v, |v| match v["count"].as_u64() {
                Some(k) => format!("related at {} with {k} whitened arrow(s)", v["polarity"].as_str().unwrap_or("")),
                None => format!("not related at {}", v["polarity"].as_str().unwrap_or("")),
            });
        }
        Command::Compare { lhs, rhs, rel, bounds } => {
            let r = match rel {
                RelArg::Pwc => Relation::Pwc,
                RelArg::BohmEta => Relation::BohmEta,
                RelArg::CtxImp => Relation::CtxImp,
                RelArg::All => Relation::All,
            };
            let v = api::compare(&lhs, &rhs, r, &bounds.bounds())?;
            show(json, &v, |v| {
                let mut lines = Vec::new();
                for (key, label) in [("bohm", "bohm-eta"), ("pwc", "pwc"), ("ctx", "ctx-imp")] {
                    if let Some(x) = v.get(key) {
                        lines.push(verdict_line(label, x));
                    }
                }
                if v["disagreement"] == true {
                    lines.push("warning: the deciders disagree".into());
                }
                lines.join("\n")
            });
        }
        Command::Separate { lhs, rhs, depth, fuel } => {
            let v = api::separate(&lhs, &rhs, depth, fuel)?;
            show(json, &v, |v| {
                format!(
                    "context: {}\ninteractions: {} vs {}",
                    v["context"].as_str().unwrap_or(""),
                    v["lhs_interactions"],
                    v["rhs_interactions"]
                )
            });
        }
        Command::Corpus { file, seed, workers, bounds } => {
            let corpus = match file {
                Some(p) => Corpus::load(&p)?,
                None => Corpus::builtin(),
            };
            let b = bounds.bounds();
            let mut config =
                RunConfig { fuel: b.fuel, depth: b.depth, types: b.types, contexts: b.contexts, seed, ..RunConfig::default() };
            if let Some(w) = workers {
                config.workers = w;
            }
            let report = run_corpus(&corpus, &config.with_env()?)?;
            show(json, &report.to_json(), |_| {
                let mut out = String::new();
                for e in &report.entries {
                    let tags: Vec<_> = e.got.iter().map(|t| t.as_str()).collect();
                    let status = if !e.mismatches.is_empty() || e.disagreement { "MISMATCH" } else { "ok" };
                    out += &format!("{status:<8} {:<32} {}\n", e.name, tags.join(" "));
                    if !e.mismatches.is_empty() {
                        out += &format!("         expected {:?}, differs in {}\n", e.expected.tags(), e.mismatches.join(", "));
                    }
                }
                for c in &report.contexts {
                    let status = if c.got == Some(c.expected) { "ok" } else { "MISMATCH" };
                    let got = c.got.map_or("no hnf within fuel,".to_string(), |k| format!("{k} interactions,"));
                    out += &format!("{status:<8} {:<32} {got} expected {}\n", c.name, c.expected);
                }
                out += &format!("{} mismatches, {} disagreements", report.mismatches(), report.disagreements());
                out
            });
            return Ok(if report.ok() { 0 } else { EXIT_INPUT });
        }
        Command::Fmt { source, notation } => {
            let n = match notation {
                NotationArg::Ascii => Notation::Ascii,
                NotationArg::Unicode => Notation::Unicode,
                NotationArg::Plain => Notation::Plain,
            };
            let printed = match parse_term(&source) {
                Ok(t) => print_term_with(&t, n),
                Err(SyntaxError::UnboundHole { .. }) => {
                    let c = parse_context(&source).map_err(|e| Failure::Input(e.to_string()))?;
                    print_context_with(&c, n)
                }
                Err(e) => return Err(Failure::Input(e.to_string())),
            };
            show(json, &Value::String(printed), |v| v.as_str().unwrap_or("").to_string());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}
