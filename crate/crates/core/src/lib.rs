//! A workbench for the checkers calculus: a λ-calculus whose constructors are
//! colored white or black, where β-steps between different colors count as
//! interactions.
//!
//! The crate covers terms and contexts ([`term`]), concrete syntax
//! ([`syntax`]), the head strategy with interaction counting ([`reduce`]),
//! the colored multi type system ([`types`]), whitening of types and the
//! repainting of derivations ([`whiten`]), and the observational preorders
//! with their deciders and the Böhm-out separator ([`preorder`]).

pub mod api;
pub mod combinators;
pub mod corpus;
pub mod gen;
pub mod preorder;
pub mod reduce;
pub mod syntax;
pub mod term;
pub mod types;
pub mod whiten;

pub use reduce::{evaluate_head, head_step, EvalResult, StepKind, DEFAULT_FUEL};
pub use syntax::{parse_context, parse_term, parse_type, print_term, SyntaxError};
pub use term::{alpha_eq, paint, plug, wash, Color, Context, Name, Term};
