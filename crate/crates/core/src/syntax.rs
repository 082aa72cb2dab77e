//! Concrete syntax for terms, contexts, types and environments, plus the JSON
//! encoding of the same values.
//!
//! Terms: `\b x. t`, `\w x y. t`, `λ• x. t`, `t @b u`, `t @w u`, `t @∘ u`.
//! Juxtaposition and an uncolored `\x. t` are black, so plain terms parse
//! as wash-normal terms. `[]` is the hole of a context.
//!
//! Types: atoms are identifiers, `[L1, L2] ->b L`, `[] ->w X`, `M →• L`.
//! Environments: `x : [X], y : [[] ->w X]`, with `{}` for the empty one.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::term::{name, Color, Context, Name, Term};
use crate::types::{Derivation, LinearType, MultiType, Rule, Ty, TypeEnv, Typing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error at {}..{}: expected {expected}", span.start, span.end)]
    Parse { span: SourceSpan, expected: String },
    #[error("hole `[]` in a term at {}..{}", span.start, span.end)]
    UnboundHole { span: SourceSpan },
    #[error("a context needs exactly one hole, found {found}")]
    HoleCount { found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Semi,
    At(Color),
    Arrow(Color),
    Glyph(Color),
    Ident(String),
    Num(usize),
}

fn color_char(c: char) -> Option<Color> {
    match c {
        'b' | '•' => Some(Color::Black),
        'w' | '∘' => Some(Color::White),
        _ => None,
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let end_of = |i: usize| chars.get(i).map_or(src.len(), |(p, _)| *p);
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let single = |t: Tok| (t, SourceSpan { start, end: end_of(i + 1) });
        match c {
            c if c.is_whitespace() => i += 1,
            '\\' | 'λ' => {
                out.push(single(Tok::Lambda));
                i += 1;
            }
            '•' | '∘' => {
                let col = color_char(c).expect("glyph");
                if chars.get(i + 1).map(|(_, d)| *d) == Some('@') {
                    out.push((Tok::At(col), SourceSpan { start, end: end_of(i + 2) }));
                    i += 2;
                } else {
                    out.push(single(Tok::Glyph(col)));
                    i += 1;
                }
            }
            '.' => {
                out.push(single(Tok::Dot));
                i += 1;
            }
            '(' => {
                out.push(single(Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push(single(Tok::RParen));
                i += 1;
            }
            '[' => {
                out.push(single(Tok::LBrack));
                i += 1;
            }
            ']' => {
                out.push(single(Tok::RBrack));
                i += 1;
            }
            '{' => {
                out.push(single(Tok::LBrace));
                i += 1;
            }
            '}' => {
                out.push(single(Tok::RBrace));
                i += 1;
            }
            ',' => {
                out.push(single(Tok::Comma));
                i += 1;
            }
            ':' => {
                out.push(single(Tok::Colon));
                i += 1;
            }
            ';' => {
                out.push(single(Tok::Semi));
                i += 1;
            }
            '@' | '→' => {
                let col = chars.get(i + 1).and_then(|(_, d)| color_char(*d));
                let Some(col) = col else {
                    return Err(SyntaxError::Parse {
                        span: SourceSpan { start, end: end_of(i + 1) },
                        expected: "a color `b`, `w`, `•` or `∘`".into(),
                    });
                };
                let tok = if c == '@' { Tok::At(col) } else { Tok::Arrow(col) };
                out.push((tok, SourceSpan { start, end: end_of(i + 2) }));
                i += 2;
            }
            '-' => {
                let ok = chars.get(i + 1).map(|(_, d)| *d) == Some('>');
                let col = chars.get(i + 2).and_then(|(_, d)| color_char(*d));
                match (ok, col) {
                    (true, Some(col)) => {
                        out.push((Tok::Arrow(col), SourceSpan { start, end: end_of(i + 3) }));
                        i += 3;
                    }
                    _ => {
                        return Err(SyntaxError::Parse {
                            span: SourceSpan { start, end: end_of(i + 1) },
                            expected: "`->b` or `->w`".into(),
                        })
                    }
                }
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let text = &src[start..end_of(j)];
                if j < chars.len() && is_ident_char(chars[j].1) {
                    return Err(SyntaxError::Parse {
                        span: SourceSpan { start, end: end_of(j + 1) },
                        expected: "an identifier starting with a letter".into(),
                    });
                }
                out.push((Tok::Num(text.parse().unwrap_or(usize::MAX)), SourceSpan { start, end: end_of(j) }));
                i = j;
            }
            c if is_ident_char(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j].1) {
                    j += 1;
                }
                out.push((Tok::Ident(src[start..end_of(j)].to_string()), SourceSpan { start, end: end_of(j) }));
                i = j;
            }
            _ => {
                return Err(SyntaxError::Parse {
                    span: SourceSpan { start, end: end_of(i + 1) },
                    expected: format!("a token, found `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

/// A term that may contain holes.
#[derive(Clone, Debug)]
enum Pre {
    Var(Name),
    Abs(Color, Name, Box<Pre>),
    App(Color, Box<Pre>, Box<Pre>),
    Hole(SourceSpan),
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser { toks: lex(src)?, pos: 0, len: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks.get(self.pos).map(|(_, s)| *s).unwrap_or(SourceSpan { start: self.len, end: self.len })
    }

    fn err<T>(&self, expected: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse { span: self.span(), expected: expected.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(what)
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos < self.toks.len() {
            self.err("end of input")
        } else {
            Ok(())
        }
    }

    fn term(&mut self) -> Result<Pre, SyntaxError> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let mut acc = self.atom()?;
        loop {
            let color = match self.peek() {
                Some(Tok::At(c)) => {
                    let c = *c;
                    self.pos += 1;
                    c
                }
                Some(Tok::Ident(_) | Tok::LParen | Tok::LBrack | Tok::Lambda) => Color::Black,
                _ => return Ok(acc),
            };
            let arg = if self.peek() == Some(&Tok::Lambda) { self.lambda()? } else { self.atom()? };
            acc = Pre::App(color, Box::new(acc), Box::new(arg));
        }
    }

    fn lambda(&mut self) -> Result<Pre, SyntaxError> {
        self.expect(Tok::Lambda, "`\\`")?;
        let color = match (self.peek(), self.peek_at(1)) {
            (Some(Tok::Glyph(c)), _) => {
                let c = *c;
                self.pos += 1;
                c
            }
            (Some(Tok::Ident(s)), Some(Tok::Ident(_))) if s == "b" || s == "w" => {
                let c = if s == "b" { Color::Black } else { Color::White };
                self.pos += 1;
                c
            }
            _ => Color::Black,
        };
        let mut binders = Vec::new();
        while let Some(Tok::Ident(x)) = self.peek() {
            binders.push(name(x));
            self.pos += 1;
        }
        if binders.is_empty() {
            return self.err("a binder");
        }
        self.expect(Tok::Dot, "`.` after the binders")?;
        let body = self.term()?;
        Ok(binders.into_iter().rev().fold(body, |acc, x| Pre::Abs(color, x, Box::new(acc))))
    }

    fn atom(&mut self) -> Result<Pre, SyntaxError> {
        let span = self.span();
        match self.bump() {
            Some(Tok::Ident(x)) => Ok(Pre::Var(name(&x))),
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::LBrack) => {
                let end = self.span();
                self.expect(Tok::RBrack, "`]` closing the hole")?;
                Ok(Pre::Hole(SourceSpan { start: span.start, end: end.end }))
            }
            _ => {
                self.pos -= 1;
                self.err("a variable, `(` or `[]`")
            }
        }
    }

    fn linear(&mut self) -> Result<LinearType, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.bump() {
                Some(Tok::Ident(x)) => Ok(LinearType::Atom(name(&x))),
                _ => unreachable!(),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let l = self.linear()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(l)
            }
            Some(Tok::LBrack) => {
                let m = self.multi()?;
                let c = match self.bump() {
                    Some(Tok::Arrow(c)) => c,
                    _ => {
                        self.pos -= 1;
                        return self.err("`->b` or `->w` after a multi type");
                    }
                };
                let l = self.linear()?;
                Ok(LinearType::arrow(m, c, l))
            }
            _ => self.err("a linear type"),
        }
    }

    fn multi(&mut self) -> Result<MultiType, SyntaxError> {
        self.expect(Tok::LBrack, "`[`")?;
        let mut elems = Vec::new();
        if self.peek() != Some(&Tok::RBrack) {
            elems.push(self.linear()?);
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                elems.push(self.linear()?);
            }
        }
        self.expect(Tok::RBrack, "`,` or `]`")?;
        Ok(MultiType::new(elems))
    }

    fn env(&mut self) -> Result<TypeEnv, SyntaxError> {
        if self.peek() == Some(&Tok::LBrace) {
            self.pos += 1;
            let e = if self.peek() == Some(&Tok::RBrace) { TypeEnv::empty() } else { self.env_entries()? };
            self.expect(Tok::RBrace, "`}`")?;
            return Ok(e);
        }
        self.env_entries()
    }

    fn env_entries(&mut self) -> Result<TypeEnv, SyntaxError> {
        let mut entries = Vec::new();
        loop {
            let x = match self.bump() {
                Some(Tok::Ident(x)) => name(&x),
                _ => {
                    self.pos -= 1;
                    return self.err("a variable in the environment");
                }
            };
            self.expect(Tok::Colon, "`:`")?;
            entries.push((x, self.multi()?));
            if self.peek() != Some(&Tok::Comma) {
                break;
            }
            self.pos += 1;
        }
        Ok(entries.into_iter().collect())
    }
}

fn pre_holes(p: &Pre, out: &mut Vec<SourceSpan>) {
    match p {
        Pre::Var(_) => {}
        Pre::Hole(s) => out.push(*s),
        Pre::Abs(_, _, b) => pre_holes(b, out),
        Pre::App(_, f, a) => {
            pre_holes(f, out);
            pre_holes(a, out);
        }
    }
}

fn pre_to_term(p: &Pre) -> Result<Term, SyntaxError> {
    Ok(match p {
        Pre::Var(x) => Term::Var(x.clone()),
        Pre::Hole(span) => return Err(SyntaxError::UnboundHole { span: *span }),
        Pre::Abs(c, x, b) => Term::Abs(*c, x.clone(), Arc::new(pre_to_term(b)?)),
        Pre::App(c, f, a) => Term::App(*c, Arc::new(pre_to_term(f)?), Arc::new(pre_to_term(a)?)),
    })
}

fn has_hole(p: &Pre) -> bool {
    let mut v = Vec::new();
    pre_holes(p, &mut v);
    !v.is_empty()
}

fn pre_to_context(p: &Pre) -> Result<Context, SyntaxError> {
    Ok(match p {
        Pre::Hole(_) => Context::Hole,
        Pre::Abs(c, x, b) => Context::Abs(*c, x.clone(), Box::new(pre_to_context(b)?)),
        Pre::App(c, f, a) if has_hole(f) => Context::AppLeft(*c, Box::new(pre_to_context(f)?), pre_to_term(a)?),
        Pre::App(c, f, a) => Context::AppRight(*c, pre_to_term(f)?, Box::new(pre_to_context(a)?)),
        Pre::Var(_) => return Err(SyntaxError::HoleCount { found: 0 }),
    })
}

pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(src)?;
    let pre = p.term()?;
    p.finish()?;
    pre_to_term(&pre)
}

pub fn parse_context(src: &str) -> Result<Context, SyntaxError> {
    let mut p = Parser::new(src)?;
    let pre = p.term()?;
    p.finish()?;
    let mut holes = Vec::new();
    pre_holes(&pre, &mut holes);
    if holes.len() != 1 {
        return Err(SyntaxError::HoleCount { found: holes.len() });
    }
    pre_to_context(&pre)
}

pub fn parse_type(src: &str) -> Result<LinearType, SyntaxError> {
    let mut p = Parser::new(src)?;
    let l = p.linear()?;
    p.finish()?;
    Ok(l)
}

pub fn parse_multi(src: &str) -> Result<MultiType, SyntaxError> {
    let mut p = Parser::new(src)?;
    let m = p.multi()?;
    p.finish()?;
    Ok(m)
}

pub fn parse_env(src: &str) -> Result<TypeEnv, SyntaxError> {
    if src.trim().is_empty() {
        return Ok(TypeEnv::empty());
    }
    let mut p = Parser::new(src)?;
    let e = p.env()?;
    p.finish()?;
    Ok(e)
}

/// `env ; L`, the left-hand side of a judgement with its type.
pub fn parse_pair(src: &str) -> Result<(TypeEnv, LinearType), SyntaxError> {
    let mut p = Parser::new(src)?;
    let env = if p.peek() == Some(&Tok::Semi) { TypeEnv::empty() } else { p.env()? };
    p.expect(Tok::Semi, "`;` between environment and type")?;
    let l = p.linear()?;
    p.finish()?;
    Ok((env, l))
}

/// `env ; L ; k`.
pub fn parse_typing(src: &str) -> Result<Typing, SyntaxError> {
    let mut p = Parser::new(src)?;
    let env = if p.peek() == Some(&Tok::Semi) { TypeEnv::empty() } else { p.env()? };
    p.expect(Tok::Semi, "`;` between environment and type")?;
    let ty = p.linear()?;
    p.expect(Tok::Semi, "`;` before the index")?;
    let index = match p.bump() {
        Some(Tok::Num(k)) => k,
        _ => {
            p.pos -= 1;
            return p.err("a natural number index");
        }
    };
    p.finish()?;
    Ok(Typing { env, ty, index })
}

/// Output notation: ASCII (round-trips), Unicode, or plain (colors dropped).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notation {
    Ascii,
    Unicode,
    Plain,
}

fn write_pre(p: &PreRef<'_>, n: Notation, out: &mut String) {
    match p {
        PreRef::Var(x) => out.push_str(x),
        PreRef::Hole => out.push_str("[]"),
        PreRef::Abs(c, x, b) => {
            match n {
                Notation::Ascii => {
                    out.push('\\');
                    out.push(c.ascii());
                    out.push(' ');
                }
                Notation::Unicode => {
                    out.push('λ');
                    out.push(c.glyph());
                }
                Notation::Plain => out.push('\\'),
            }
            out.push_str(x);
            out.push_str(". ");
            write_pre(b, n, out);
        }
        PreRef::App(c, f, a) => {
            let f_paren = matches!(**f, PreRef::Abs(..));
            let a_paren = matches!(**a, PreRef::Abs(..) | PreRef::App(..));
            wrap(f, f_paren, n, out);
            match n {
                Notation::Ascii => {
                    out.push_str(" @");
                    out.push(c.ascii());
                    out.push(' ');
                }
                Notation::Unicode => {
                    out.push(' ');
                    out.push(c.glyph());
                    out.push_str("@ ");
                }
                Notation::Plain => out.push(' '),
            }
            wrap(a, a_paren, n, out);
        }
    }
}

fn wrap(p: &PreRef<'_>, paren: bool, n: Notation, out: &mut String) {
    if paren {
        out.push('(');
    }
    write_pre(p, n, out);
    if paren {
        out.push(')');
    }
}

enum PreRef<'a> {
    Var(&'a str),
    Hole,
    Abs(Color, &'a str, Box<PreRef<'a>>),
    App(Color, Box<PreRef<'a>>, Box<PreRef<'a>>),
}

fn term_ref(t: &Term) -> PreRef<'_> {
    match t {
        Term::Var(x) => PreRef::Var(x),
        Term::Abs(c, x, b) => PreRef::Abs(*c, x, Box::new(term_ref(b))),
        Term::App(c, f, a) => PreRef::App(*c, Box::new(term_ref(f)), Box::new(term_ref(a))),
    }
}

fn context_ref(ctx: &Context) -> PreRef<'_> {
    match ctx {
        Context::Hole => PreRef::Hole,
        Context::Abs(c, x, b) => PreRef::Abs(*c, x, Box::new(context_ref(b))),
        Context::AppLeft(c, b, a) => PreRef::App(*c, Box::new(context_ref(b)), Box::new(term_ref(a))),
        Context::AppRight(c, f, b) => PreRef::App(*c, Box::new(term_ref(f)), Box::new(context_ref(b))),
    }
}

pub fn print_term_with(t: &Term, n: Notation) -> String {
    let mut s = String::new();
    write_pre(&term_ref(t), n, &mut s);
    s
}

pub fn print_term(t: &Term) -> String {
    print_term_with(t, Notation::Ascii)
}

/// Colorblind rendering; parses back to the washed term.
pub fn print_plain(t: &Term) -> String {
    print_term_with(t, Notation::Plain)
}

pub fn print_context(ctx: &Context) -> String {
    print_context_with(ctx, Notation::Ascii)
}

pub fn print_context_with(ctx: &Context, n: Notation) -> String {
    let mut s = String::new();
    write_pre(&context_ref(ctx), n, &mut s);
    s
}

pub fn print_type(l: &LinearType) -> String {
    match l {
        LinearType::Atom(x) => x.to_string(),
        LinearType::Arrow(m, c, r) => format!("{} ->{} {}", print_multi(m), c.ascii(), print_type(r)),
    }
}

pub fn print_multi(m: &MultiType) -> String {
    let parts: Vec<String> = m.elems().iter().map(print_type).collect();
    format!("[{}]", parts.join(", "))
}

pub fn print_env(e: &TypeEnv) -> String {
    if e.is_empty() {
        return "{}".into();
    }
    let parts: Vec<String> = e.iter().map(|(x, m)| format!("{x} : {}", print_multi(m))).collect();
    parts.join(", ")
}

pub fn print_typing(t: &Typing) -> String {
    format!("{} ; {} ; {}", print_env(&t.env), print_type(&t.ty), t.index)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_context(self))
    }
}

impl fmt::Display for LinearType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_type(self))
    }
}

impl fmt::Display for MultiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_multi(self))
    }
}

impl fmt::Display for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_env(self))
    }
}

/// Derivation tree, one judgement per line, children indented.
pub fn print_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    write_derivation(d, 0, &mut out);
    out
}

fn write_derivation(d: &Derivation, depth: usize, out: &mut String) {
    let ty = match &d.ty {
        Ty::Linear(l) => print_type(l),
        Ty::Multi(m) => print_multi(m),
    };
    out.push_str(&format!(
        "{}[{}] {} |-{} {} : {}\n",
        "  ".repeat(depth),
        d.rule_name(),
        print_env(&d.env),
        d.index,
        print_term(&d.term),
        ty
    ));
    for c in d.children() {
        write_derivation(c, depth + 1, out);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("malformed JSON value: {0}")]
pub struct JsonError(pub String);

fn jerr<T>(what: &str) -> Result<T, JsonError> {
    Err(JsonError(what.into()))
}

fn color_json(c: Color) -> Value {
    Value::String(c.ascii().to_string())
}

fn color_from(v: &Value) -> Result<Color, JsonError> {
    match v.as_str() {
        Some("b") => Ok(Color::Black),
        Some("w") => Ok(Color::White),
        _ => jerr("color must be \"b\" or \"w\""),
    }
}

fn str_field<'a>(v: &'a Value, k: &str) -> Result<&'a str, JsonError> {
    v.get(k).and_then(Value::as_str).ok_or_else(|| JsonError(format!("missing string field `{k}`")))
}

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value, JsonError> {
    v.get(k).ok_or_else(|| JsonError(format!("missing field `{k}`")))
}

pub fn term_to_json(t: &Term) -> Value {
    match t {
        Term::Var(x) => json!({"k": "var", "x": &**x}),
        Term::Abs(c, x, b) => json!({"k": "abs", "c": color_json(*c), "x": &**x, "t": term_to_json(b)}),
        Term::App(c, f, a) => json!({"k": "app", "c": color_json(*c), "f": term_to_json(f), "a": term_to_json(a)}),
    }
}

pub fn term_from_json(v: &Value) -> Result<Term, JsonError> {
    match str_field(v, "k")? {
        "var" => Ok(Term::var(str_field(v, "x")?)),
        "abs" => Ok(Term::Abs(color_from(field(v, "c")?)?, name(str_field(v, "x")?), Arc::new(term_from_json(field(v, "t")?)?))),
        "app" => Ok(Term::App(
            color_from(field(v, "c")?)?,
            Arc::new(term_from_json(field(v, "f")?)?),
            Arc::new(term_from_json(field(v, "a")?)?),
        )),
        _ => jerr("unknown term tag"),
    }
}

pub fn type_to_json(l: &LinearType) -> Value {
    match l {
        LinearType::Atom(x) => json!({"k": "atom", "x": &**x}),
        LinearType::Arrow(m, c, r) => json!({"k": "arrow", "m": multi_to_json(m), "c": color_json(*c), "l": type_to_json(r)}),
    }
}

pub fn type_from_json(v: &Value) -> Result<LinearType, JsonError> {
    match str_field(v, "k")? {
        "atom" => Ok(LinearType::atom(str_field(v, "x")?)),
        "arrow" => {
            Ok(LinearType::arrow(multi_from_json(field(v, "m")?)?, color_from(field(v, "c")?)?, type_from_json(field(v, "l")?)?))
        }
        _ => jerr("unknown type tag"),
    }
}

pub fn multi_to_json(m: &MultiType) -> Value {
    Value::Array(m.elems().iter().map(type_to_json).collect())
}

pub fn multi_from_json(v: &Value) -> Result<MultiType, JsonError> {
    let Some(items) = v.as_array() else {
        return jerr("multi type must be an array");
    };
    items.iter().map(type_from_json).collect::<Result<Vec<_>, _>>().map(MultiType::new)
}

pub fn env_to_json(e: &TypeEnv) -> Value {
    let mut m = Map::new();
    for (x, mt) in e.iter() {
        m.insert(x.to_string(), multi_to_json(mt));
    }
    Value::Object(m)
}

pub fn env_from_json(v: &Value) -> Result<TypeEnv, JsonError> {
    let Some(obj) = v.as_object() else {
        return jerr("environment must be an object");
    };
    let mut e = TypeEnv::empty();
    for (x, m) in obj {
        e.insert(name(x), multi_from_json(m)?);
    }
    Ok(e)
}

pub fn typing_to_json(t: &Typing) -> Value {
    json!({"env": env_to_json(&t.env), "type": type_to_json(&t.ty), "index": t.index})
}

pub fn typing_from_json(v: &Value) -> Result<Typing, JsonError> {
    Ok(Typing {
        env: env_from_json(field(v, "env")?)?,
        ty: type_from_json(field(v, "type")?)?,
        index: field(v, "index")?.as_u64().ok_or_else(|| JsonError("index must be a natural".into()))? as usize,
    })
}

pub fn derivation_to_json(d: &Derivation) -> Value {
    let ty = match &d.ty {
        Ty::Linear(l) => json!({"linear": type_to_json(l)}),
        Ty::Multi(m) => json!({"multi": multi_to_json(m)}),
    };
    let mut v = json!({
        "rule": d.rule_name(),
        "env": env_to_json(&d.env),
        "term": term_to_json(&d.term),
        "type": ty,
        "index": d.index,
        "children": d.children().into_iter().map(derivation_to_json).collect::<Vec<_>>(),
    });
    if let Rule::App { arrow, app, .. } = &d.rule {
        v["arrow"] = color_json(*arrow);
        v["app"] = color_json(*app);
    }
    v
}

pub fn derivation_from_json(v: &Value) -> Result<Derivation, JsonError> {
    let children = field(v, "children")?
        .as_array()
        .ok_or_else(|| JsonError("children must be an array".into()))?
        .iter()
        .map(derivation_from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let tyv = field(v, "type")?;
    let ty = match (tyv.get("linear"), tyv.get("multi")) {
        (Some(l), _) => Ty::Linear(type_from_json(l)?),
        (_, Some(m)) => Ty::Multi(multi_from_json(m)?),
        _ => return jerr("type must be linear or multi"),
    };
    let mut it = children.into_iter();
    let rule = match str_field(v, "rule")? {
        "ax" => Rule::Ax,
        "many" => Rule::Many(it.by_ref().collect()),
        "lam" => Rule::Lam(Box::new(it.next().ok_or_else(|| JsonError("lam needs a child".into()))?)),
        "app" => {
            let fun = it.next().ok_or_else(|| JsonError("app needs two children".into()))?;
            let arg = it.next().ok_or_else(|| JsonError("app needs two children".into()))?;
            Rule::App {
                arrow: color_from(field(v, "arrow")?)?,
                app: color_from(field(v, "app")?)?,
                fun: Box::new(fun),
                arg: Box::new(arg),
            }
        }
        _ => return jerr("unknown rule"),
    };
    Ok(Derivation {
        rule,
        env: env_from_json(field(v, "env")?)?,
        term: term_from_json(field(v, "term")?)?,
        ty,
        index: field(v, "index")?.as_u64().ok_or_else(|| JsonError("index must be a natural".into()))? as usize,
    })
}

pub fn context_to_json(ctx: &Context) -> Value {
    match ctx {
        Context::Hole => json!({"k": "hole"}),
        Context::Abs(c, x, b) => json!({"k": "abs", "c": color_json(*c), "x": &**x, "t": context_to_json(b)}),
        Context::AppLeft(c, b, a) => json!({"k": "app", "c": color_json(*c), "f": context_to_json(b), "a": term_to_json(a)}),
        Context::AppRight(c, f, b) => json!({"k": "app", "c": color_json(*c), "f": term_to_json(f), "a": context_to_json(b)}),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators::*;
    use crate::term::alpha_eq;
    use Color::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_term("\\b x. x").unwrap(), identity(Black));
        let omega_src = "(\\b x. x @b x) @b (\\b y. y @b y)";
        assert!(alpha_eq(&parse_term(omega_src).unwrap(), &omega(Black)));
        let xyz = parse_term("x @w y @w z").unwrap();
        let expected = Term::app(White, Term::app(White, Term::var("x"), Term::var("y")), Term::var("z"));
        assert_eq!(xyz, expected);
    }

    #[test]
    fn glyph_and_plain_forms() {
        assert_eq!(parse_term("λ∘x. x").unwrap(), identity(White));
        assert_eq!(parse_term("λ• x. x •@ x").unwrap(), parse_term("\\b x. x @b x").unwrap());
        assert_eq!(parse_term("\\x y. x y").unwrap(), one(Black));
        assert_eq!(parse_term("\\w x y. x @w y").unwrap(), one(White));
        assert_eq!(parse_term("\\b. b").unwrap(), Term::abs(Black, "b", Term::var("b")));
    }

    #[test]
    fn context_examples() {
        let c = parse_context("[] @b \\b x. x").unwrap();
        assert_eq!(c, Context::app_left(Black, Context::Hole, identity(Black)));
        let c = parse_context("[] @w z @w w").unwrap();
        assert_eq!(c, Context::applied(White, [Term::var("z"), Term::var("w")]));
        assert_eq!(parse_context("[] []"), Err(SyntaxError::HoleCount { found: 2 }));
        assert!(matches!(parse_term("x @b []"), Err(SyntaxError::UnboundHole { .. })));
        let inner = parse_context("\\b y. y @b ([] @w y)").unwrap();
        assert_eq!(parse_context(&print_context(&inner)).unwrap(), inner);
    }

    #[test]
    fn type_examples() {
        let t = parse_type("[] ->w X").unwrap();
        assert_eq!(t, LinearType::arrow(MultiType::empty(), White, LinearType::x()));
        let nested = parse_type("[[ ] ->w X] ->b X").unwrap();
        assert_eq!(nested, LinearType::arrow(MultiType::single(t), Black, LinearType::x()));
        let two = parse_type("[X, X] ->b Y").unwrap();
        assert_eq!(two.uncurry(1).unwrap().0[0].0.len(), 2);
        assert_eq!(print_type(&nested), "[[] ->w X] ->b X");
        assert_eq!(parse_type("[] →• X").unwrap(), parse_type("[] ->b X").unwrap());
    }

    #[test]
    fn errors_carry_spans() {
        match parse_term("\\b x x") {
            Err(SyntaxError::Parse { span, .. }) => assert_eq!(span.start, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_type("X ->b").is_err());
        assert!(parse_term("(x").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for t in [omega(White), delta(Black), j_comb(White), tupler(Black, 3)] {
            assert!(alpha_eq(&parse_term(&print_term(&t)).unwrap(), &t));
        }
        let t = parse_term("x @w (\\b y. y) @b z").unwrap();
        assert_eq!(print_term(&t), "x @w (\\b y. y) @b z");
        assert_eq!(print_term_with(&identity(White), Notation::Unicode), "λ∘x. x");
    }

    #[test]
    fn env_and_typing_syntax() {
        let e = parse_env("x : [[] ->w X], y : [X, X]").unwrap();
        assert_eq!(e.get("y").len(), 2);
        assert_eq!(parse_env(&print_env(&e)).unwrap(), e);
        assert_eq!(parse_env("{}").unwrap(), TypeEnv::empty());
        let t = parse_typing("x : [X] ; X ; 0").unwrap();
        assert_eq!(parse_typing(&print_typing(&t)).unwrap(), t);
        let (env, l) = parse_pair("; [] ->b X").unwrap();
        assert!(env.is_empty());
        assert_eq!(l.depth(), 2);
    }

    #[test]
    fn json_round_trips() {
        let t = delta(White);
        assert_eq!(term_from_json(&term_to_json(&t)).unwrap(), t);
        let v = term_to_json(&identity(Black));
        assert_eq!(v, json!({"k":"abs","c":"b","x":"x","t":{"k":"var","x":"x"}}));
        let ty = Typing { env: parse_env("x : [[] ->w X]").unwrap(), ty: parse_type("[] ->b X").unwrap(), index: 1 };
        assert_eq!(typing_from_json(&typing_to_json(&ty)).unwrap(), ty);
    }
}
