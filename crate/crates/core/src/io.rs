//! Line-oriented text formats for graphs, divisors and scrambles, and DOT export.
//!
//! Graph:
//! ```text
//! # comment
//! n 3
//! e 0 1 3
//! e 1 2 3
//! ```
//! Divisor: `d <n>` followed by `c <vertex> <chips>` lines; unlisted vertices hold 0.
//! Scramble: one `egg <v1> <v2> ...` line per egg.

use crate::divisor::Divisor;
use crate::graph::{GraphError, Multigraph};
use crate::scramble::{Scramble, ScrambleError};
use crate::vertex_set::VertexSet;
use std::fmt::Write as _;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}` header line")]
    MissingHeader(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Scramble(#[from] ScrambleError),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, message: message.into() }
}

/// Non-comment lines as (1-based line number, whitespace-separated tokens).
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T, ParseError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{token}`")))
}

fn expect_arity(line: usize, tokens: &[&str], k: usize) -> Result<(), ParseError> {
    if tokens.len() != k {
        return Err(syntax(line, format!("`{}` expects {} field(s), got {}", tokens[0], k - 1, tokens.len() - 1)));
    }
    Ok(())
}

/// Reads a `n <count>` header as the first record.
fn header<'a>(
    mut recs: impl Iterator<Item = (usize, Vec<&'a str>)>,
    keyword: &'static str,
) -> Result<(usize, impl Iterator<Item = (usize, Vec<&'a str>)>), ParseError> {
    let (line, tokens) = recs.next().ok_or(ParseError::MissingHeader(keyword))?;
    if tokens[0] != keyword {
        return Err(syntax(line, format!("expected `{keyword} <count>` header, found `{}`", tokens[0])));
    }
    expect_arity(line, &tokens, 2)?;
    Ok((number(line, tokens[1], "vertex count")?, recs))
}

pub fn parse_graph(text: &str) -> Result<Multigraph, ParseError> {
    let (n, recs) = header(records(text), "n")?;
    let mut edges = Vec::new();
    for (line, tokens) in recs {
        if tokens[0] != "e" {
            return Err(syntax(line, format!("unknown record `{}`", tokens[0])));
        }
        expect_arity(line, &tokens, 4)?;
        let u: usize = number(line, tokens[1], "vertex")?;
        let v: usize = number(line, tokens[2], "vertex")?;
        let m: u32 = number(line, tokens[3], "multiplicity")?;
        if u >= n || v >= n {
            return Err(syntax(line, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(syntax(line, "loops are not allowed"));
        }
        if m == 0 {
            return Err(syntax(line, "multiplicity must be positive"));
        }
        edges.push((u, v, m));
    }
    Ok(Multigraph::build(n, &edges)?)
}

/// Canonical text form: one `e u v m` line per adjacent pair with `u < v`, sorted.
pub fn write_graph(g: &Multigraph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v, m) in g.edges() {
        writeln!(out, "e {u} {v} {m}").unwrap();
    }
    out
}

pub fn to_dot(g: &Multigraph, name: &str) -> String {
    let mut out = format!("graph \"{name}\" {{\n");
    for v in 0..g.n() {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v, m) in g.edges() {
        if m > 1 {
            writeln!(out, "  {u} -- {v} [label={m}];").unwrap();
        } else {
            writeln!(out, "  {u} -- {v};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn parse_divisor(text: &str) -> Result<Divisor, ParseError> {
    let (n, recs) = header(records(text), "d")?;
    let mut chips = vec![0i64; n];
    let mut seen = vec![false; n];
    for (line, tokens) in recs {
        if tokens[0] != "c" {
            return Err(syntax(line, format!("unknown record `{}`", tokens[0])));
        }
        expect_arity(line, &tokens, 3)?;
        let v: usize = number(line, tokens[1], "vertex")?;
        if v >= n {
            return Err(syntax(line, format!("vertex out of range for n = {n}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(syntax(line, format!("vertex {v} listed twice")));
        }
        chips[v] = number(line, tokens[2], "chip count")?;
    }
    Ok(Divisor::from_chips(chips))
}

/// Lists only nonzero entries.
pub fn write_divisor(d: &Divisor) -> String {
    let mut out = format!("d {}\n", d.len());
    for (v, &c) in d.chips().iter().enumerate() {
        if c != 0 {
            writeln!(out, "c {v} {c}").unwrap();
        }
    }
    out
}

pub fn parse_scramble(g: &Multigraph, text: &str) -> Result<Scramble, ParseError> {
    let mut eggs = Vec::new();
    for (line, tokens) in records(text) {
        if tokens[0] != "egg" {
            return Err(syntax(line, format!("unknown record `{}`", tokens[0])));
        }
        let mut egg = VertexSet::empty(g.n());
        for t in &tokens[1..] {
            let v: usize = number(line, t, "vertex")?;
            if v >= g.n() {
                return Err(syntax(line, format!("vertex {v} out of range for n = {}", g.n())));
            }
            egg.insert(v);
        }
        if egg.is_empty() {
            return Err(syntax(line, "egg has no vertices"));
        }
        eggs.push(egg);
    }
    Ok(Scramble::new(g, eggs)?)
}

pub fn write_scramble(s: &Scramble) -> String {
    let mut out = String::new();
    for egg in s.eggs() {
        writeln!(out, "egg {egg}").unwrap();
    }
    out
}
