//! Line-oriented instance format.
//!
//! ```text
//! # comment
//! <n> <m>
//! <node_id> <demand> <opening_cost>     (n lines)
//! <u> <v> <length>                      (m lines)
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Edge, Instance};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

fn field<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::at(line, format!("invalid {what} '{tok}'")))
}

fn three<'a>(toks: &[&'a str], line: usize, layout: &str) -> Result<[&'a str; 3], ParseError> {
    match toks {
        [a, b, c] => Ok([a, b, c]),
        _ => Err(ParseError::at(
            line,
            format!("expected '{layout}', found {} fields", toks.len()),
        )),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        (!content.is_empty()).then(|| (i + 1, content.split_whitespace().collect::<Vec<_>>()))
    });
    let last_line = text.lines().count().max(1);

    let (hl, header) = lines
        .next()
        .ok_or_else(|| ParseError::at(1, "missing header '<n> <m>'"))?;
    let (n, m): (usize, usize) = match header.as_slice() {
        [a, b] => (field(a, hl, "node count")?, field(b, hl, "edge count")?),
        _ => return Err(ParseError::at(hl, "expected header '<n> <m>'")),
    };
    if n == 0 {
        return Err(ParseError::at(hl, "node count must be positive"));
    }

    let mut demand = vec![None; n];
    let mut cost = vec![0.0; n];
    for k in 0..n {
        let (ln, toks) = lines.next().ok_or_else(|| {
            ParseError::at(last_line, format!("expected {n} node lines, found {k}"))
        })?;
        let [id, w, f] = three(&toks, ln, "<node_id> <demand> <opening_cost>")?;
        let id: usize = field(id, ln, "node id")?;
        let w: f64 = field(w, ln, "demand")?;
        let f: f64 = field(f, ln, "opening cost")?;
        if id == 0 || id > n {
            return Err(ParseError::at(ln, format!("node id {id} out of range 1..{n}")));
        }
        if demand[id - 1].is_some() {
            return Err(ParseError::at(ln, format!("duplicate node id {id}")));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(ParseError::at(ln, format!("negative demand {w}")));
        }
        if !f.is_finite() || f < 0.0 {
            return Err(ParseError::at(ln, format!("negative opening cost {f}")));
        }
        demand[id - 1] = Some(w);
        cost[id - 1] = f;
    }

    let mut edges = Vec::with_capacity(m);
    for k in 0..m {
        let (ln, toks) = lines.next().ok_or_else(|| {
            ParseError::at(last_line, format!("expected {m} edge lines, found {k}"))
        })?;
        let [u, v, l] = three(&toks, ln, "<u> <v> <length>")?;
        let u: usize = field(u, ln, "node id")?;
        let v: usize = field(v, ln, "node id")?;
        let length: f64 = field(l, ln, "edge length")?;
        for id in [u, v] {
            if id == 0 || id > n {
                return Err(ParseError::at(ln, format!("node id {id} out of range 1..{n}")));
            }
        }
        if u == v {
            return Err(ParseError::at(ln, format!("self-loop at node {u}")));
        }
        if !length.is_finite() || length <= 0.0 {
            return Err(ParseError::at(ln, format!("nonpositive edge length {length}")));
        }
        edges.push(Edge { u, v, length });
    }

    if let Some((ln, _)) = lines.next() {
        return Err(ParseError::at(ln, "unexpected trailing content"));
    }

    let demand = demand.into_iter().map(|w| w.unwrap_or(0.0)).collect();
    Instance::new(n, edges, demand, cost).map_err(|e| ParseError::at(hl, e.to_string()))
}

impl FromStr for Instance {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_instance(s)
    }
}

/// Writes the instance in the text format; `parse_instance` reads it back
/// unchanged.
impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n(), self.edges().len())?;
        for v in self.nodes() {
            writeln!(f, "{} {} {}", v, self.demand(v), self.opening_cost(v))?;
        }
        for e in self.edges() {
            writeln!(f, "{} {} {}", e.u, e.v, e.length)?;
        }
        Ok(())
    }
}
