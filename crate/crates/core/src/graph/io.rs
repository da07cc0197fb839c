//! Plain-text graph format and JSON label tables.
//!
//! ```text
//! # optional comment lines
//! n m w
//! u v            (w = 0)
//! u v num/den    (w = 1)
//! ```
//!
//! Edges satisfy `u < v` and appear in strictly increasing lexicographic
//! order. [`write_graph`] emits exactly this layout with no comments, so
//! `write_graph(&read_graph(s)?)` reproduces any comment-free input that
//! writes weights as reduced `num/den`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Graph, Rational, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.parse::<i64>().ok()?, b.parse::<i64>().ok()?),
        None => (s.parse::<i64>().ok()?, 1),
    };
    if den <= 0 {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Always `num/den`, reduced, denominator positive.
pub fn format_rational(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn read_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.starts_with('#'));

    let Some((hline, header)) = lines.next() else {
        return fail(1, "missing header `n m w`");
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return fail(hline, format!("header needs 3 fields, found {}", fields.len()));
    }
    let parse_count = |s: &str, what: &str| {
        s.parse::<usize>()
            .or_else(|_| fail(hline, format!("bad {what} `{s}`")))
    };
    let n = parse_count(fields[0], "vertex count")?;
    let m = parse_count(fields[1], "edge count")?;
    let weighted = match fields[2] {
        "0" => false,
        "1" => true,
        other => return fail(hline, format!("weight flag must be 0 or 1, found `{other}`")),
    };

    let mut edges = Vec::with_capacity(m);
    let mut last: Option<(Vertex, Vertex)> = None;
    for (lineno, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.is_empty() {
            return fail(lineno, "blank line");
        }
        if edges.len() == m {
            return fail(lineno, format!("more than the declared {m} edges"));
        }
        let want = if weighted { 3 } else { 2 };
        if parts.len() != want {
            return fail(
                lineno,
                format!("edge line needs {want} fields, found {}", parts.len()),
            );
        }
        let mut ends = [0usize; 2];
        for (slot, s) in ends.iter_mut().zip(&parts[..2]) {
            *slot = match s.parse::<usize>() {
                Ok(v) if v < n => v,
                Ok(v) => return fail(lineno, format!("vertex {v} out of range 0..{n}")),
                Err(_) => return fail(lineno, format!("bad vertex id `{s}`")),
            };
        }
        let (u, v) = (ends[0], ends[1]);
        if u >= v {
            return fail(lineno, format!("edge `{u} {v}` must have u < v"));
        }
        if last.is_some_and(|prev| prev >= (u, v)) {
            return fail(lineno, format!("edge `{u} {v}` out of sorted order or repeated"));
        }
        last = Some((u, v));
        let w = if weighted {
            match parse_rational(parts[2]) {
                Some(w) if w > Rational::zero() => w,
                _ => return fail(lineno, format!("bad positive weight `{}`", parts[2])),
            }
        } else {
            Rational::zero()
        };
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return fail(
            text.lines().count().max(1),
            format!("declared {m} edges, found {}", edges.len()),
        );
    }
    let built = if weighted {
        Graph::weighted(n, edges)
    } else {
        Graph::new(n, edges.into_iter().map(|(u, v, _)| (u, v)))
    };
    built.or_else(|e| fail(hline, e.to_string()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + g.edge_count() * 16);
    let w = u8::from(g.is_weighted());
    writeln!(out, "{} {} {}", g.vertex_count(), g.edge_count(), w).unwrap();
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if g.is_weighted() {
            writeln!(out, "{u} {v} {}", format_rational(g.weight(i))).unwrap();
        } else {
            writeln!(out, "{u} {v}").unwrap();
        }
    }
    out
}

/// One entry of a label table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelValue {
    Vertex(Vertex),
    List(Vec<Vertex>),
    Nested(Vec<Vec<Vertex>>),
}

impl LabelValue {
    /// Flattened vertex ids.
    pub fn vertices(&self) -> Vec<Vertex> {
        match self {
            LabelValue::Vertex(v) => vec![*v],
            LabelValue::List(vs) => vs.clone(),
            LabelValue::Nested(vss) => vss.iter().flatten().copied().collect(),
        }
    }
}

/// Landmark names to vertex ids; ordered keys keep the JSON stable.
pub type Labels = BTreeMap<String, LabelValue>;

pub fn read_labels(text: &str) -> Result<Labels, ParseError> {
    serde_json::from_str(text).map_err(|e| ParseError {
        line: e.line(),
        message: e.to_string(),
    })
}

pub fn write_labels(labels: &Labels) -> String {
    let mut s = serde_json::to_string_pretty(labels).expect("labels serialize");
    s.push('\n');
    s
}
