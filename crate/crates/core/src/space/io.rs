//! Plain-text matrix and edge-list formats.
//!
//! Matrix file: a line with `n`, then `n` lines of `n` whitespace-separated
//! non-negative numbers (`inf` for an unreachable pair).
//!
//! Edge-list file: a line `n m`, then `m` lines `u v w` with 0-based ids.
//!
//! Blank lines and lines starting with `#` are ignored in both formats.

use super::{DistanceMatrix, Mode, QuasiMetric, SpaceError};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    Truncated(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_value(token: &str, line: usize) -> Result<f64, ParseError> {
    match token.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => token.parse::<f64>().map_err(|_| ParseError::Syntax {
            line,
            message: format!("`{token}` is not a number"),
        }),
    }
}

fn parse_count(token: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let token = token.ok_or_else(|| ParseError::Syntax { line, message: format!("missing {what}") })?;
    token.parse::<usize>().map_err(|_| ParseError::Syntax {
        line,
        message: format!("`{token}` is not a valid {what}"),
    })
}

pub fn parse_matrix(text: &str, mode: Mode) -> Result<QuasiMetric, ParseError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| ParseError::Truncated("missing size line".into()))?;
    let mut head = header.split_whitespace();
    let n = parse_count(head.next(), line, "point count")?;
    if head.next().is_some() {
        return Err(ParseError::Syntax { line, message: "size line must hold a single integer".into() });
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let (line, body) = lines
            .next()
            .ok_or_else(|| ParseError::Truncated(format!("expected {n} rows, found {i}")))?;
        let row = body
            .split_whitespace()
            .map(|t| parse_value(t, line))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != n {
            return Err(ParseError::Syntax {
                line,
                message: format!("row has {} entries, expected {n}", row.len()),
            });
        }
        rows.push(row);
    }
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::Syntax { line, message: "trailing content after matrix".into() });
    }
    Ok(QuasiMetric::from_matrix(rows, mode)?)
}

pub fn parse_edges(text: &str, mode: Mode) -> Result<QuasiMetric, ParseError> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or_else(|| ParseError::Truncated("missing header line".into()))?;
    let mut head = header.split_whitespace();
    let n = parse_count(head.next(), line, "vertex count")?;
    let m = parse_count(head.next(), line, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for e in 0..m {
        let (line, body) = lines
            .next()
            .ok_or_else(|| ParseError::Truncated(format!("expected {m} edges, found {e}")))?;
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(ParseError::Syntax { line, message: "edge line must be `u v w`".into() });
        }
        let u = parse_count(Some(tokens[0]), line, "vertex id")?;
        let v = parse_count(Some(tokens[1]), line, "vertex id")?;
        let w = parse_value(tokens[2], line)?;
        edges.push((u, v, w));
    }
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::Syntax { line, message: "more edge lines than declared".into() });
    }
    Ok(QuasiMetric::from_digraph(n, &edges, mode)?)
}

pub fn format_value(value: f64) -> String {
    if value.is_infinite() {
        "inf".to_string()
    } else {
        format!("{value}")
    }
}

/// Render any distance matrix in the matrix file format.
pub fn write_matrix<M: DistanceMatrix + ?Sized>(m: &M, comment: Option<&str>) -> String {
    let n = m.len();
    let mut out = String::new();
    if let Some(c) = comment {
        for l in c.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = writeln!(out, "{n}");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_value(m.dist(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Render a space as an edge list holding every finite off-diagonal pair.
///
/// Re-reading the output reproduces the matrix whenever it satisfies the
/// triangle inequality, since shortest paths then equal the direct entries.
pub fn write_edges<M: DistanceMatrix + ?Sized>(m: &M, comment: Option<&str>) -> String {
    let n = m.len();
    let edges: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| (i, j, m.dist(i, j)))
        .filter(|e| e.2.is_finite())
        .collect();
    let mut out = String::new();
    if let Some(c) = comment {
        for l in c.lines() {
            let _ = writeln!(out, "# {l}");
        }
    }
    let _ = writeln!(out, "{n} {}", edges.len());
    for (u, v, w) in edges {
        let _ = writeln!(out, "{u} {v} {}", format_value(w));
    }
    out
}
