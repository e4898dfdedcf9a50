//! Benchmark state spaces and their heuristics.

pub mod generate;
pub mod graph;
pub mod pancake;
pub mod routing;
pub mod tile;

pub use generate::{generate_instance, DomainKind, Instance};
pub use graph::{ExplicitGraph, GraphError};
pub use pancake::{gap_k, GapHeuristic, PancakeProblem, PancakeState};
pub use routing::{mst_heuristic, RoutingInstance, RoutingProblem, RoutingState};
pub use tile::{manhattan, TilePuzzle, TileState};

use std::fmt;

/// A located error in one of the line-oriented text formats.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based.
    pub line: usize,
    /// 1-based; points at the offending token.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Splits a line into whitespace-separated tokens with their 1-based columns,
/// dropping anything after `#`.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s + 1, &content[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &content[s..]));
    }
    out
}

/// Parses a one-permutation-per-line file (tile and pancake instances).
pub(crate) fn parse_permutation_lines(text: &str) -> Result<Vec<Vec<u8>>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let perm = toks
            .iter()
            .map(|(col, t)| {
                t.parse::<u8>()
                    .map_err(|_| ParseError::new(ln + 1, *col, format!("expected an integer, found `{t}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(perm);
    }
    Ok(out)
}
