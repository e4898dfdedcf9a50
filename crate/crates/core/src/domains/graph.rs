//! Explicit graphs read from a small line-oriented text format:
//!
//! ```text
//! # comment
//! node <id> h=<float> [start] [goal]
//! edge <from> <to> cost=<float> [undirected]
//! ```
//!
//! `h=inf` marks a node that cannot reach a goal; such nodes are never
//! generated by the search. Edges are directed unless marked `undirected`.

use super::{tokens, ParseError};
use crate::scalar::Scalar;
use crate::search::StateSpace;
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct GraphNode<C> {
    pub name: String,
    /// `None` is the dead-end sentinel.
    pub h: Option<C>,
    pub is_goal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge<C> {
    pub from: usize,
    pub to: usize,
    pub cost: C,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph has no nodes")]
    Empty,
    #[error("start node {0} is out of range")]
    BadStart(usize),
    #[error("graph has no goal node")]
    NoGoal,
    #[error("edge {from} -> {to} refers to a missing node")]
    BadEdge { from: usize, to: usize },
    #[error("edge {from} -> {to} has invalid cost {cost}")]
    BadCost { from: usize, to: usize, cost: f64 },
    #[error("node {name} has invalid heuristic value {value}")]
    BadHeuristic { name: String, value: f64 },
    #[error("goal node {0} must have h = 0")]
    GoalHeuristic(String),
    #[error("duplicate node name {0}")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitGraph<C = f64> {
    nodes: Vec<GraphNode<C>>,
    start: usize,
    edges: Vec<Edge<C>>,
    adjacency: Vec<Vec<(usize, C)>>,
}

impl<C: Scalar> ExplicitGraph<C> {
    pub fn new(nodes: Vec<GraphNode<C>>, start: usize, edges: Vec<Edge<C>>) -> Result<Self, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        if start >= nodes.len() {
            return Err(GraphError::BadStart(start));
        }
        if !nodes.iter().any(|n| n.is_goal) {
            return Err(GraphError::NoGoal);
        }
        let mut seen = HashMap::new();
        for node in &nodes {
            if seen.insert(node.name.as_str(), ()).is_some() {
                return Err(GraphError::DuplicateName(node.name.clone()));
            }
            if let Some(h) = node.h {
                if !h.is_finite_value() || h < C::zero() {
                    return Err(GraphError::BadHeuristic {
                        name: node.name.clone(),
                        value: h.as_f64(),
                    });
                }
                if node.is_goal && h != C::zero() {
                    return Err(GraphError::GoalHeuristic(node.name.clone()));
                }
            } else if node.is_goal {
                return Err(GraphError::GoalHeuristic(node.name.clone()));
            }
        }
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for e in &edges {
            if e.from >= nodes.len() || e.to >= nodes.len() {
                return Err(GraphError::BadEdge { from: e.from, to: e.to });
            }
            if !e.cost.is_finite_value() || e.cost < C::zero() {
                return Err(GraphError::BadCost {
                    from: e.from,
                    to: e.to,
                    cost: e.cost.as_f64(),
                });
            }
            adjacency[e.from].push((e.to, e.cost));
        }
        Ok(ExplicitGraph {
            nodes,
            start,
            edges,
            adjacency,
        })
    }

    /// Parses the text format into a graph with costs of type `C`.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_graph(text)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn start_node(&self) -> usize {
        self.start
    }

    pub fn nodes(&self) -> &[GraphNode<C>] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge<C>] {
        &self.edges
    }

    pub fn out_edges(&self, node: usize) -> &[(usize, C)] {
        &self.adjacency[node]
    }

    pub fn goals(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().enumerate().filter(|(_, n)| n.is_goal).map(|(i, _)| i)
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn name(&self, node: usize) -> &str {
        &self.nodes[node].name
    }

    pub fn h(&self, node: usize) -> Option<C> {
        self.nodes[node].h
    }

    /// Replaces every node's heuristic value. Goals must receive `Some(0)`.
    pub fn with_heuristic(mut self, h: &[Option<C>]) -> Result<Self, GraphError> {
        assert_eq!(h.len(), self.nodes.len(), "one heuristic value per node");
        for (node, value) in self.nodes.iter_mut().zip(h) {
            node.h = *value;
        }
        ExplicitGraph::new(self.nodes, self.start, self.edges)
    }

    /// Converts costs and heuristic values to another scalar type.
    pub fn convert<D: Scalar>(&self) -> Option<ExplicitGraph<D>> {
        let conv = |c: C| D::from_f64_exact(c.as_f64());
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                Some(GraphNode {
                    name: n.name.clone(),
                    h: match n.h {
                        Some(h) => Some(conv(h)?),
                        None => None,
                    },
                    is_goal: n.is_goal,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Some(Edge {
                    from: e.from,
                    to: e.to,
                    cost: conv(e.cost)?,
                })
            })
            .collect::<Option<Vec<_>>>()?;
        ExplicitGraph::new(nodes, self.start, edges).ok()
    }

    /// Serializes back to the text format, one directed edge per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let h = match n.h {
                Some(h) => format!("{h}"),
                None => "inf".to_string(),
            };
            let _ = write!(out, "node {} h={}", n.name, h);
            if i == self.start {
                out.push_str(" start");
            }
            if n.is_goal {
                out.push_str(" goal");
            }
            out.push('\n');
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "edge {} {} cost={}",
                self.nodes[e.from].name, self.nodes[e.to].name, e.cost
            );
        }
        out
    }
}

impl<C: Scalar> StateSpace for ExplicitGraph<C> {
    type State = usize;
    type Cost = C;

    fn start(&self) -> usize {
        self.start
    }

    fn is_goal(&self, s: &usize) -> bool {
        self.nodes[*s].is_goal
    }

    fn successors(&self, s: &usize, out: &mut Vec<(usize, C)>) {
        out.extend(
            self.adjacency[*s]
                .iter()
                .filter(|(to, _)| self.nodes[*to].h.is_some())
                .copied(),
        );
    }

    fn heuristic(&self, s: &usize) -> C {
        self.nodes[*s].h.unwrap_or_else(C::zero)
    }
}

fn parse_number<C: Scalar>(line: usize, col: usize, tok: &str, key: &str) -> Result<Option<C>, ParseError> {
    let Some(raw) = tok.strip_prefix(key).and_then(|t| t.strip_prefix('=')) else {
        return Err(ParseError::new(
            line,
            col,
            format!("expected `{key}=<number>`, found `{tok}`"),
        ));
    };
    if raw == "inf" {
        return Ok(None);
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| ParseError::new(line, col + key.len() + 1, format!("invalid number `{raw}`")))?;
    if !v.is_finite() {
        return Err(ParseError::new(
            line,
            col + key.len() + 1,
            format!("invalid number `{raw}`"),
        ));
    }
    if v < 0.0 {
        return Err(ParseError::new(
            line,
            col + key.len() + 1,
            format!("negative {key} `{raw}`"),
        ));
    }
    C::from_f64_exact(v)
        .map(Some)
        .ok_or_else(|| ParseError::new(line, col, format!("`{raw}` is not representable")))
}

fn parse_graph<C: Scalar>(text: &str) -> Result<ExplicitGraph<C>, ParseError> {
    struct PendingEdge<'a, C> {
        line: usize,
        from: (usize, &'a str),
        to: (usize, &'a str),
        cost: C,
        undirected: bool,
    }

    let mut nodes: Vec<GraphNode<C>> = Vec::new();
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut start: Option<usize> = None;
    let mut pending = Vec::new();
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        last_line = ln;
        let toks = tokens(line);
        let Some(&(kw_col, kw)) = toks.first() else {
            continue;
        };
        match kw {
            "node" => {
                let &(name_col, name) = toks
                    .get(1)
                    .ok_or_else(|| ParseError::new(ln, kw_col, "node needs an id"))?;
                let &(h_col, h_tok) = toks
                    .get(2)
                    .ok_or_else(|| ParseError::new(ln, name_col, "node needs `h=<number>`"))?;
                let h = parse_number::<C>(ln, h_col, h_tok, "h")?;
                let mut is_goal = false;
                let mut is_start = false;
                for &(col, flag) in &toks[3..] {
                    match flag {
                        "start" => is_start = true,
                        "goal" => is_goal = true,
                        other => return Err(ParseError::new(ln, col, format!("unknown node flag `{other}`"))),
                    }
                }
                if ids.contains_key(name) {
                    return Err(ParseError::new(ln, name_col, format!("duplicate node id `{name}`")));
                }
                if is_goal && h != Some(C::zero()) {
                    return Err(ParseError::new(ln, h_col, "goal nodes must have h=0"));
                }
                let id = nodes.len();
                if is_start {
                    if start.is_some() {
                        return Err(ParseError::new(ln, kw_col, "more than one start node"));
                    }
                    start = Some(id);
                }
                ids.insert(name, id);
                nodes.push(GraphNode {
                    name: name.to_string(),
                    h,
                    is_goal,
                });
            }
            "edge" => {
                if toks.len() < 4 {
                    return Err(ParseError::new(ln, kw_col, "expected `edge <from> <to> cost=<number>`"));
                }
                let (cost_col, cost_tok) = toks[3];
                let cost = parse_number::<C>(ln, cost_col, cost_tok, "cost")?
                    .ok_or_else(|| ParseError::new(ln, cost_col, "edge cost must be finite"))?;
                let mut undirected = false;
                for &(col, flag) in &toks[4..] {
                    match flag {
                        "undirected" => undirected = true,
                        "directed" => undirected = false,
                        other => return Err(ParseError::new(ln, col, format!("unknown edge flag `{other}`"))),
                    }
                }
                pending.push(PendingEdge {
                    line: ln,
                    from: toks[1],
                    to: toks[2],
                    cost,
                    undirected,
                });
            }
            other => {
                return Err(ParseError::new(ln, kw_col, format!("unknown directive `{other}`")));
            }
        }
    }

    let start = start.ok_or_else(|| ParseError::new(last_line.max(1), 1, "missing start node"))?;
    if !nodes.iter().any(|n| n.is_goal) {
        return Err(ParseError::new(last_line.max(1), 1, "missing goal node"));
    }

    let mut edges = Vec::new();
    for e in pending {
        let resolve = |(col, name): (usize, &str)| {
            ids.get(name)
                .copied()
                .ok_or_else(|| ParseError::new(e.line, col, format!("unknown node `{name}`")))
        };
        let from = resolve(e.from)?;
        let to = resolve(e.to)?;
        edges.push(Edge { from, to, cost: e.cost });
        if e.undirected {
            edges.push(Edge {
                from: to,
                to: from,
                cost: e.cost,
            });
        }
    }

    ExplicitGraph::new(nodes, start, edges).map_err(|err| ParseError::new(last_line.max(1), 1, err.to_string()))
}
