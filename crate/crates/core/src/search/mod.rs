//! Weighted A* over an abstract state space.
//!
//! Nodes are ordered by `fW = g + W·h` with ties broken by smaller `h`, then
//! by insertion order. The goal test happens when a node is popped, and each
//! pop is reported to the bound trace before expansion.

mod open;

pub use open::{NodeId, OpenEntry, OpenList};

use crate::bounds::{TraceCollector, TraceSummary};
use crate::scalar::Scalar;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::time::{Duration, Instant};
use thiserror::Error;

/// A search problem: start state, goal test, successors and heuristic.
///
/// `State` doubles as the canonical encoding used for duplicate detection.
pub trait StateSpace {
    type State: Clone + Eq + Hash + Debug;
    type Cost: Scalar;

    fn start(&self) -> Self::State;
    fn is_goal(&self, state: &Self::State) -> bool;
    /// Appends `(successor, action cost)` pairs to `out`.
    fn successors(&self, state: &Self::State, out: &mut Vec<(Self::State, Self::Cost)>);
    fn heuristic(&self, state: &Self::State) -> Self::Cost;
}

impl<T: StateSpace + ?Sized> StateSpace for &T {
    type State = T::State;
    type Cost = T::Cost;

    fn start(&self) -> Self::State {
        (**self).start()
    }
    fn is_goal(&self, state: &Self::State) -> bool {
        (**self).is_goal(state)
    }
    fn successors(&self, state: &Self::State, out: &mut Vec<(Self::State, Self::Cost)>) {
        (**self).successors(state, out)
    }
    fn heuristic(&self, state: &Self::State) -> Self::Cost {
        (**self).heuristic(state)
    }
}

/// Search weight `W >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight<C>(C);

impl<C: Scalar> Weight<C> {
    pub fn new(w: C) -> Result<Self, SearchError> {
        if !w.is_finite_value() || w < C::one() {
            return Err(SearchError::InvalidWeight(w.as_f64()));
        }
        Ok(Weight(w))
    }

    pub fn one() -> Self {
        Weight(C::one())
    }

    pub fn get(self) -> C {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Limits {
    pub max_expansions: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits::default()
    }

    pub fn expansions(n: u64) -> Self {
        Limits {
            max_expansions: Some(n),
            max_time: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Reinsert closed states reached by a strictly cheaper path.
    pub reopening: bool,
    /// Full scan of Open on every iteration to check the popped key and
    /// `g_min`. Quadratic; for tests.
    pub audit_open: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            reopening: true,
            audit_open: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("invalid weight {0}: must be finite and >= 1")]
    InvalidWeight(f64),
    #[error("model produced action cost {cost} from state {from}")]
    InvalidCost { from: String, cost: f64 },
    #[error("model produced heuristic value {value} at state {state}")]
    InvalidHeuristic { state: String, value: f64 },
    #[error("parent chain is broken at node {0}")]
    BrokenParentChain(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    Solved,
    Exhausted,
    ResourceLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult<S, C> {
    pub status: SearchStatus,
    /// Cost of `path`; `None` unless solved.
    pub cost: Option<C>,
    /// `(state, cost of the action that reached it)`; the start carries 0.
    pub path: Vec<(S, C)>,
    pub expansions: u64,
    pub iterations: u64,
    pub generated: u64,
    pub trace: TraceSummary<C>,
}

struct Node<S, C> {
    state: S,
    g: C,
    h: C,
    parent: Option<NodeId>,
    /// Cost of the edge from `parent`.
    step: C,
    closed: bool,
}

/// Runs Weighted A*; `W = 1` is plain A*.
pub fn weighted_astar<M: StateSpace>(
    space: &M,
    weight: Weight<M::Cost>,
    limits: Limits,
    options: SearchOptions,
) -> Result<SearchResult<M::State, M::Cost>, SearchError> {
    Engine::new(space, weight, limits, options).run()
}

struct Engine<'a, M: StateSpace> {
    space: &'a M,
    weight: M::Cost,
    limits: Limits,
    options: SearchOptions,
    nodes: Vec<Node<M::State, M::Cost>>,
    index: HashMap<M::State, NodeId>,
    open: OpenList<M::Cost>,
    trace: TraceCollector<M::Cost>,
    expansions: u64,
    generated: u64,
}

impl<'a, M: StateSpace> Engine<'a, M> {
    fn new(space: &'a M, weight: Weight<M::Cost>, limits: Limits, options: SearchOptions) -> Self {
        Engine {
            space,
            weight: weight.get(),
            limits,
            options,
            nodes: Vec::new(),
            index: HashMap::new(),
            open: OpenList::new(),
            trace: TraceCollector::new(weight),
            expansions: 0,
            generated: 0,
        }
    }

    fn heuristic(&self, state: &M::State) -> Result<M::Cost, SearchError> {
        let h = self.space.heuristic(state);
        if !h.is_finite_value() || h < M::Cost::zero() {
            return Err(SearchError::InvalidHeuristic {
                state: format!("{state:?}"),
                value: h.as_f64(),
            });
        }
        Ok(h)
    }

    fn push(&mut self, id: NodeId) {
        let n = &self.nodes[id];
        let f_w = n.g + self.weight * n.h;
        self.open.push(id, n.g, n.h, f_w);
    }

    fn run(mut self) -> Result<SearchResult<M::State, M::Cost>, SearchError> {
        let started = Instant::now();
        let start = self.space.start();
        let h = self.heuristic(&start)?;
        self.nodes.push(Node {
            state: start.clone(),
            g: M::Cost::zero(),
            h,
            parent: None,
            step: M::Cost::zero(),
            closed: false,
        });
        self.index.insert(start, 0);
        self.push(0);
        self.generated = 1;

        let mut successors = Vec::new();
        loop {
            if self.open.is_empty() {
                return self.finish(SearchStatus::Exhausted, None);
            }
            if self.limit_reached(started) {
                return self.finish(SearchStatus::ResourceLimit, None);
            }

            // g_min is taken before the pop so it covers the popped node.
            let g_min = self.open.min_g().expect("open is nonempty");
            if self.options.audit_open {
                self.audit(g_min);
            }
            let entry = self.open.pop_min().expect("open is nonempty");
            let id = entry.node;

            if self.space.is_goal(&self.nodes[id].state) {
                let goal = &self.nodes[id];
                let f_min = self
                    .open
                    .iter()
                    .map(|e| e.g + e.h)
                    .fold(goal.g + goal.h, |acc, f| acc.min_of(f));
                self.trace.observe_iteration(entry.f_w, g_min, Some(f_min));
                return self.finish(SearchStatus::Solved, Some(id));
            }
            self.trace.observe_iteration(entry.f_w, g_min, None);

            self.nodes[id].closed = true;
            self.expansions += 1;
            let g = self.nodes[id].g;

            successors.clear();
            self.space.successors(&self.nodes[id].state, &mut successors);
            for (state, cost) in successors.drain(..) {
                if !cost.is_finite_value() || cost < M::Cost::zero() {
                    return Err(SearchError::InvalidCost {
                        from: format!("{:?}", self.nodes[id].state),
                        cost: cost.as_f64(),
                    });
                }
                self.generated += 1;
                let g_new = g + cost;
                match self.index.get(&state) {
                    None => {
                        let h = self.heuristic(&state)?;
                        let child = self.nodes.len();
                        self.nodes.push(Node {
                            state: state.clone(),
                            g: g_new,
                            h,
                            parent: Some(id),
                            step: cost,
                            closed: false,
                        });
                        self.index.insert(state, child);
                        self.push(child);
                    }
                    Some(&child) => {
                        let node = &mut self.nodes[child];
                        if g_new >= node.g {
                            continue;
                        }
                        if node.closed {
                            if !self.options.reopening {
                                continue;
                            }
                            node.closed = false;
                        }
                        node.g = g_new;
                        node.parent = Some(id);
                        node.step = cost;
                        self.push(child);
                    }
                }
            }
        }
    }

    fn limit_reached(&self, started: Instant) -> bool {
        if self.limits.max_expansions.is_some_and(|max| self.expansions >= max) {
            return true;
        }
        // Checking the clock on every pop is measurable on tiny domains.
        match self.limits.max_time {
            Some(t) if self.trace.iterations().is_multiple_of(256) => started.elapsed() >= t,
            _ => false,
        }
    }

    fn audit(&mut self, g_min: M::Cost) {
        let key = |e: &OpenEntry<M::Cost>| (e.f_w, e.h, e.seq);
        let mut it = self.open.iter();
        let first = *it.next().expect("open is nonempty");
        let (best, g) = it.fold((first, first.g), |(best, g), e| {
            let best = if key(e) < key(&best) { *e } else { best };
            (best, g.min_of(e.g))
        });
        let top = self.open.peek_min().expect("open is nonempty");
        assert!(top == best, "heap top {top:?} is not the Open minimum {best:?}");
        assert!(g == g_min, "g_min heap disagrees with a full scan");
    }

    fn finish(
        self,
        status: SearchStatus,
        goal: Option<NodeId>,
    ) -> Result<SearchResult<M::State, M::Cost>, SearchError> {
        let trace = self.trace.summary();
        let (cost, path) = match goal {
            Some(id) => {
                let path = reconstruct(&self.nodes, id)?;
                // Equals the goal's g unless an ancestor was improved after
                // the goal was generated, in which case the path is cheaper.
                let cost = path.iter().fold(M::Cost::zero(), |acc, (_, step)| acc + *step);
                (Some(cost), path)
            }
            None => (None, Vec::new()),
        };
        Ok(SearchResult {
            status,
            cost,
            path,
            expansions: self.expansions,
            iterations: trace.iterations,
            generated: self.generated,
            trace,
        })
    }
}

/// Walks parent links back from `goal` and returns the path start-first.
fn reconstruct<S: Clone, C: Scalar>(nodes: &[Node<S, C>], goal: NodeId) -> Result<Vec<(S, C)>, SearchError> {
    let mut path = Vec::new();
    let mut cur = Some(goal);
    while let Some(id) = cur {
        let node = nodes.get(id).ok_or(SearchError::BrokenParentChain(id))?;
        path.push((node.state.clone(), node.step));
        if path.len() > nodes.len() {
            return Err(SearchError::BrokenParentChain(id));
        }
        cur = node.parent;
    }
    path.reverse();
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Integer line 0 -> 1 -> ... -> len with a configurable step cost.
    struct Line {
        len: u32,
        step: f64,
        h: fn(u32) -> f64,
    }

    impl StateSpace for Line {
        type State = u32;
        type Cost = f64;
        fn start(&self) -> u32 {
            0
        }
        fn is_goal(&self, s: &u32) -> bool {
            *s == self.len
        }
        fn successors(&self, s: &u32, out: &mut Vec<(u32, f64)>) {
            if *s < self.len {
                out.push((s + 1, self.step));
            }
        }
        fn heuristic(&self, s: &u32) -> f64 {
            (self.h)(*s)
        }
    }

    #[test]
    fn rejects_weight_below_one() {
        assert!(matches!(Weight::new(0.5), Err(SearchError::InvalidWeight(_))));
        assert!(Weight::new(f64::NAN).is_err());
        assert!(Weight::new(1.0).is_ok());
    }

    #[test]
    fn start_is_goal() {
        let space = Line {
            len: 0,
            step: 1.0,
            h: |_| 0.0,
        };
        let r = weighted_astar(
            &space,
            Weight::new(2.0).unwrap(),
            Limits::default(),
            SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(r.status, SearchStatus::Solved);
        assert_eq!(r.cost, Some(0.0));
        assert_eq!(r.path, vec![(0, 0.0)]);
        assert_eq!(r.trace.f_w_max, 0.0);
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn chain_path_in_order() {
        let space = Line {
            len: 2,
            step: 1.5,
            h: |s| (2 - s) as f64,
        };
        let r = weighted_astar(&space, Weight::one(), Limits::default(), SearchOptions::default()).unwrap();
        assert_eq!(r.path, vec![(0, 0.0), (1, 1.5), (2, 1.5)]);
        assert_eq!(r.cost, Some(3.0));
    }

    #[test]
    fn negative_cost_is_a_model_error() {
        let space = Line {
            len: 3,
            step: -1.0,
            h: |_| 0.0,
        };
        let r = weighted_astar(&space, Weight::one(), Limits::default(), SearchOptions::default());
        assert!(matches!(r, Err(SearchError::InvalidCost { .. })));
    }

    #[test]
    fn negative_heuristic_is_a_model_error() {
        let space = Line {
            len: 3,
            step: 1.0,
            h: |_| -2.0,
        };
        let r = weighted_astar(&space, Weight::one(), Limits::default(), SearchOptions::default());
        assert!(matches!(r, Err(SearchError::InvalidHeuristic { .. })));
    }

    #[test]
    fn expansion_limit_fires() {
        let space = Line {
            len: 100,
            step: 1.0,
            h: |_| 0.0,
        };
        let r = weighted_astar(&space, Weight::one(), Limits::expansions(10), SearchOptions::default()).unwrap();
        assert_eq!(r.status, SearchStatus::ResourceLimit);
        assert_eq!(r.expansions, 10);
        assert!(r.cost.is_none());
    }

    struct Cycle;

    impl StateSpace for Cycle {
        type State = u8;
        type Cost = f64;
        fn start(&self) -> u8 {
            0
        }
        fn is_goal(&self, s: &u8) -> bool {
            *s == 9
        }
        fn successors(&self, s: &u8, out: &mut Vec<(u8, f64)>) {
            // 0 <-> 1 <-> 2 with zero cost, no goal reachable.
            match s {
                0 => out.push((1, 0.0)),
                1 => out.extend([(2, 0.0), (0, 0.0)]),
                2 => out.push((0, 0.0)),
                _ => {}
            }
        }
        fn heuristic(&self, _: &u8) -> f64 {
            0.0
        }
    }

    #[test]
    fn zero_cost_cycle_terminates() {
        let r = weighted_astar(
            &Cycle,
            Weight::new(3.0).unwrap(),
            Limits::default(),
            SearchOptions::default(),
        )
        .unwrap();
        assert_eq!(r.status, SearchStatus::Exhausted);
        assert_eq!(r.expansions, 3);
    }
}
