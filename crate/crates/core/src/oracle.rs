//! Ground truth: optimal costs, exact `h*`, admissibility and consistency
//! checks, and random graphs with controlled heuristics.
//!
//! Nothing here shares code with the search engine; the Dijkstra used for
//! `C*` and `h*` is a separate implementation so the two can check each other.

use crate::domains::graph::{Edge, ExplicitGraph, GraphNode};
use crate::scalar::{cmp_scalar, Scalar};
use crate::search::{Limits, StateSpace};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::ops::RangeInclusive;
use thiserror::Error;

/// Absolute slack for heuristic comparisons in floating point.
pub const HEURISTIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult<C> {
    pub optimal_cost: C,
    pub states_settled: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("no goal is reachable ({settled} states settled)")]
    Unreachable { settled: u64 },
    #[error("state limit exceeded after {settled} states")]
    LimitExceeded { settled: u64 },
    #[error("model produced invalid action cost {0}")]
    InvalidCost(f64),
}

/// Outcome of a heuristic-property check.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<V> {
    Ok,
    /// Every violation found, in enumeration order.
    Violations(Vec<V>),
    /// The space could not be exhausted within the limits.
    Unverifiable {
        reason: String,
    },
}

impl<V> Verdict<V> {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityViolation<S, C> {
    pub state: S,
    pub h: C,
    pub h_star: C,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyViolation<S, C> {
    pub from: S,
    pub to: S,
    pub cost: C,
    pub h_from: C,
    pub h_to: C,
}

struct Entry<C> {
    g: C,
    seq: u64,
    node: usize,
}

impl<C: Scalar> PartialEq for Entry<C> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<C: Scalar> Eq for Entry<C> {}
impl<C: Scalar> PartialOrd for Entry<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<C: Scalar> Ord for Entry<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_scalar(other.g, self.g).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Uniform-cost search from the start, ignoring the heuristic.
pub fn optimal_cost<M: StateSpace>(space: &M, limits: Limits) -> Result<OracleResult<M::Cost>, OracleError> {
    let mut ids: HashMap<M::State, usize> = HashMap::new();
    let mut states: Vec<M::State> = Vec::new();
    let mut dist: Vec<M::Cost> = Vec::new();
    let mut settled: Vec<bool> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut settled_count = 0u64;
    let max = limits.max_expansions.unwrap_or(u64::MAX);

    let start = space.start();
    ids.insert(start.clone(), 0);
    states.push(start);
    dist.push(M::Cost::zero());
    settled.push(false);
    heap.push(Entry {
        g: M::Cost::zero(),
        seq,
        node: 0,
    });

    let mut succ = Vec::new();
    while let Some(Entry { g, node, .. }) = heap.pop() {
        if settled[node] || g > dist[node] {
            continue;
        }
        settled[node] = true;
        settled_count += 1;
        if space.is_goal(&states[node]) {
            return Ok(OracleResult {
                optimal_cost: g,
                states_settled: settled_count,
            });
        }
        if settled_count >= max {
            return Err(OracleError::LimitExceeded { settled: settled_count });
        }
        succ.clear();
        space.successors(&states[node], &mut succ);
        for (s, c) in succ.drain(..) {
            if !c.is_finite_value() || c < M::Cost::zero() {
                return Err(OracleError::InvalidCost(c.as_f64()));
            }
            let d = g + c;
            let id = match ids.get(&s) {
                Some(&id) => {
                    if settled[id] || d >= dist[id] {
                        continue;
                    }
                    dist[id] = d;
                    id
                }
                None => {
                    let id = states.len();
                    ids.insert(s.clone(), id);
                    states.push(s);
                    dist.push(d);
                    settled.push(false);
                    id
                }
            };
            seq += 1;
            heap.push(Entry { g: d, seq, node: id });
        }
    }
    Err(OracleError::Unreachable { settled: settled_count })
}

/// The part of a state space reachable from its start, as an explicit graph.
pub struct ReachableRegion<S, C> {
    pub states: Vec<S>,
    /// `(from, to, cost)` by state index.
    pub edges: Vec<(usize, usize, C)>,
    pub goals: Vec<usize>,
}

/// Breadth-first enumeration of every state reachable from the start.
/// `None` when more than `max_states` states exist.
pub fn enumerate_reachable<M: StateSpace>(space: &M, max_states: usize) -> Option<ReachableRegion<M::State, M::Cost>> {
    let mut ids: HashMap<M::State, usize> = HashMap::new();
    let mut states = vec![space.start()];
    ids.insert(states[0].clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut edges = Vec::new();
    let mut goals = Vec::new();
    let mut succ = Vec::new();
    while let Some(u) = queue.pop_front() {
        if space.is_goal(&states[u]) {
            goals.push(u);
        }
        succ.clear();
        space.successors(&states[u], &mut succ);
        for (s, c) in succ.drain(..) {
            let v = match ids.get(&s) {
                Some(&v) => v,
                None => {
                    if states.len() >= max_states {
                        return None;
                    }
                    let v = states.len();
                    ids.insert(s.clone(), v);
                    states.push(s);
                    queue.push_back(v);
                    v
                }
            };
            edges.push((u, v, c));
        }
    }
    Some(ReachableRegion { states, edges, goals })
}

/// Multi-source Dijkstra over reversed edges: exact cost-to-goal per node,
/// `None` where no goal is reachable.
pub fn cost_to_goal<C: Scalar>(
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize, C)>,
    goals: &[usize],
) -> Vec<Option<C>> {
    let mut reverse: Vec<Vec<(usize, C)>> = vec![Vec::new(); n];
    for (u, v, c) in edges {
        reverse[v].push((u, c));
    }
    let mut dist: Vec<Option<C>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    for &g in goals {
        dist[g] = Some(C::zero());
        heap.push(Entry {
            g: C::zero(),
            seq,
            node: g,
        });
        seq += 1;
    }
    while let Some(Entry { g, node, .. }) = heap.pop() {
        if done[node] {
            continue;
        }
        done[node] = true;
        for &(u, c) in &reverse[node] {
            let d = g + c;
            if !done[u] && dist[u].is_none_or(|cur| d < cur) {
                dist[u] = Some(d);
                heap.push(Entry { g: d, seq, node: u });
                seq += 1;
            }
        }
    }
    dist
}

/// Exact `h*` for every node of an explicit graph, ignoring its stored `h`.
pub fn graph_h_star<C: Scalar>(graph: &ExplicitGraph<C>) -> Vec<Option<C>> {
    let goals: Vec<usize> = graph.goals().collect();
    cost_to_goal(
        graph.len(),
        graph.edges().iter().map(|e| (e.from, e.to, e.cost)),
        &goals,
    )
}

fn exceeds<C: Scalar>(lhs: C, rhs: C) -> bool {
    (lhs - rhs).as_f64() > HEURISTIC_TOLERANCE
}

/// Checks `h(s) <= h*(s)` on every reachable state that can reach a goal.
pub fn check_admissible<M: StateSpace>(
    space: &M,
    max_states: usize,
) -> Verdict<AdmissibilityViolation<M::State, M::Cost>> {
    let Some(region) = enumerate_reachable(space, max_states) else {
        return Verdict::Unverifiable {
            reason: format!("more than {max_states} reachable states"),
        };
    };
    let h_star = cost_to_goal(region.states.len(), region.edges.iter().copied(), &region.goals);
    let violations: Vec<_> = region
        .states
        .iter()
        .zip(&h_star)
        .filter_map(|(s, hs)| {
            let hs = (*hs)?;
            let h = space.heuristic(s);
            exceeds(h, hs).then(|| AdmissibilityViolation {
                state: s.clone(),
                h,
                h_star: hs,
            })
        })
        .collect();
    if violations.is_empty() {
        Verdict::Ok
    } else {
        Verdict::Violations(violations)
    }
}

/// Checks `h(u) <= c(u, v) + h(v)` on every reachable edge.
pub fn check_consistent<M: StateSpace>(
    space: &M,
    max_states: usize,
) -> Verdict<ConsistencyViolation<M::State, M::Cost>> {
    let Some(region) = enumerate_reachable(space, max_states) else {
        return Verdict::Unverifiable {
            reason: format!("more than {max_states} reachable states"),
        };
    };
    let h: Vec<M::Cost> = region.states.iter().map(|s| space.heuristic(s)).collect();
    let violations: Vec<_> = region
        .edges
        .iter()
        .filter(|&&(u, v, c)| exceeds(h[u], c + h[v]))
        .map(|&(u, v, c)| ConsistencyViolation {
            from: region.states[u].clone(),
            to: region.states[v].clone(),
            cost: c,
            h_from: h[u],
            h_to: h[v],
        })
        .collect();
    if violations.is_empty() {
        Verdict::Ok
    } else {
        Verdict::Violations(violations)
    }
}

/// Random directed graph on `n_nodes` nodes named `n0..`, start `n0`, goal
/// the last node. A random Hamiltonian chain from start to goal keeps every
/// node reachable from the start and able to reach the goal; each further
/// ordered pair gets an edge with probability `edge_density`. The goal has
/// no outgoing edges. Integer costs are drawn from `cost_range`; every `h`
/// is 0.
pub fn random_graph(
    seed: u64,
    n_nodes: usize,
    edge_density: f64,
    cost_range: RangeInclusive<u32>,
) -> ExplicitGraph<f64> {
    assert!(n_nodes >= 2, "random graphs need at least two nodes");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let goal = n_nodes - 1;
    let mut middle: Vec<usize> = (1..goal).collect();
    middle.shuffle(&mut rng);
    let mut order = vec![0];
    order.extend(middle);
    order.push(goal);

    let cost = |rng: &mut ChaCha8Rng| rng.gen_range(cost_range.clone()) as f64;
    let mut present = vec![false; n_nodes * n_nodes];
    let mut edges = Vec::new();
    for w in order.windows(2) {
        present[w[0] * n_nodes + w[1]] = true;
        edges.push(Edge {
            from: w[0],
            to: w[1],
            cost: cost(&mut rng),
        });
    }
    for from in 0..goal {
        for to in 0..n_nodes {
            if from == to || present[from * n_nodes + to] {
                continue;
            }
            if rng.gen_bool(edge_density) {
                present[from * n_nodes + to] = true;
                edges.push(Edge {
                    from,
                    to,
                    cost: cost(&mut rng),
                });
            }
        }
    }
    let nodes = (0..n_nodes)
        .map(|i| GraphNode {
            name: format!("n{i}"),
            h: Some(0.0),
            is_goal: i == goal,
        })
        .collect();
    ExplicitGraph::new(nodes, 0, edges).expect("generated graph is well formed")
}

/// Every node reachable from the start and able to reach a goal.
pub fn is_connected<C: Scalar>(graph: &ExplicitGraph<C>) -> bool {
    let mut seen = vec![false; graph.len()];
    let mut stack = vec![graph.start_node()];
    seen[graph.start_node()] = true;
    while let Some(u) = stack.pop() {
        for &(v, _) in graph.out_edges(u) {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.iter().all(|&s| s) && graph_h_star(graph).iter().all(Option::is_some)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeuristicMode {
    /// `h = alpha * h*`, `alpha` in `[0, 1]`.
    Consistent(f64),
    /// `h` uniform in `[0, h*]` per node.
    AdmissibleRandom,
}

/// Replaces the graph's heuristic with one derived from exact `h*`.
/// Nodes that cannot reach a goal get the dead-end sentinel.
pub fn attach_heuristic<C: Scalar>(graph: &ExplicitGraph<C>, mode: HeuristicMode, seed: u64) -> ExplicitGraph<C> {
    let h_star = graph_h_star(graph);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h: Vec<Option<C>> = h_star
        .iter()
        .enumerate()
        .map(|(i, hs)| {
            let hs = (*hs)?;
            if graph.nodes()[i].is_goal {
                return Some(C::zero());
            }
            Some(match mode {
                HeuristicMode::Consistent(alpha) => {
                    assert!((0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1]");
                    C::from_f64_exact(alpha).expect("alpha is representable") * hs
                }
                HeuristicMode::AdmissibleRandom => {
                    let u: f64 = rng.gen_range(0.0..=1.0);
                    C::from_f64_exact(u * hs.as_f64()).expect("finite").min_of(hs)
                }
            })
        })
        .collect();
    graph
        .clone()
        .with_heuristic(&h)
        .expect("derived heuristic keeps the graph valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str =
        "node s h=2 start\nnode a h=1\nnode t h=0 goal\nedge s a cost=1\nedge a t cost=2\nedge s t cost=5\n";

    #[test]
    fn optimal_cost_on_chain() {
        let g = ExplicitGraph::<f64>::parse(CHAIN).unwrap();
        let r = optimal_cost(&g, Limits::default()).unwrap();
        assert_eq!(r.optimal_cost, 3.0);
    }

    #[test]
    fn optimal_cost_errors() {
        let g = ExplicitGraph::<f64>::parse("node s h=0 start\nnode t h=0 goal\n").unwrap();
        assert!(matches!(
            optimal_cost(&g, Limits::default()),
            Err(OracleError::Unreachable { .. })
        ));
        let g = ExplicitGraph::<f64>::parse(CHAIN).unwrap();
        assert!(matches!(
            optimal_cost(&g, Limits::expansions(1)),
            Err(OracleError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn admissibility_checks() {
        let g = ExplicitGraph::<f64>::parse(CHAIN).unwrap();
        let zero = g.clone().with_heuristic(&[Some(0.0); 3]).unwrap();
        assert!(check_admissible(&zero, 100).is_ok());
        let exact = g.clone().with_heuristic(&[Some(3.0), Some(2.0), Some(0.0)]).unwrap();
        assert!(check_admissible(&exact, 100).is_ok());
        let over = g.with_heuristic(&[Some(3.0), Some(3.0), Some(0.0)]).unwrap();
        match check_admissible(&over, 100) {
            Verdict::Violations(v) => {
                assert_eq!(v.len(), 1);
                assert_eq!((v[0].state, v[0].h, v[0].h_star), (1, 3.0, 2.0));
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn too_large_is_unverifiable() {
        let g = ExplicitGraph::<f64>::parse(CHAIN).unwrap();
        assert!(matches!(check_admissible(&g, 2), Verdict::Unverifiable { .. }));
        assert!(matches!(check_consistent(&g, 2), Verdict::Unverifiable { .. }));
    }

    #[test]
    fn consistency_checks() {
        let g = ExplicitGraph::<f64>::parse(CHAIN).unwrap();
        assert!(check_consistent(&g, 100).is_ok());
        // h(s) = 3 > c(s,a) + h(a) = 1 + 1.
        let bad = g.with_heuristic(&[Some(3.0), Some(1.0), Some(0.0)]).unwrap();
        match check_consistent(&bad, 100) {
            Verdict::Violations(v) => {
                assert_eq!(v.len(), 1);
                assert_eq!((v[0].from, v[0].to), (0, 1));
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn two_node_random_graph_has_one_edge() {
        let g = random_graph(7, 2, 0.9, 1..=5);
        assert_eq!(g.edges().len(), 1);
        assert_eq!((g.edges()[0].from, g.edges()[0].to), (0, 1));
    }

    #[test]
    fn random_graph_is_deterministic() {
        assert_eq!(random_graph(11, 20, 0.2, 0..=9), random_graph(11, 20, 0.2, 0..=9));
        assert_ne!(random_graph(11, 20, 0.2, 0..=9), random_graph(12, 20, 0.2, 0..=9));
    }

    #[test]
    fn scaled_perfect_heuristic_is_consistent() {
        let g = random_graph(3, 30, 0.15, 0..=10);
        for alpha in [0.0, 0.3, 0.5, 1.0] {
            let h = attach_heuristic(&g, HeuristicMode::Consistent(alpha), 0);
            assert!(check_consistent(&h, 1000).is_ok(), "alpha = {alpha}");
        }
    }

    #[test]
    fn unreachable_nodes_get_sentinel() {
        let g = ExplicitGraph::<f64>::parse(
            "node s h=0 start\nnode d h=0\nnode t h=0 goal\nedge s d cost=1\nedge s t cost=1\n",
        )
        .unwrap();
        let h = attach_heuristic(&g, HeuristicMode::Consistent(1.0), 0);
        assert_eq!(h.h(1), None);
        assert_eq!(h.h(0), Some(1.0));
    }
}
