//! Single-vehicle Euclidean routing: leave the depot (city 0), visit every
//! city once, return to the depot. The heuristic is the weight of a minimum
//! spanning tree over the current city, the depot and the unvisited cities.
//!
//! Distances are rounded to a multiple of `2^-24`, so a tour cost is exact
//! in `f64` whichever order its legs are summed in (for coordinates below
//! `2^24`).

use super::{tokens, ParseError};
use crate::scalar::Scalar;
use crate::search::StateSpace;
use std::marker::PhantomData;

pub const MAX_CITIES: usize = 32;

const DISTANCE_SCALE: f64 = (1u64 << 24) as f64;

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingInstance {
    /// City 0 is the depot.
    pub points: Vec<(f64, f64)>,
}

impl RoutingInstance {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, String> {
        if points.is_empty() || points.len() > MAX_CITIES {
            return Err(format!("{} cities is not supported (1..={MAX_CITIES})", points.len()));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err("city coordinates must be finite".to_string());
        }
        Ok(RoutingInstance { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let (pa, pb) = (self.points[a], self.points[b]);
        ((pa.0 - pb.0).hypot(pa.1 - pb.1) * DISTANCE_SCALE).round() / DISTANCE_SCALE
    }

    fn all_visited(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.len());
        for (x, y) in &self.points {
            out.push_str(&format!("{x} {y}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RoutingState {
    pub current: u8,
    /// Bit `i` set when city `i` has been visited; the depot bit is always set.
    pub visited: u32,
}

/// Successors with their Euclidean costs.
pub fn routing_successors(inst: &RoutingInstance, s: RoutingState) -> Vec<(RoutingState, f64)> {
    let cur = s.current as usize;
    let all = inst.all_visited();
    if s.visited == all {
        if cur == 0 {
            return Vec::new();
        }
        return vec![(
            RoutingState {
                current: 0,
                visited: s.visited,
            },
            inst.distance(cur, 0),
        )];
    }
    (1..inst.len())
        .filter(|c| s.visited & (1 << c) == 0)
        .map(|c| {
            (
                RoutingState {
                    current: c as u8,
                    visited: s.visited | (1 << c),
                },
                inst.distance(cur, c),
            )
        })
        .collect()
}

/// MST weight over `{current, depot} ∪ unvisited` (Prim, O(k²)).
pub fn mst_heuristic(inst: &RoutingInstance, s: RoutingState) -> f64 {
    let mut members: Vec<usize> = vec![s.current as usize];
    if s.current != 0 {
        members.push(0);
    }
    members.extend((1..inst.len()).filter(|c| s.visited & (1 << c) == 0));
    mst_weight(inst, &members)
}

pub(crate) fn mst_weight(inst: &RoutingInstance, members: &[usize]) -> f64 {
    if members.len() <= 1 {
        return 0.0;
    }
    let k = members.len();
    let mut in_tree = vec![false; k];
    let mut best = vec![f64::INFINITY; k];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..k {
        let (next, _) =
            best.iter()
                .enumerate()
                .filter(|(i, _)| !in_tree[*i])
                .fold(
                    (usize::MAX, f64::INFINITY),
                    |acc, (i, &d)| if d < acc.1 { (i, d) } else { acc },
                );
        in_tree[next] = true;
        total += best[next];
        for j in 0..k {
            if !in_tree[j] {
                let d = inst.distance(members[next], members[j]);
                if d < best[j] {
                    best[j] = d;
                }
            }
        }
    }
    total
}

#[derive(Debug, Clone)]
pub struct RoutingProblem<C = f64> {
    instance: RoutingInstance,
    _cost: PhantomData<C>,
}

impl<C: Scalar> RoutingProblem<C> {
    pub fn new(instance: RoutingInstance) -> Self {
        RoutingProblem {
            instance,
            _cost: PhantomData,
        }
    }

    pub fn instance(&self) -> &RoutingInstance {
        &self.instance
    }
}

impl<C: Scalar> StateSpace for RoutingProblem<C> {
    type State = RoutingState;
    type Cost = C;

    fn start(&self) -> RoutingState {
        RoutingState { current: 0, visited: 1 }
    }

    fn is_goal(&self, s: &RoutingState) -> bool {
        s.current == 0 && s.visited == self.instance.all_visited()
    }

    fn successors(&self, s: &RoutingState, out: &mut Vec<(RoutingState, C)>) {
        out.extend(
            routing_successors(&self.instance, *s)
                .into_iter()
                .map(|(t, c)| (t, C::from_f64_exact(c).expect("finite distance"))),
        );
    }

    fn heuristic(&self, s: &RoutingState) -> C {
        if self.is_goal(s) {
            return C::zero();
        }
        C::from_f64_exact(mst_heuristic(&self.instance, *s)).expect("finite distance")
    }
}

// Header line, declared count and the points read so far.
type Block = (usize, usize, Vec<(f64, f64)>);

/// Parses one or more `n=<count>` blocks of `<x> <y>` lines.
pub fn parse_routing_instances(text: &str) -> Result<Vec<RoutingInstance>, ParseError> {
    let mut out = Vec::new();
    let mut current: Option<Block> = None;
    let close = |block: Block, out: &mut Vec<RoutingInstance>| {
        let (line, n, points) = block;
        if points.len() != n {
            return Err(ParseError::new(
                line,
                1,
                format!("declared n={n} but found {} cities", points.len()),
            ));
        }
        out.push(RoutingInstance::new(points).map_err(|m| ParseError::new(line, 1, m))?);
        Ok(())
    };
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        let toks = tokens(line);
        let Some(&(col, first)) = toks.first() else {
            continue;
        };
        if let Some(count) = first.strip_prefix("n=") {
            if let Some(block) = current.take() {
                close(block, &mut out)?;
            }
            let n: usize = count
                .parse()
                .map_err(|_| ParseError::new(ln, col + 2, format!("invalid city count `{count}`")))?;
            current = Some((ln, n, Vec::with_capacity(n)));
            continue;
        }
        let Some(block) = current.as_mut() else {
            return Err(ParseError::new(ln, col, "expected `n=<count>` header"));
        };
        if toks.len() != 2 {
            return Err(ParseError::new(ln, col, "expected `<x> <y>`"));
        }
        let coord = |(c, t): (usize, &str)| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError::new(ln, c, format!("invalid coordinate `{t}`")))
        };
        block.2.push((coord(toks[0])?, coord(toks[1])?));
    }
    if let Some(block) = current.take() {
        close(block, &mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> RoutingInstance {
        RoutingInstance::new(vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap()
    }

    #[test]
    fn all_visited_returns_to_depot() {
        let inst = square();
        let s = RoutingState {
            current: 2,
            visited: 0b1111,
        };
        let succ = routing_successors(&inst, s);
        assert_eq!(succ.len(), 1);
        assert_eq!(succ[0].0.current, 0);
        assert!((succ[0].1 - 2f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn one_successor_per_unvisited_city() {
        let inst = square();
        let s = RoutingState { current: 0, visited: 1 };
        assert_eq!(routing_successors(&inst, s).len(), 3);
        let s = RoutingState {
            current: 1,
            visited: 0b011,
        };
        assert_eq!(routing_successors(&inst, s).len(), 2);
    }

    #[test]
    fn distances_are_symmetric() {
        let inst = square();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(inst.distance(a, b), inst.distance(b, a));
            }
        }
    }

    #[test]
    fn mst_zero_at_depot_with_nothing_left() {
        let inst = square();
        let s = RoutingState {
            current: 0,
            visited: 0b1111,
        };
        assert_eq!(mst_heuristic(&inst, s), 0.0);
    }

    #[test]
    fn mst_on_unit_square_from_depot() {
        // Three unit edges span the square.
        let inst = square();
        let s = RoutingState { current: 0, visited: 1 };
        assert!((mst_heuristic(&inst, s) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_city_instance_starts_at_goal() {
        let p = RoutingProblem::<f64>::new(RoutingInstance::new(vec![(0.5, 0.5)]).unwrap());
        assert!(p.is_goal(&p.start()));
    }

    #[test]
    fn parses_blocks() {
        let text = "n=2\n0 0\n3 4\nn=1\n0.5 0.5\n";
        let v = parse_routing_instances(text).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].distance(0, 1), 5.0);
        assert_eq!(parse_routing_instances(&v[0].to_text()).unwrap()[0], v[0]);
        let e = parse_routing_instances("n=3\n0 0\n").unwrap_err();
        assert!(e.message.contains("declared n=3"));
        let e = parse_routing_instances("0 0\n").unwrap_err();
        assert_eq!(e.line, 1);
    }
}
