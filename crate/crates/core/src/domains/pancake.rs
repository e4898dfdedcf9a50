//! Pancake puzzle with the GAP heuristic and its weakened GAP-k variants.
//!
//! A stack of N <= 16 pancakes is stored top-first, four bits per pancake,
//! holding `size - 1`. Flipping the top `k` pancakes costs 1; the goal is
//! `[1, 2, ..., N]` with N resting on the plate.

use super::{parse_permutation_lines, ParseError};
use crate::scalar::Scalar;
use crate::search::StateSpace;
use std::fmt;
use std::marker::PhantomData;

pub const MAX_PANCAKES: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PancakeState(u64);

impl PancakeState {
    pub fn from_stack(stack: &[u8]) -> Result<Self, String> {
        let n = stack.len();
        if !(1..=MAX_PANCAKES).contains(&n) {
            return Err(format!("stack of {n} pancakes is not supported (1..={MAX_PANCAKES})"));
        }
        let mut seen = vec![false; n + 1];
        let mut packed = 0u64;
        for (i, &p) in stack.iter().enumerate() {
            let p = p as usize;
            if p == 0 || p > n || seen[p] {
                return Err(format!("{stack:?} is not a permutation of 1..={n}"));
            }
            seen[p] = true;
            packed |= ((p - 1) as u64) << (4 * i);
        }
        Ok(PancakeState(packed))
    }

    pub fn sorted(n: usize) -> Self {
        let stack: Vec<u8> = (1..=n as u8).collect();
        PancakeState::from_stack(&stack).expect("identity is a permutation")
    }

    /// Pancake at position `i` (0 = top).
    #[inline]
    pub fn at(self, i: usize) -> u8 {
        ((self.0 >> (4 * i)) & 0xF) as u8 + 1
    }

    pub fn stack(self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// Reverses the top `k` pancakes.
    pub fn flip(self, k: usize) -> Self {
        let mut out = self.0;
        for i in 0..k {
            let j = k - 1 - i;
            let v = (self.0 >> (4 * j)) & 0xF;
            out = (out & !(0xF << (4 * i))) | (v << (4 * i));
        }
        PancakeState(out)
    }
}

impl fmt::Debug for PancakeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PancakeState({:#x})", self.0)
    }
}

/// All prefix flips of length 2..=N, each at unit cost.
pub fn pancake_successors(n: usize, s: PancakeState) -> Vec<PancakeState> {
    (2..=n).map(|k| s.flip(k)).collect()
}

/// GAP-k: adjacent pairs (the bottom pancake paired with the plate, size
/// N+1) that differ by more than one, ignoring pairs that involve a pancake
/// of size <= k. `k = 0` is plain GAP.
pub fn gap_k(n: usize, s: PancakeState, k: u8) -> u32 {
    let mut gaps = 0;
    for j in 0..n {
        let a = s.at(j);
        let b = if j + 1 < n { s.at(j + 1) } else { n as u8 + 1 };
        if a <= k || b <= k {
            continue;
        }
        if a.abs_diff(b) > 1 {
            gaps += 1;
        }
    }
    gaps
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapHeuristic {
    /// Pancakes of size <= `ignore` are skipped; 0 is plain GAP.
    pub ignore: u8,
}

impl GapHeuristic {
    pub const GAP: GapHeuristic = GapHeuristic { ignore: 0 };

    pub fn name(self) -> String {
        match self.ignore {
            0 => "gap".to_string(),
            k => format!("gap{k}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PancakeProblem<C = f64> {
    n: usize,
    start: PancakeState,
    goal: PancakeState,
    heuristic: GapHeuristic,
    _cost: PhantomData<C>,
}

impl<C: Scalar> PancakeProblem<C> {
    pub fn new(stack: &[u8], heuristic: GapHeuristic) -> Result<Self, String> {
        let start = PancakeState::from_stack(stack)?;
        Ok(PancakeProblem {
            n: stack.len(),
            start,
            goal: PancakeState::sorted(stack.len()),
            heuristic,
            _cost: PhantomData,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }
}

impl<C: Scalar> StateSpace for PancakeProblem<C> {
    type State = PancakeState;
    type Cost = C;

    fn start(&self) -> PancakeState {
        self.start
    }

    fn is_goal(&self, s: &PancakeState) -> bool {
        *s == self.goal
    }

    fn successors(&self, s: &PancakeState, out: &mut Vec<(PancakeState, C)>) {
        out.extend((2..=self.n).map(|k| (s.flip(k), C::one())));
    }

    fn heuristic(&self, s: &PancakeState) -> C {
        C::from_u32(gap_k(self.n, *s, self.heuristic.ignore)).expect("small integer")
    }
}

pub fn parse_pancake_instances(text: &str) -> Result<Vec<Vec<u8>>, ParseError> {
    let lines = parse_permutation_lines(text)?;
    for (i, stack) in lines.iter().enumerate() {
        PancakeState::from_stack(stack).map_err(|m| ParseError::new(i + 1, 1, m))?;
    }
    Ok(lines)
}

pub fn format_pancake_instance(stack: &[u8]) -> String {
    stack.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(v: &[u8]) -> PancakeState {
        PancakeState::from_stack(v).unwrap()
    }

    #[test]
    fn three_pancake_successors() {
        let succ: Vec<Vec<u8>> = pancake_successors(3, st(&[1, 2, 3]))
            .into_iter()
            .map(|s| s.stack(3))
            .collect();
        assert_eq!(succ, vec![vec![2, 1, 3], vec![3, 2, 1]]);
    }

    #[test]
    fn two_pancakes_have_one_successor() {
        assert_eq!(pancake_successors(2, st(&[2, 1])).len(), 1);
    }

    #[test]
    fn flip_is_an_involution() {
        let s = st(&[5, 3, 1, 2, 4, 7, 6]);
        for k in 2..=7 {
            assert_eq!(s.flip(k).flip(k), s);
        }
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gap_k(6, PancakeState::sorted(6), 0), 0);
        assert_eq!(gap_k(6, PancakeState::sorted(6), 2), 0);
        // Pairs (2,4) (4,1) (1,3) (3,plate=5): all four are gaps.
        let s = st(&[2, 4, 1, 3]);
        assert_eq!(gap_k(4, s, 0), 4);
        // GAP-1 drops (4,1) and (1,3).
        assert_eq!(gap_k(4, s, 1), 2);
        // GAP-2 also drops (2,4).
        assert_eq!(gap_k(4, s, 2), 1);
    }

    #[test]
    fn bottom_pancake_against_plate() {
        // [2,1,3]: (2,1) adjacent, (1,3) gap, (3,plate) adjacent.
        assert_eq!(gap_k(3, st(&[2, 1, 3]), 0), 1);
        // [1,3,2]: (1,3) gap, (3,2) adjacent, (2,plate=4) gap.
        assert_eq!(gap_k(3, st(&[1, 3, 2]), 0), 2);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(PancakeState::from_stack(&[1, 1, 2]).is_err());
        assert!(PancakeState::from_stack(&[0, 1]).is_err());
        assert!(parse_pancake_instances("1 2 4\n").is_err());
    }
}
