//! The Open list.
//!
//! Two lazily-invalidated binary heaps over the same set of nodes: the
//! primary heap orders by `(fW, h, seq)` and drives expansion, the secondary
//! heap orders by `g` and answers `g_min` queries for the bound trace. An
//! entry is live only while its `seq` matches the node's current entry, so
//! re-pushing a node (cheaper path found) supersedes the old entries in both
//! heaps without a decrease-key.

use crate::scalar::{cmp_scalar, Scalar};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Index of a node in the engine's node table.
pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpenEntry<C> {
    pub f_w: C,
    pub h: C,
    pub g: C,
    /// Monotone insertion counter; last tie-break (FIFO).
    pub seq: u64,
    pub node: NodeId,
}

impl<C: Scalar> OpenEntry<C> {
    /// Expansion priority: smaller `fW`, then smaller `h`, then older entry.
    fn priority_cmp(&self, other: &Self) -> Ordering {
        cmp_scalar(self.f_w, other.f_w)
            .then_with(|| cmp_scalar(self.h, other.h))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

// BinaryHeap is a max-heap; both wrappers invert their key.
struct ByPriority<C>(OpenEntry<C>);

impl<C: Scalar> PartialEq for ByPriority<C> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<C: Scalar> Eq for ByPriority<C> {}
impl<C: Scalar> PartialOrd for ByPriority<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<C: Scalar> Ord for ByPriority<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.priority_cmp(&self.0)
    }
}

struct ByG<C> {
    g: C,
    seq: u64,
    node: NodeId,
}

impl<C: Scalar> PartialEq for ByG<C> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<C: Scalar> Eq for ByG<C> {}
impl<C: Scalar> PartialOrd for ByG<C> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<C: Scalar> Ord for ByG<C> {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_scalar(other.g, self.g).then_with(|| other.seq.cmp(&self.seq))
    }
}

pub struct OpenList<C> {
    by_priority: BinaryHeap<ByPriority<C>>,
    by_g: BinaryHeap<ByG<C>>,
    /// Live entry per node, indexed by `NodeId`.
    live: Vec<Option<OpenEntry<C>>>,
    live_count: usize,
    next_seq: u64,
}

impl<C: Scalar> Default for OpenList<C> {
    fn default() -> Self {
        Self::new()
    }
}

impl<C: Scalar> OpenList<C> {
    pub fn new() -> Self {
        OpenList {
            by_priority: BinaryHeap::new(),
            by_g: BinaryHeap::new(),
            live: Vec::new(),
            live_count: 0,
            next_seq: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.live_count
    }

    pub fn is_empty(&self) -> bool {
        self.live_count == 0
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.live.get(node).is_some_and(Option::is_some)
    }

    /// Inserts `node`, replacing any entry it already has. Returns the entry's `seq`.
    pub fn push(&mut self, node: NodeId, g: C, h: C, f_w: C) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        if node >= self.live.len() {
            self.live.resize(node + 1, None);
        }
        let entry = OpenEntry { f_w, h, g, seq, node };
        if self.live[node].replace(entry).is_none() {
            self.live_count += 1;
        }
        self.by_priority.push(ByPriority(entry));
        self.by_g.push(ByG { g, seq, node });
        seq
    }

    fn is_live(&self, node: NodeId, seq: u64) -> bool {
        matches!(self.live.get(node), Some(Some(e)) if e.seq == seq)
    }

    /// Removes and returns the live entry with minimum `(fW, h, seq)`.
    pub fn pop_min(&mut self) -> Option<OpenEntry<C>> {
        while let Some(ByPriority(entry)) = self.by_priority.pop() {
            if self.is_live(entry.node, entry.seq) {
                self.live[entry.node] = None;
                self.live_count -= 1;
                return Some(entry);
            }
        }
        None
    }

    /// The entry `pop_min` would return, without removing it.
    pub fn peek_min(&mut self) -> Option<OpenEntry<C>> {
        while let Some(ByPriority(entry)) = self.by_priority.peek() {
            if self.is_live(entry.node, entry.seq) {
                return Some(*entry);
            }
            self.by_priority.pop();
        }
        None
    }

    /// Minimum `g` over live entries.
    pub fn min_g(&mut self) -> Option<C> {
        while let Some(top) = self.by_g.peek() {
            if self.is_live(top.node, top.seq) {
                return Some(top.g);
            }
            self.by_g.pop();
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = &OpenEntry<C>> {
        self.live.iter().filter_map(Option::as_ref)
    }
}
