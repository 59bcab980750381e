//! The arena of a periodic graph.
//!
//! The arena folds a periodic graph into a static digraph on `Z_p × V`: the
//! edge `(u, v)` of snapshot `t` becomes the arc from temporal node `(t, u)` to
//! `(t+1 mod p, v)`. Journeys in the periodic graph are walks in the arena.
//!
//! Neighborhoods are stored in both directions as [`BitSet`]s (for subset
//! tests) and as sorted lists (for iteration).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::bitset::BitSet;
use crate::graph::PeriodicGraph;

/// A vertex `v` of slice `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemporalNode {
    pub t: usize,
    pub v: usize,
}

impl TemporalNode {
    pub fn new(t: usize, v: usize) -> Self {
        TemporalNode { t, v }
    }
}

impl fmt::Display for TemporalNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.t, self.v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    n: usize,
    p: usize,
    m: usize,
    out_sets: Vec<BitSet>,
    in_sets: Vec<BitSet>,
    out_lists: Vec<Vec<usize>>,
    in_lists: Vec<Vec<usize>>,
}

impl Arena {
    /// Builds the arena of `g` in `O(np + m)` (plus bitset allocation).
    pub fn build(g: &PeriodicGraph) -> Self {
        let (n, p) = (g.n(), g.p());
        let mut out_sets = vec![BitSet::new(n); n * p];
        let mut in_sets = vec![BitSet::new(n); n * p];
        let mut out_lists = vec![Vec::new(); n * p];
        let mut in_lists = vec![Vec::new(); n * p];
        for t in 0..p {
            let next = (t + 1) % p;
            // snapshot edges are sorted by (u, v), so lists come out sorted
            for &(u, v) in g.snapshot(t) {
                out_sets[t * n + u].insert(v);
                out_lists[t * n + u].push(v);
                in_sets[next * n + v].insert(u);
                in_lists[next * n + v].push(u);
            }
        }
        for l in in_lists.iter_mut() {
            l.sort_unstable();
        }
        Arena {
            n,
            p,
            m: g.edge_count(),
            out_sets,
            in_sets,
            out_lists,
            in_lists,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of arcs, `Σ_t |E_t|`.
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn next(&self, t: usize) -> usize {
        if t + 1 == self.p {
            0
        } else {
            t + 1
        }
    }

    #[inline]
    pub fn prev(&self, t: usize) -> usize {
        if t == 0 {
            self.p - 1
        } else {
            t - 1
        }
    }

    /// `Γ_t(u)`: the vertices `v` with `((t,u),(t+1,v))` an arc.
    #[inline]
    pub fn out_set(&self, t: usize, u: usize) -> &BitSet {
        &self.out_sets[t * self.n + u]
    }

    #[inline]
    pub fn out_list(&self, t: usize, u: usize) -> &[usize] {
        &self.out_lists[t * self.n + u]
    }

    /// `Γ^in_t(v)`: the vertices `u` with `((t-1,u),(t,v))` an arc.
    #[inline]
    pub fn in_set(&self, t: usize, v: usize) -> &BitSet {
        &self.in_sets[t * self.n + v]
    }

    #[inline]
    pub fn in_list(&self, t: usize, v: usize) -> &[usize] {
        &self.in_lists[t * self.n + v]
    }

    #[inline]
    pub fn has_edge(&self, t: usize, u: usize, v: usize) -> bool {
        self.out_set(t, u).contains(v)
    }

    /// True iff `Γ_t(u) = V`.
    pub fn is_star(&self, node: TemporalNode) -> bool {
        self.out_set(node.t, node.v).is_full()
    }

    /// Temporal nodes reachable from any of `sources` (each source included),
    /// as a mask indexed by `t * n + v`.
    pub fn reachable_from(&self, sources: &[(usize, usize)]) -> BitSet {
        let mut seen = BitSet::new(self.n * self.p);
        let mut queue = VecDeque::new();
        for &(t, v) in sources {
            if seen.insert(t * self.n + v) {
                queue.push_back((t, v));
            }
        }
        while let Some((t, u)) = queue.pop_front() {
            let next = self.next(t);
            for &v in self.out_list(t, u) {
                if seen.insert(next * self.n + v) {
                    queue.push_back((next, v));
                }
            }
        }
        seen
    }

    /// Anchored temporal nodes as a mask indexed by `t * n + v`.
    pub fn anchored_mask(&self) -> BitSet {
        let sources: Vec<_> = (0..self.n).map(|v| (0, v)).collect();
        self.reachable_from(&sources)
    }

    /// Temporal nodes reachable by a journey from slice 0 (slice-0 nodes
    /// included, by the empty journey).
    pub fn anchored_set(&self) -> BTreeSet<TemporalNode> {
        self.anchored_mask()
            .iter()
            .map(|i| TemporalNode::new(i / self.n, i % self.n))
            .collect()
    }

    /// A shortest journey from slice 0 to `target`, as the vertex sequence
    /// `v_0 .. v_T` with `T ≡ target.t (mod p)`.
    ///
    /// Breadth-first over the arena; sources and successors are visited in
    /// ascending vertex order so each node keeps its smallest BFS parent.
    pub fn journey_to(&self, target: TemporalNode) -> Option<Vec<usize>> {
        let idx = |t: usize, v: usize| t * self.n + v;
        let mut parent: Vec<Option<usize>> = vec![None; self.n * self.p];
        let mut seen = BitSet::new(self.n * self.p);
        let mut queue = VecDeque::new();
        for v in 0..self.n {
            seen.insert(idx(0, v));
            queue.push_back((0, v));
        }
        let goal = idx(target.t, target.v);
        while let Some((t, u)) = queue.pop_front() {
            if idx(t, u) == goal {
                break;
            }
            let next = self.next(t);
            for &v in self.out_list(t, u) {
                if seen.insert(idx(next, v)) {
                    parent[idx(next, v)] = Some(idx(t, u));
                    queue.push_back((next, v));
                }
            }
        }
        if !seen.contains(goal) {
            return None;
        }
        let mut path = vec![target.v];
        let mut cur = goal;
        while let Some(par) = parent[cur] {
            path.push(par % self.n);
            cur = par;
        }
        path.reverse();
        Some(path)
    }

    /// All `(corner, cover)` pairs: `(t,u)` is a temporal corner of
    /// `(t+1,v)` when `u != v` and `Γ_t(u) ⊆ Γ_{t+1}(v)`.
    pub fn temporal_corners(&self) -> Vec<(TemporalNode, TemporalNode)> {
        let mut out = Vec::new();
        for t in 0..self.p {
            let next = self.next(t);
            for u in 0..self.n {
                for v in 0..self.n {
                    if u != v && self.out_set(t, u).is_subset(self.out_set(next, v)) {
                        out.push((TemporalNode::new(t, u), TemporalNode::new(next, v)));
                    }
                }
            }
        }
        out
    }
}
