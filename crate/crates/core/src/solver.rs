//! Construction of the maximal augmented arena and the copwin decision.
//!
//! An *augmented arena* adds *shadow edges* to the arena: an arc
//! `((t,x),(t+1,y))` is a shadow edge when the configuration "cop on `x`,
//! robber on `y`, round `t`" is winning for the cop. Base arcs qualify because
//! the cop captures by moving onto the robber.
//!
//! `(t,u)` is a *shadow corner* of `(t+1,v)` when every robber move from `u`
//! lands either on `v` or on a vertex `w` with `((t+1,v),(t+2,w))` already a
//! shadow edge. A cop that can step from `x` to such a `v` while the robber
//! sits on `u` therefore wins, so `((t,x),(t+1,u))` is a shadow edge too.
//! Closing under this rule yields the maximal augmented arena `A*`, whose
//! off-diagonal edges are exactly the copwin configurations. The graph is
//! copwin iff `A*` has an anchored star.
//!
//! The closure is computed incrementally. For every `(t,u,v)` the solver keeps
//! the set of robber escapes from `u` not yet covered by `(t+1,v)` (the *DIF
//! core*) and its size. Committing a shadow edge `((t,x),(t+1,y))` can only
//! cover the escape `y` in the cells `(t-1,z,x)` with `z` an in-neighbor of
//! `(t,y)`; a cell whose size drops to zero is a new shadow corner, and the
//! edges it implies are queued. Each cell update and each corner scan happens
//! at most once per (edge, in-neighbor) pair, which gives `O(pn² + nm)` work.
//!
//! Diagonal configurations `(t,x,x)` count as captured: an escape onto the
//! cover vertex itself is pre-covered, stars get their own vertex for free,
//! and diagonal shadow edges are never stored.

use std::collections::VecDeque;

use crate::arena::{Arena, TemporalNode};
use crate::bitset::{words_for, BitSet};

const NO_RHO: u32 = u32::MAX;

/// A shadow edge `((t,x),(t+1,y))`, i.e. the configuration `(t,x,y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShadowEdge {
    pub t: usize,
    pub x: usize,
    pub y: usize,
}

/// An arena together with its recorded and committed shadow edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedArena {
    base: Arena,
    recorded: Vec<BitSet>,
    committed: Vec<BitSet>,
}

impl AugmentedArena {
    /// The trivial augmentation: base arcs only.
    pub fn from_base(base: Arena) -> Self {
        let sets: Vec<BitSet> = (0..base.p())
            .flat_map(|t| (0..base.n()).map(move |x| (t, x)))
            .map(|(t, x)| base.out_set(t, x).clone())
            .collect();
        AugmentedArena {
            recorded: sets.clone(),
            committed: sets,
            base,
        }
    }

    pub fn base(&self) -> &Arena {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn p(&self) -> usize {
        self.base.p()
    }

    /// `Γ_t(x, A)`: heads of committed shadow edges out of `(t,x)`.
    #[inline]
    pub fn out_set(&self, t: usize, x: usize) -> &BitSet {
        &self.committed[t * self.n() + x]
    }

    /// Committed edge test (diagonals are implicit and report `false` unless
    /// they are base self-loops).
    #[inline]
    pub fn has_edge(&self, t: usize, x: usize, y: usize) -> bool {
        self.out_set(t, x).contains(y)
    }

    /// True if the edge is committed or waiting in the solver queue.
    pub fn is_recorded(&self, t: usize, x: usize, y: usize) -> bool {
        self.recorded[t * self.n() + x].contains(y)
    }

    /// Committed edge count `|E(A)|`, base arcs included.
    pub fn edge_count(&self) -> usize {
        self.committed.iter().map(BitSet::count).sum()
    }

    /// Star test with the free diagonal: `Γ_t(v, A) ∪ {v} = V`.
    pub fn is_star(&self, node: TemporalNode) -> bool {
        let out = self.out_set(node.t, node.v);
        out.count() + usize::from(!out.contains(node.v)) == self.n()
    }

    /// Committed edges with `x != y`, sorted.
    pub fn off_diagonal_edges(&self) -> Vec<ShadowEdge> {
        let n = self.n();
        let mut out = Vec::new();
        for t in 0..self.p() {
            for x in 0..n {
                out.extend(
                    self.out_set(t, x)
                        .iter()
                        .filter(|&y| y != x)
                        .map(|y| ShadowEdge { t, x, y }),
                );
            }
        }
        out
    }

    /// `(t,u)` is a shadow corner of `(t+1,v)`: `Γ_t(u, D) ⊆ Γ_{t+1}(v, A) ∪ {v}`.
    pub fn is_shadow_corner(&self, t: usize, u: usize, v: usize) -> bool {
        let next = self.base.next(t);
        let cover = self.out_set(next, v);
        self.base
            .out_list(t, u)
            .iter()
            .all(|&w| w == v || cover.contains(w))
    }

    /// An absent off-diagonal edge `(t,x,y)` together with a move `z` of the
    /// cop that makes `(t,y)` a shadow corner of `(t+1,z)`, if one exists.
    /// `None` means the arena is closed, i.e. maximal.
    pub fn find_augmentation(&self) -> Option<(ShadowEdge, usize)> {
        let n = self.n();
        for t in 0..self.p() {
            for x in 0..n {
                for y in 0..n {
                    if x == y || self.has_edge(t, x, y) {
                        continue;
                    }
                    if let Some(&z) = self
                        .base
                        .out_list(t, x)
                        .iter()
                        .find(|&&z| self.is_shadow_corner(t, y, z))
                    {
                        return Some((ShadowEdge { t, x, y }, z));
                    }
                }
            }
        }
        None
    }

    fn commit(&mut self, e: ShadowEdge) -> bool {
        let n = self.n();
        self.committed[e.t * n + e.x].insert(e.y)
    }

    fn record(&mut self, e: ShadowEdge) -> bool {
        let n = self.n();
        self.recorded[e.t * n + e.x].insert(e.y)
    }
}

/// Work counters, one unit per elementary step of the algorithm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    /// DIF cells set up during initialization (one per `(t,u,v)` plus one
    /// per core position).
    pub init_cells: u64,
    /// In-neighbor visits while committing edges.
    pub dif_updates: u64,
    /// In-neighbor visits while turning new shadow corners into edges.
    pub corner_scans: u64,
    pub queue_pushes: u64,
    /// Star and anchoring checks.
    pub final_test_ops: u64,
}

impl OpCounters {
    pub fn total(&self) -> u64 {
        self.init_cells
            + self.dif_updates
            + self.corner_scans
            + self.queue_pushes
            + self.final_test_ops
    }

    /// `(name, value)` pairs in a fixed order, for reporting.
    pub fn named(&self) -> [(&'static str, u64); 6] {
        [
            ("init_cells", self.init_cells),
            ("dif_updates", self.dif_updates),
            ("corner_scans", self.corner_scans),
            ("queue_pushes", self.queue_pushes),
            ("final_test_ops", self.final_test_ops),
            ("op_total", self.total()),
        ]
    }
}

/// Incremental state of the shadow-edge closure.
#[derive(Debug, Clone)]
pub struct SolverState {
    aug: AugmentedArena,
    words: usize,
    dif: Vec<u64>,
    dif_size: Vec<u32>,
    sc: Vec<BitSet>,
    queue: VecDeque<ShadowEdge>,
    rho: Vec<u32>,
    degree: Vec<u32>,
    counters: OpCounters,
    iterations: usize,
}

impl SolverState {
    /// Sets up the DIF cores, marks every shadow corner of the bare arena and
    /// queues the shadow edges they imply.
    pub fn initialize(d: &Arena) -> Self {
        let (n, p) = (d.n(), d.p());
        let words = words_for(n);
        let aug = AugmentedArena::from_base(d.clone());
        let degree = (0..p * n)
            .map(|i| {
                let (t, x) = (i / n, i % n);
                let out = d.out_set(t, x);
                (out.count() + usize::from(!out.contains(x))) as u32
            })
            .collect();
        let mut rho = vec![NO_RHO; p * n * n];
        for t in 0..p {
            for x in 0..n {
                for &y in d.out_list(t, x) {
                    rho[(t * n + x) * n + y] = y as u32;
                }
            }
        }
        let mut st = SolverState {
            aug,
            words,
            dif: vec![0; p * n * n * words],
            dif_size: vec![0; p * n * n],
            sc: vec![BitSet::new(n); p * n],
            queue: VecDeque::new(),
            rho,
            degree,
            counters: OpCounters::default(),
            iterations: 0,
        };

        for t in 0..p {
            let next = d.next(t);
            for u in 0..n {
                for v in 0..n {
                    st.counters.init_cells += 1;
                    let cover = d.out_set(next, v);
                    let cell = st.cell(t, u, v);
                    let mut size = 0u32;
                    for &w in d.out_list(t, u) {
                        st.counters.init_cells += 1;
                        if w != v && !cover.contains(w) {
                            st.dif[cell * words + w / 64] |= 1 << (w % 64);
                            size += 1;
                        }
                    }
                    st.dif_size[cell] = size;
                    if size == 0 {
                        st.sc[t * n + u].insert(v);
                        st.enqueue_cover(t, u, v);
                    }
                }
            }
        }
        st
    }

    #[inline]
    fn cell(&self, t: usize, u: usize, v: usize) -> usize {
        let n = self.aug.n();
        (t * n + u) * n + v
    }

    /// `(t,u)` has just become a shadow corner of `(t+1,v)`: every
    /// in-neighbor `w` of `(t+1,v)` wins against a robber on `u` by moving to
    /// `v`.
    fn enqueue_cover(&mut self, t: usize, u: usize, v: usize) {
        let n = self.aug.n();
        let d = &self.aug.base;
        let next = d.next(t);
        let mut fresh = Vec::new();
        for &w in d.in_list(next, v) {
            self.counters.corner_scans += 1;
            if w != u && !self.aug.recorded[t * n + w].contains(u) {
                fresh.push(w);
            }
        }
        for w in fresh {
            let e = ShadowEdge { t, x: w, y: u };
            self.aug.record(e);
            self.rho[(t * n + w) * n + u] = v as u32;
            self.queue.push_back(e);
            self.counters.queue_pushes += 1;
        }
    }

    /// Pops and commits one queued shadow edge, updating DIF cells and
    /// queueing the edges implied by any new shadow corner. Returns `false`
    /// when the queue is empty.
    pub fn step(&mut self) -> bool {
        self.step_edge().is_some()
    }

    /// Like [`step`](Self::step), returning the committed edge.
    pub fn step_edge(&mut self) -> Option<ShadowEdge> {
        let e = self.queue.pop_front()?;
        let n = self.aug.n();
        let ShadowEdge { t, x, y } = e;
        let fresh = self.aug.commit(e);
        debug_assert!(fresh, "edge {e:?} committed twice");
        self.degree[t * n + x] += 1;
        self.iterations += 1;

        let tp = self.aug.base.prev(t);
        let words = self.words;
        for i in 0..self.aug.base.in_list(t, y).len() {
            let z = self.aug.base.in_list(t, y)[i];
            self.counters.dif_updates += 1;
            let cell = self.cell(tp, z, x);
            let word = &mut self.dif[cell * words + y / 64];
            let bit = 1u64 << (y % 64);
            if *word & bit != 0 {
                *word &= !bit;
                self.dif_size[cell] -= 1;
            }
            if self.dif_size[cell] == 0 && self.sc[tp * n + z].insert(x) {
                self.enqueue_cover(tp, z, x);
            }
        }
        Some(e)
    }

    /// Steps until the queue is empty.
    pub fn run(&mut self) {
        while self.step() {}
    }

    pub fn aug(&self) -> &AugmentedArena {
        &self.aug
    }

    pub fn into_aug(self) -> AugmentedArena {
        self.aug
    }

    pub fn arena(&self) -> &Arena {
        &self.aug.base
    }

    /// Number of uncovered escapes in DIF cell `(t,u,v)`.
    pub fn dif_size(&self, t: usize, u: usize, v: usize) -> usize {
        self.dif_size[self.cell(t, u, v)] as usize
    }

    /// Uncovered escapes of DIF cell `(t,u,v)`, ascending.
    pub fn dif_core_ones(&self, t: usize, u: usize, v: usize) -> Vec<usize> {
        let base = self.cell(t, u, v) * self.words;
        (0..self.aug.n())
            .filter(|&w| self.dif[base + w / 64] >> (w % 64) & 1 == 1)
            .collect()
    }

    /// Whether `(t,u)` has been marked as a shadow corner of `(t+1,v)`.
    pub fn is_marked_corner(&self, t: usize, u: usize, v: usize) -> bool {
        self.sc[t * self.aug.n() + u].contains(v)
    }

    pub fn queue(&self) -> impl Iterator<Item = &ShadowEdge> {
        self.queue.iter()
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    /// Recorded cop move for configuration `(t,x,y)`: the target `y` for base
    /// arcs, the cover found at discovery time for other shadow edges.
    pub fn rho(&self, t: usize, x: usize, y: usize) -> Option<usize> {
        let r = self.rho[self.cell(t, x, y)];
        (r != NO_RHO).then_some(r as usize)
    }

    /// `|Γ_t(x, A) ∪ {x}|` over committed edges.
    pub fn star_degree(&self, t: usize, x: usize) -> usize {
        self.degree[t * self.aug.n() + x] as usize
    }

    pub fn counters(&self) -> OpCounters {
        self.counters
    }

    /// Committed iterations so far.
    pub fn iterations(&self) -> usize {
        self.iterations
    }
}

/// Runs the closure to exhaustion and returns `A*`.
pub fn compute_max_augmented(d: &Arena) -> AugmentedArena {
    let mut st = SolverState::initialize(d);
    st.run();
    st.into_aug()
}

/// Knobs for [`solve`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Stop as soon as a committed edge completes an anchored star.
    pub early_stop: bool,
    /// Caller guarantees the graph is reflexive and temporally connected.
    /// Then every node is anchored and, once any star exists, every node of
    /// `A*` is a star, so the final test inspects `(0,0)` alone.
    pub reflexive_connected: bool,
}

/// A copwin certificate: the cop starts on `anchor`, follows `journey` to
/// the star, then pursues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub star: TemporalNode,
    pub anchor: usize,
    /// `v_0 = anchor, .., v_T = star.v` with `T ≡ star.t (mod p)`.
    pub journey: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveStats {
    pub iterations: usize,
    /// `|E(A)|` of the augmented arena at termination.
    pub edges: usize,
    pub base_edges: usize,
    pub early_stopped: bool,
    pub counters: OpCounters,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub copwin: bool,
    pub witness: Option<Witness>,
    pub stats: SolveStats,
}

/// Decides copwin, returning the verdict and the final solver state (whose
/// `rho` table drives strategy extraction).
pub fn solve(d: &Arena, opts: &SolveOptions) -> (Verdict, SolverState) {
    let (n, p) = (d.n(), d.p());
    let mut st = SolverState::initialize(d);
    let mut final_ops = 0u64;
    let anchored = if opts.reflexive_connected {
        BitSet::full(n * p)
    } else {
        final_ops += (n * p + d.m()) as u64;
        d.anchored_mask()
    };

    let mut star = None;
    let mut early_stopped = false;
    if opts.early_stop {
        for i in 0..n * p {
            final_ops += 1;
            if st.degree[i] as usize == n && anchored.contains(i) {
                star = Some(TemporalNode::new(i / n, i % n));
                break;
            }
        }
        while star.is_none() {
            let Some(e) = st.step_edge() else { break };
            final_ops += 1;
            if st.star_degree(e.t, e.x) == n && anchored.contains(e.t * n + e.x) {
                star = Some(TemporalNode::new(e.t, e.x));
            }
        }
        early_stopped = star.is_some() && st.queue_len() > 0;
    } else {
        st.run();
        if opts.reflexive_connected {
            final_ops += 1;
            if st.star_degree(0, 0) == n {
                star = Some(TemporalNode::new(0, 0));
            }
        } else {
            star = (0..n * p).find_map(|i| {
                final_ops += 1;
                (st.degree[i] as usize == n && anchored.contains(i))
                    .then(|| TemporalNode::new(i / n, i % n))
            });
        }
    }
    st.counters.final_test_ops += final_ops;

    let witness = star.map(|star| {
        let journey = d.journey_to(star).expect("star is anchored");
        Witness {
            star,
            anchor: journey[0],
            journey,
        }
    });
    let verdict = Verdict {
        copwin: witness.is_some(),
        witness,
        stats: SolveStats {
            iterations: st.iterations,
            edges: st.aug.edge_count(),
            base_edges: d.m(),
            early_stopped,
            counters: st.counters,
        },
    };
    (verdict, st)
}

/// Copwin iff the (possibly partial, with `early_stop`) augmented arena
/// contains an anchored star.
pub fn decide_copwin(d: &Arena, early_stop: bool) -> Verdict {
    solve(
        d,
        &SolveOptions {
            early_stop,
            reflexive_connected: false,
        },
    )
    .0
}
