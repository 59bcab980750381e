//! Periodic temporal graphs: construction, the `.ptg` text format, random
//! instances, classification, and the encoding of classical game variants.
//!
//! A periodic graph is a cyclic sequence of `p` snapshots over the vertex set
//! `0..n`. In round `t` the active snapshot is `t mod p`. Every snapshot must be
//! *playable*: each vertex has at least one outgoing edge, because both players
//! are obliged to move every round. Waiting is modelled by a self-loop.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arena::Arena;

/// Errors raised while building or parsing a [`PeriodicGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: vertex {vertex} out of range 0..{n}")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: duplicate snapshot header `s {index}`")]
    DuplicateSnapshot { line: usize, index: usize },
    #[error("missing snapshot {index}")]
    MissingSnapshot { index: usize },
    #[error("duplicate edge ({u},{v}) in snapshot {snapshot}")]
    DuplicateEdge { snapshot: usize, u: usize, v: usize },
    #[error("unplayable: vertex {vertex} has no outgoing edge in snapshot {snapshot}")]
    Unplayable { vertex: usize, snapshot: usize },
    #[error("graph must have at least one vertex and one snapshot")]
    Empty,
}

/// A directed graph on `0..n`, used for footprints and as input to
/// [`encode_standard`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl StaticGraph {
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange {
                        line: 0,
                        vertex: x,
                        n,
                    });
                }
            }
            if !set.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { snapshot: 0, u, v });
            }
        }
        Ok(StaticGraph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }
}

/// Structural flags of a periodic graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphClass {
    pub reflexive: bool,
    pub symmetric: bool,
    pub sourceless: bool,
    pub temporally_connected: bool,
}

/// A playable periodic temporal graph.
///
/// Snapshots are kept as sorted, duplicate-free edge lists; a value of this
/// type always satisfies the playability invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicGraph {
    n: usize,
    snapshots: Vec<Vec<(usize, usize)>>,
}

impl PeriodicGraph {
    /// Builds a graph from explicit snapshot edge lists.
    ///
    /// Rejects empty graphs, out-of-range endpoints, repeated edges within a
    /// snapshot, and any snapshot in which some vertex has no outgoing edge.
    pub fn new(n: usize, snapshots: Vec<Vec<(usize, usize)>>) -> Result<Self, GraphError> {
        if n == 0 || snapshots.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut sorted = Vec::with_capacity(snapshots.len());
        for (i, mut edges) in snapshots.into_iter().enumerate() {
            for &(u, v) in &edges {
                for x in [u, v] {
                    if x >= n {
                        return Err(GraphError::VertexOutOfRange {
                            line: 0,
                            vertex: x,
                            n,
                        });
                    }
                }
            }
            edges.sort_unstable();
            if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge {
                    snapshot: i,
                    u: w[0].0,
                    v: w[0].1,
                });
            }
            sorted.push(edges);
        }
        let g = PeriodicGraph {
            n,
            snapshots: sorted,
        };
        g.check_playable()?;
        Ok(g)
    }

    fn check_playable(&self) -> Result<(), GraphError> {
        for (i, edges) in self.snapshots.iter().enumerate() {
            let mut has_out = vec![false; self.n];
            for &(u, _) in edges {
                has_out[u] = true;
            }
            if let Some(vertex) = has_out.iter().position(|&b| !b) {
                return Err(GraphError::Unplayable {
                    vertex,
                    snapshot: i,
                });
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The period.
    pub fn p(&self) -> usize {
        self.snapshots.len()
    }

    /// Sorted edge list of snapshot `i`.
    pub fn snapshot(&self, i: usize) -> &[(usize, usize)] {
        &self.snapshots[i]
    }

    pub fn snapshots(&self) -> &[Vec<(usize, usize)>] {
        &self.snapshots
    }

    pub fn has_edge(&self, i: usize, u: usize, v: usize) -> bool {
        self.snapshots[i].binary_search(&(u, v)).is_ok()
    }

    /// Total edge count over one period.
    pub fn edge_count(&self) -> usize {
        self.snapshots.iter().map(Vec::len).sum()
    }

    /// Parses the `.ptg` text format.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        parse_ptg(text.as_bytes())
    }

    /// Emits the `.ptg` text format: `e` lines only, sorted by `(u, v)`.
    pub fn to_ptg(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ptg 1");
        let _ = writeln!(out, "n {}", self.n);
        let _ = writeln!(out, "p {}", self.p());
        for (i, edges) in self.snapshots.iter().enumerate() {
            let _ = writeln!(out, "s {i}");
            for (u, v) in edges {
                let _ = writeln!(out, "e {u} {v}");
            }
        }
        out
    }
}

/// Parses `.ptg` bytes into a [`PeriodicGraph`].
///
/// Grammar, one directive per line: `ptg 1`, `n <int>`, `p <int>`, then for
/// each snapshot `i = 0..p-1` in order a header `s <i>` followed by any number
/// of `e <u> <v>`, `u <a> <b>` (both directions, `a != b`) and `reflexive`
/// (all self-loops). `#` comments and blank lines are ignored.
pub fn parse_ptg(text: &[u8]) -> Result<PeriodicGraph, GraphError> {
    let text = std::str::from_utf8(text).map_err(|e| GraphError::Syntax {
        line: 0,
        message: format!("input is not UTF-8: {e}"),
    })?;

    let mut header_seen = false;
    let mut n: Option<usize> = None;
    let mut p: Option<usize> = None;
    let mut snaps: Vec<BTreeSet<(usize, usize)>> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| GraphError::Syntax { line, message };
        let mut toks = content.split_whitespace();
        let kw = toks.next().unwrap_or("");
        let args: Vec<&str> = toks.collect();
        let ints = |want: usize| -> Result<Vec<usize>, GraphError> {
            if args.len() != want {
                return Err(syntax(format!(
                    "`{kw}` expects {want} argument(s), got {}",
                    args.len()
                )));
            }
            args.iter()
                .map(|a| {
                    a.parse::<usize>()
                        .map_err(|_| syntax(format!("invalid integer `{a}`")))
                })
                .collect()
        };

        if !header_seen {
            if kw == "ptg" && ints(1)? == [1] {
                header_seen = true;
                continue;
            }
            return Err(syntax("expected `ptg 1` header".into()));
        }

        match kw {
            "n" => {
                if n.is_some() || p.is_some() {
                    return Err(syntax("`n` must appear once, before `p`".into()));
                }
                let v = ints(1)?[0];
                if v == 0 {
                    return Err(syntax("`n` must be positive".into()));
                }
                n = Some(v);
            }
            "p" => {
                if n.is_none() || p.is_some() {
                    return Err(syntax("`p` must appear once, after `n`".into()));
                }
                let v = ints(1)?[0];
                if v == 0 {
                    return Err(syntax("`p` must be positive".into()));
                }
                p = Some(v);
            }
            "s" => {
                let period = p.ok_or_else(|| syntax("snapshot before `p`".into()))?;
                let idx = ints(1)?[0];
                if idx < snaps.len() {
                    return Err(GraphError::DuplicateSnapshot { line, index: idx });
                }
                if idx >= period {
                    return Err(syntax(format!("snapshot index {idx} outside 0..{period}")));
                }
                if idx != snaps.len() {
                    return Err(GraphError::MissingSnapshot { index: snaps.len() });
                }
                snaps.push(BTreeSet::new());
            }
            "e" | "u" => {
                let nv = n.expect("p implies n");
                let cur = snaps
                    .len()
                    .checked_sub(1)
                    .ok_or_else(|| syntax(format!("`{kw}` before any `s` header")))?;
                let uv = ints(2)?;
                let (a, b) = (uv[0], uv[1]);
                for x in [a, b] {
                    if x >= nv {
                        return Err(GraphError::VertexOutOfRange {
                            line,
                            vertex: x,
                            n: nv,
                        });
                    }
                }
                let set = &mut snaps[cur];
                if kw == "u" {
                    if a == b {
                        return Err(syntax("`u` needs two distinct endpoints".into()));
                    }
                    for (x, y) in [(a, b), (b, a)] {
                        if !set.insert((x, y)) {
                            return Err(GraphError::DuplicateEdge {
                                snapshot: cur,
                                u: x,
                                v: y,
                            });
                        }
                    }
                } else if !set.insert((a, b)) {
                    return Err(GraphError::DuplicateEdge {
                        snapshot: cur,
                        u: a,
                        v: b,
                    });
                }
            }
            "reflexive" => {
                ints(0)?;
                let nv = n.expect("p implies n");
                let cur = snaps
                    .len()
                    .checked_sub(1)
                    .ok_or_else(|| syntax("`reflexive` before any `s` header".into()))?;
                snaps[cur].extend((0..nv).map(|v| (v, v)));
            }
            other => return Err(syntax(format!("unknown directive `{other}`"))),
        }
    }

    if !header_seen {
        return Err(GraphError::Syntax {
            line: 0,
            message: "empty input".into(),
        });
    }
    let n = n.ok_or(GraphError::Syntax {
        line: 0,
        message: "missing `n`".into(),
    })?;
    let p = p.ok_or(GraphError::Syntax {
        line: 0,
        message: "missing `p`".into(),
    })?;
    if snaps.len() < p {
        return Err(GraphError::MissingSnapshot { index: snaps.len() });
    }
    PeriodicGraph::new(
        n,
        snaps.into_iter().map(|s| s.into_iter().collect()).collect(),
    )
}

/// Union of all snapshot edge sets.
pub fn footprint(g: &PeriodicGraph) -> StaticGraph {
    StaticGraph {
        n: g.n,
        edges: g.snapshots.iter().flatten().copied().collect(),
    }
}

/// Computes the [`GraphClass`] of `g`.
///
/// Temporal connectivity is decided by a search in the arena from every
/// temporal node `(t, u)`: `v` is reached from `u` at time `t` if any temporal
/// copy of `v` is reachable. A vertex reaches itself trivially.
pub fn classify(g: &PeriodicGraph) -> GraphClass {
    let n = g.n;
    let reflexive = (0..g.p()).all(|i| (0..n).all(|v| g.has_edge(i, v, v)));
    let symmetric = g
        .snapshots
        .iter()
        .enumerate()
        .all(|(i, es)| es.iter().all(|&(u, v)| g.has_edge(i, v, u)));
    let sourceless = g.snapshots.iter().all(|es| {
        let mut has_in = vec![false; n];
        for &(_, v) in es {
            has_in[v] = true;
        }
        has_in.into_iter().all(|b| b)
    });

    let arena = Arena::build(g);
    let temporally_connected = (0..g.p()).all(|t| {
        (0..n).all(|u| {
            let reach = arena.reachable_from(&[(t, u)]);
            let mut seen = vec![false; n];
            for node in reach.iter() {
                seen[node % n] = true;
            }
            seen.into_iter().all(|b| b)
        })
    });

    GraphClass {
        reflexive,
        symmetric,
        sourceless,
        temporally_connected,
    }
}

/// Encodes an undirected static graph as a restless periodic graph.
///
/// Each pair `{u, v}` in `g` becomes the two arcs `(u, v)` and `(v, u)` in
/// every one of the `copies` snapshots; `allow_wait` adds all self-loops.
pub fn encode_standard(
    g: &StaticGraph,
    allow_wait: bool,
    copies: usize,
) -> Result<PeriodicGraph, GraphError> {
    let mut edges = BTreeSet::new();
    for &(u, v) in &g.edges {
        edges.insert((u, v));
        edges.insert((v, u));
    }
    if allow_wait {
        edges.extend((0..g.n).map(|v| (v, v)));
    }
    let snap: Vec<(usize, usize)> = edges.into_iter().collect();
    PeriodicGraph::new(g.n, vec![snap; copies])
}

/// Options for [`gen_random`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenFlags {
    pub reflexive: bool,
    pub symmetric: bool,
}

/// Generates a random playable periodic graph.
///
/// In every snapshot each vertex first receives one uniformly random
/// out-edge, then `extra` further distinct random out-edges (capped by the
/// vertices still available). `symmetric` then mirrors every edge and
/// `reflexive` adds all self-loops. The result is a pure function of the
/// arguments.
pub fn gen_random(n: usize, p: usize, extra: usize, seed: u64, flags: GenFlags) -> PeriodicGraph {
    assert!(n >= 1 && p >= 1, "n and p must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut snaps = Vec::with_capacity(p);
    for _ in 0..p {
        let mut set = BTreeSet::new();
        for u in 0..n {
            let first = rng.random_range(0..n);
            set.insert((u, first));
            let others: Vec<usize> = (0..n).filter(|&v| v != first).collect();
            let take = extra.min(others.len());
            for i in index::sample(&mut rng, others.len(), take) {
                set.insert((u, others[i]));
            }
        }
        if flags.symmetric {
            let mirrored: Vec<_> = set.iter().map(|&(u, v)| (v, u)).collect();
            set.extend(mirrored);
        }
        if flags.reflexive {
            set.extend((0..n).map(|v| (v, v)));
        }
        snaps.push(set.into_iter().collect());
    }
    PeriodicGraph::new(n, snaps).expect("generator output is playable by construction")
}
