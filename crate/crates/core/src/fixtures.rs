//! Small named instances used throughout the tests and the guide.

use crate::graph::{encode_standard, PeriodicGraph, StaticGraph};

fn build(n: usize, snaps: Vec<Vec<(usize, usize)>>) -> PeriodicGraph {
    PeriodicGraph::new(n, snaps).expect("fixture is playable")
}

/// Two vertices that must swap every round.
pub fn swap2() -> PeriodicGraph {
    build(2, vec![vec![(0, 1), (1, 0)]])
}

/// Reflexive undirected path `0 - 1 - 2`.
pub fn rp3() -> PeriodicGraph {
    reflexive_static(3, &[(0, 1), (1, 2)])
}

/// Reflexive complete graph on two vertices.
pub fn rk2() -> PeriodicGraph {
    reflexive_static(2, &[(0, 1)])
}

/// Reflexive undirected cycle on `n >= 3` vertices.
pub fn rc(n: usize) -> PeriodicGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    reflexive_static(n, &edges)
}

/// Directed cycle `0 -> 1 -> .. -> n-1 -> 0` without loops.
pub fn dicyc(n: usize) -> PeriodicGraph {
    build(n, vec![(0..n).map(|i| (i, (i + 1) % n)).collect()])
}

/// Period-2 graph alternating a swap and a pause.
pub fn per2() -> PeriodicGraph {
    build(2, vec![vec![(0, 1), (1, 0)], vec![(0, 0), (1, 1)]])
}

/// Period-2 graph whose snapshots are all disconnected.
pub fn per_disc() -> PeriodicGraph {
    build(
        3,
        vec![vec![(0, 1), (1, 0), (2, 2)], vec![(1, 2), (2, 1), (0, 0)]],
    )
}

/// One vertex with a self-loop.
pub fn single() -> PeriodicGraph {
    build(1, vec![vec![(0, 0)]])
}

/// Encodes an undirected static graph with waiting allowed, `p = 1`.
pub fn reflexive_static(n: usize, edges: &[(usize, usize)]) -> PeriodicGraph {
    let g = StaticGraph::new(n, edges.iter().copied()).expect("fixture edges in range");
    encode_standard(&g, true, 1).expect("reflexive graphs are playable")
}
