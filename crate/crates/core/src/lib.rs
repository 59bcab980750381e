//! Cops and robber on periodic temporal graphs.
//!
//! A periodic graph repeats a fixed sequence of `p` snapshots on one vertex
//! set. One cop and one robber alternate moves along the edges of the
//! current snapshot, cop first, and neither may stay put unless the snapshot
//! has a self-loop. The cop wins if the two ever share a vertex.
//!
//! [`solver`] decides the game in `O(pn² + nm)` by growing the maximal
//! augmented arena and looking for an anchored star, and [`strategy`] turns
//! its bookkeeping into a playable cop strategy. [`oracle`] is an independent
//! brute-force fixpoint used to validate both, and [`kcop`] extends the
//! construction to several cops.
//!
//! ```
//! use tempcops::{decide_copwin, Arena, PeriodicGraph};
//!
//! let g = PeriodicGraph::parse("ptg 1\nn 3\np 1\ns 0\nreflexive\nu 0 1\nu 1 2\n").unwrap();
//! let verdict = decide_copwin(&Arena::build(&g), true);
//! assert!(verdict.copwin);
//! assert_eq!(verdict.witness.unwrap().star.v, 1);
//! ```

pub mod arena;
pub mod bitset;
pub mod fixtures;
pub mod graph;
pub mod kcop;
pub mod multiset;
pub mod oracle;
pub mod solver;
pub mod strategy;

pub use arena::{Arena, TemporalNode};
pub use bitset::BitSet;
pub use graph::{
    classify, encode_standard, footprint, gen_random, parse_ptg, GenFlags, GraphClass, GraphError,
    PeriodicGraph, StaticGraph,
};
pub use kcop::{
    compute_max_k_augmented, copnumber, decide_k_copwin, k_out_neighborhood, KHyperedgeSet,
    KVerdict, KWitness,
};
pub use multiset::{enumerate_multisets, Budget, BudgetExceeded, CopMultiset, MultisetIndex};
pub use oracle::{adversarial_move, copwin_configs, oracle_decide, ConfigTable};
pub use solver::{
    compute_max_augmented, decide_copwin, solve, AugmentedArena, SolveOptions, SolverState,
    Verdict, Witness,
};
pub use strategy::{extract_strategy, play, Strategy, StrategyError, Transcript};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/periodic-graphs.md")]
    mod periodic_graphs {}
    #[doc = include_str!("../../../book/src/arenas.md")]
    mod arenas {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/strategies.md")]
    mod strategies {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/multiple-cops.md")]
    mod multiple_cops {}
}
