//! Several cops: the k-arena and its maximal augmentation.
//!
//! With `k` cops a configuration is `(t, X, y)` for a cop multiset `X` and a
//! robber vertex `y`. The k-arena is a hypergraph whose hyperedge
//! `((t,X),(t+1,⟨y⟩))` records that this configuration is copwin. Base
//! hyperedges are the immediate captures `y ∈ Γ_t(X)`; a new one is added
//! when the cops have a synchronized move `X → Z` such that every robber
//! escape from `y` lands on `Z` or on a head of `(t+1, Z)`. A robber on any
//! cop counts as caught, so `X*` (the support of `X`) is always covered.
//!
//! The closure runs as a plain worklist. For `k = 1` it produces the same
//! edge sets as [`crate::solver`].

use std::collections::VecDeque;

use thiserror::Error;

use crate::arena::Arena;
use crate::bitset::BitSet;
use crate::multiset::{synchronized_images, Budget, BudgetExceeded, CopMultiset, MultisetIndex};

/// `⋃_{x ∈ X} Γ_t(x)`.
pub fn k_out_neighborhood(d: &Arena, t: usize, x: &CopMultiset) -> BitSet {
    let mut out = BitSet::new(d.n());
    for &v in x.elems() {
        out.union_with(d.out_set(t, v));
    }
    out
}

/// Synchronized moves between multisets, by rank, in both directions.
struct Moves {
    images: Vec<Vec<usize>>,
    preimages: Vec<Vec<usize>>,
}

impl Moves {
    fn build(d: &Arena, index: &MultisetIndex) -> Moves {
        let m = index.len();
        let mut images = Vec::with_capacity(d.p() * m);
        let mut preimages = vec![Vec::new(); d.p() * m];
        for t in 0..d.p() {
            for c in 0..m {
                let img: Vec<usize> = synchronized_images(d, t, index.unrank(c).elems())
                    .iter()
                    .map(|z| index.rank_of(z))
                    .collect();
                for &z in &img {
                    preimages[t * m + z].push(c);
                }
                images.push(img);
            }
        }
        Moves { images, preimages }
    }
}

/// Heads of the hyperedges leaving each `(t, X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KHyperedgeSet {
    n: usize,
    p: usize,
    index: MultisetIndex,
    heads: Vec<BitSet>,
    supports: Vec<BitSet>,
    added: usize,
}

impl KHyperedgeSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.index.k()
    }

    pub fn index(&self) -> &MultisetIndex {
        &self.index
    }

    /// Heads `y` of hyperedges `((t,X),(t+1,⟨y⟩))`.
    pub fn heads(&self, t: usize, x: &CopMultiset) -> &BitSet {
        &self.heads[t * self.index.len() + self.index.rank_of(x)]
    }

    pub fn has(&self, t: usize, x: &CopMultiset, y: usize) -> bool {
        self.heads(t, x).contains(y)
    }

    /// Heads plus the cops' own vertices cover `V`.
    pub fn is_k_star(&self, t: usize, x: &CopMultiset) -> bool {
        self.covers_all(t * self.index.len() + self.index.rank_of(x))
    }

    fn covers_all(&self, i: usize) -> bool {
        let mut s = self.heads[i].clone();
        s.union_with(&self.supports[i % self.index.len()]);
        s.is_full()
    }

    /// Total number of hyperedges, diagonal base ones included.
    pub fn edge_count(&self) -> usize {
        self.heads.iter().map(BitSet::count).sum()
    }

    /// Hyperedges added on top of the base k-arena.
    pub fn added(&self) -> usize {
        self.added
    }

    /// All `(t, X, y)` with `y ∉ X`, in `(t, rank(X), y)` order.
    pub fn off_diagonal(&self) -> Vec<(usize, CopMultiset, usize)> {
        let m = self.index.len();
        let mut out = Vec::new();
        for (i, h) in self.heads.iter().enumerate() {
            let x = self.index.unrank(i % m);
            for y in h.iter().filter(|&y| !x.contains(y)) {
                out.push((i / m, x.clone(), y));
            }
        }
        out
    }

    fn addable(&self, d: &Arena, moves: &Moves, t: usize, c: usize, y: usize) -> bool {
        let m = self.index.len();
        let next = d.next(t);
        let esc = d.out_set(t, y);
        moves.images[t * m + c].iter().any(|&z| {
            let (h, s) = (&self.heads[next * m + z], &self.supports[z]);
            esc.iter().all(|w| h.contains(w) || s.contains(w))
        })
    }
}

/// Runs the hyperedge closure for `k` cops to exhaustion.
pub fn compute_max_k_augmented(
    d: &Arena,
    k: usize,
    budget: Budget,
) -> Result<KHyperedgeSet, BudgetExceeded> {
    let index = MultisetIndex::new(d.n(), k, budget)?;
    budget.check((d.p() * d.n()) as u128 * index.len() as u128)?;
    let moves = Moves::build(d, &index);
    Ok(closure(d, index, &moves))
}

fn closure(d: &Arena, index: MultisetIndex, moves: &Moves) -> KHyperedgeSet {
    let (n, p, m) = (d.n(), d.p(), index.len());
    let supports: Vec<BitSet> = (0..m)
        .map(|c| BitSet::from_indices(n, index.unrank(c).elems().iter().copied()))
        .collect();
    let heads = (0..p * m)
        .map(|i| k_out_neighborhood(d, i / m, &index.unrank(i % m)))
        .collect();
    let mut set = KHyperedgeSet {
        n,
        p,
        index,
        heads,
        supports,
        added: 0,
    };

    let mut work = VecDeque::new();
    let add = |set: &mut KHyperedgeSet,
               work: &mut VecDeque<(usize, usize, usize)>,
               t: usize,
               c: usize,
               y: usize| {
        if set.heads[t * m + c].insert(y) {
            set.added += 1;
            work.push_back((t, c, y));
        }
    };
    for t in 0..p {
        for c in 0..m {
            for y in 0..n {
                let fresh = !set.supports[c].contains(y) && !set.heads[t * m + c].contains(y);
                if fresh && set.addable(d, moves, t, c, y) {
                    add(&mut set, &mut work, t, c, y);
                }
            }
        }
    }
    // a new head w of (s, Z) can only help (s-1, X, y) with Z an image of X
    // and w an escape of y
    while let Some((s, z, w)) = work.pop_front() {
        let t = d.prev(s);
        for &c in &moves.preimages[t * m + z] {
            for &y in d.in_list(s, w) {
                let fresh = !set.supports[c].contains(y) && !set.heads[t * m + c].contains(y);
                if fresh && set.addable(d, moves, t, c, y) {
                    add(&mut set, &mut work, t, c, y);
                }
            }
        }
    }
    set
}

/// A hyperedge the closure missed, if any.
pub fn find_k_augmentation(d: &Arena, set: &KHyperedgeSet) -> Option<(usize, CopMultiset, usize)> {
    let moves = Moves::build(d, &set.index);
    let m = set.index.len();
    for t in 0..set.p {
        for c in 0..m {
            for y in 0..set.n {
                if !set.supports[c].contains(y)
                    && !set.heads[t * m + c].contains(y)
                    && set.addable(d, &moves, t, c, y)
                {
                    return Some((t, set.index.unrank(c), y));
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KWitness {
    pub t: usize,
    pub star: CopMultiset,
    pub anchor: CopMultiset,
    /// One journey per cop, all of the same length `T` with `T ≡ t (mod p)`.
    pub journeys: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KVerdict {
    pub k: usize,
    pub copwin: bool,
    pub witness: Option<KWitness>,
    pub edges: usize,
    pub added: usize,
}

/// Copwin for `k` cops iff the maximal k-arena has a k-star reachable from
/// slice 0 by synchronized moves.
pub fn decide_k_copwin(d: &Arena, k: usize, budget: Budget) -> Result<KVerdict, BudgetExceeded> {
    let index = MultisetIndex::new(d.n(), k, budget)?;
    budget.check((d.p() * d.n()) as u128 * index.len() as u128)?;
    let moves = Moves::build(d, &index);
    let set = closure(d, index, &moves);
    let m = set.index.len();

    // breadth-first over (slice, multiset); parents keep the first discovery
    let mut parent: Vec<Option<usize>> = vec![None; d.p() * m];
    let mut seen = BitSet::new(d.p() * m);
    let mut queue: VecDeque<usize> = (0..m).collect();
    for c in 0..m {
        seen.insert(c);
    }
    while let Some(i) = queue.pop_front() {
        let (t, c) = (i / m, i % m);
        let next = d.next(t);
        for &z in &moves.images[t * m + c] {
            let j = next * m + z;
            if seen.insert(j) {
                parent[j] = Some(i);
                queue.push_back(j);
            }
        }
    }

    let star = (0..d.p() * m).find(|&i| seen.contains(i) && set.covers_all(i));
    let witness = star.map(|i| {
        let mut path = vec![i];
        while let Some(par) = parent[*path.last().unwrap()] {
            path.push(par);
        }
        path.reverse();
        let stages: Vec<CopMultiset> = path.iter().map(|&j| set.index.unrank(j % m)).collect();
        KWitness {
            t: i / m,
            star: set.index.unrank(i % m),
            anchor: stages[0].clone(),
            journeys: split_journeys(d, &stages),
        }
    });
    Ok(KVerdict {
        k,
        copwin: witness.is_some(),
        witness,
        edges: set.edge_count(),
        added: set.added,
    })
}

/// Assigns the multiset path `X_0 .. X_T` to individual cops, one matching of
/// current positions onto the next multiset per round.
fn split_journeys(d: &Arena, stages: &[CopMultiset]) -> Vec<Vec<usize>> {
    let mut journeys: Vec<Vec<usize>> = stages[0].elems().iter().map(|&v| vec![v]).collect();
    for (t, next) in stages[1..].iter().enumerate() {
        let cur: Vec<usize> = journeys.iter().map(|j| *j.last().unwrap()).collect();
        let mut used = vec![false; next.k()];
        let mut pick = vec![0; cur.len()];
        let ok = assign(d, t % d.p(), &cur, next.elems(), 0, &mut used, &mut pick);
        assert!(ok, "consecutive stages are synchronized images");
        for (j, &slot) in journeys.iter_mut().zip(&pick) {
            j.push(next.elems()[slot]);
        }
    }
    journeys
}

fn assign(
    d: &Arena,
    t: usize,
    cur: &[usize],
    next: &[usize],
    i: usize,
    used: &mut [bool],
    pick: &mut [usize],
) -> bool {
    if i == cur.len() {
        return true;
    }
    for s in 0..next.len() {
        if !used[s] && d.has_edge(t, cur[i], next[s]) {
            used[s] = true;
            pick[i] = s;
            if assign(d, t, cur, next, i + 1, used, pick) {
                return true;
            }
            used[s] = false;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("budget exceeded at k = {k} (decided up to k = {decided})")]
pub struct CopnumberError {
    pub k: usize,
    pub decided: usize,
    #[source]
    pub source: BudgetExceeded,
}

/// Smallest `k <= k_max` for which `d` is k-copwin.
pub fn copnumber(d: &Arena, k_max: usize, budget: Budget) -> Result<Option<usize>, CopnumberError> {
    for k in 1..=k_max {
        let v = decide_k_copwin(d, k, budget).map_err(|source| CopnumberError {
            k,
            decided: k - 1,
            source,
        })?;
        if v.copwin {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{gen_random, GenFlags};
    use crate::oracle::copwin_configs;
    use crate::solver::compute_max_augmented;

    fn ms(v: &[usize]) -> CopMultiset {
        CopMultiset::new(v.to_vec())
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn neighborhoods() {
        let dicyc = Arena::build(&fixtures::dicyc(3));
        assert_eq!(
            k_out_neighborhood(&dicyc, 0, &ms(&[0, 1]))
                .iter()
                .collect::<Vec<_>>(),
            vec![1, 2]
        );
        let rc4 = Arena::build(&fixtures::rc(4));
        assert!(k_out_neighborhood(&rc4, 0, &ms(&[0, 2])).is_full());
        let rp3 = Arena::build(&fixtures::rp3());
        assert!(k_out_neighborhood(&rp3, 0, &ms(&[1, 0])).is_full());
    }

    #[test]
    fn two_stars() {
        let rc4 = Arena::build(&fixtures::rc(4));
        let set = compute_max_k_augmented(&rc4, 2, b()).unwrap();
        assert!(set.is_k_star(0, &ms(&[0, 2])));
        let dicyc = Arena::build(&fixtures::dicyc(3));
        let set = compute_max_k_augmented(&dicyc, 2, b()).unwrap();
        for u in 0..3 {
            assert!(set.is_k_star(0, &ms(&[u, (u + 1) % 3])));
        }
    }

    #[test]
    fn verdicts() {
        let rc4 = Arena::build(&fixtures::rc(4));
        assert!(!decide_k_copwin(&rc4, 1, b()).unwrap().copwin);
        let two = decide_k_copwin(&rc4, 2, b()).unwrap();
        assert!(two.copwin);
        assert!(
            decide_k_copwin(&Arena::build(&fixtures::dicyc(3)), 2, b())
                .unwrap()
                .copwin
        );
    }

    #[test]
    fn copnumbers() {
        assert_eq!(
            copnumber(&Arena::build(&fixtures::rp3()), 3, b()),
            Ok(Some(1))
        );
        assert_eq!(
            copnumber(&Arena::build(&fixtures::rc(4)), 3, b()),
            Ok(Some(2))
        );
        assert_eq!(
            copnumber(&Arena::build(&fixtures::dicyc(3)), 3, b()),
            Ok(Some(2))
        );
        assert_eq!(copnumber(&Arena::build(&fixtures::rc(4)), 1, b()), Ok(None));
        let err = copnumber(&Arena::build(&fixtures::rc(6)), 3, Budget::new(100)).unwrap_err();
        assert_eq!((err.k, err.decided), (2, 1));
    }

    #[test]
    fn witness_journeys_are_synchronized() {
        for seed in 0..30u64 {
            let d = Arena::build(&gen_random(5, 3, 1, seed, GenFlags::default()));
            let v = decide_k_copwin(&d, 2, b()).unwrap();
            let Some(w) = v.witness else { continue };
            let len = w.journeys[0].len();
            assert_eq!((len - 1) % d.p(), w.t);
            let mut anchor: Vec<usize> = w.journeys.iter().map(|j| j[0]).collect();
            let mut star: Vec<usize> = w.journeys.iter().map(|j| j[len - 1]).collect();
            anchor.sort();
            star.sort();
            assert_eq!(anchor, w.anchor.elems());
            assert_eq!(star, w.star.elems());
            for j in &w.journeys {
                assert_eq!(j.len(), len);
                for (s, pair) in j.windows(2).enumerate() {
                    assert!(d.has_edge(s % d.p(), pair[0], pair[1]));
                }
            }
        }
    }

    #[test]
    fn one_cop_matches_solver() {
        for seed in 0..40u64 {
            let g = gen_random(
                2 + seed as usize % 5,
                1 + seed as usize % 3,
                seed as usize % 2,
                seed,
                GenFlags::default(),
            );
            let d = Arena::build(&g);
            let set = compute_max_k_augmented(&d, 1, b()).unwrap();
            let aug = compute_max_augmented(&d);
            for t in 0..d.p() {
                for x in 0..d.n() {
                    assert_eq!(
                        set.heads(t, &ms(&[x])),
                        aug.out_set(t, x),
                        "seed {seed} ({t},{x})"
                    );
                }
            }
        }
    }

    #[test]
    fn two_cops_match_oracle_and_are_maximal() {
        for seed in 0..25u64 {
            let g = gen_random(
                2 + seed as usize % 4,
                1 + seed as usize % 3,
                seed as usize % 2,
                seed,
                GenFlags::default(),
            );
            let d = Arena::build(&g);
            let set = compute_max_k_augmented(&d, 2, b()).unwrap();
            let tab = copwin_configs(&d, 2, b()).unwrap();
            assert_eq!(set.off_diagonal(), tab.off_diagonal_copwin(), "seed {seed}");
            assert_eq!(find_k_augmentation(&d, &set), None);
        }
    }

    #[test]
    fn budget_error() {
        let d = Arena::build(&fixtures::rc(7));
        assert!(compute_max_k_augmented(&d, 3, Budget::new(50)).is_err());
    }
}
