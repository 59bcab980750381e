//! Brute-force decision procedure on the configuration graph.
//!
//! A configuration `(t, C, r)` is the state at the start of round `t`: cops
//! on the multiset `C`, robber on `r`. Move sets depend only on `t mod p`,
//! so the copwin predicate is a function of the slice and the table is
//! folded over `Z_p`; the infinite unrolled game is never built.
//!
//! The copwin set is the least fixpoint of
//!
//! ```text
//! W_0     = { (t,C,r) : r ∈ C }
//! W_{j+1} = W_j ∪ { (t,C,r) : ∃ C' image of C,
//!                     r ∈ C'  or  ∀ r' ∈ Γ_t(r): (t+1, C', r') ∈ W_j }
//! ```
//!
//! computed round by round, each round reading only the previous one.
//! This is deliberately slow and simple; it exists to check the solver.

use crate::arena::Arena;
use crate::bitset::BitSet;
use crate::multiset::{synchronized_images, CopMultiset, MultisetIndex};
pub use crate::multiset::{Budget, BudgetExceeded};

/// Rank of configurations the cops never win.
pub const NEVER: u32 = u32::MAX;

/// Copwin flags and fixpoint ranks for every folded configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigTable {
    n: usize,
    p: usize,
    k: usize,
    index: MultisetIndex,
    copwin: BitSet,
    rank: Vec<u32>,
    rounds: u32,
}

impl ConfigTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn index(&self) -> &MultisetIndex {
        &self.index
    }

    /// Number of fixpoint rounds that added something.
    pub fn rounds(&self) -> u32 {
        self.rounds
    }

    fn slot(&self, t: usize, cops: &[usize], r: usize) -> usize {
        let c = if cops.windows(2).all(|w| w[0] <= w[1]) {
            self.index.rank(cops)
        } else {
            self.index.rank_of(&CopMultiset::new(cops.to_vec()))
        };
        self.slot_ranked(t, c, r)
    }

    #[inline]
    fn slot_ranked(&self, t: usize, c: usize, r: usize) -> usize {
        (t * self.index.len() + c) * self.n + r
    }

    /// Whether the cops on `cops` (any order) win against a robber on `r` at
    /// the start of round `t`.
    pub fn is_copwin(&self, t: usize, cops: &[usize], r: usize) -> bool {
        self.copwin.contains(self.slot(t % self.p, cops, r))
    }

    /// Round of the fixpoint in which the configuration became copwin, or
    /// [`NEVER`].
    pub fn rank(&self, t: usize, cops: &[usize], r: usize) -> u32 {
        self.rank[self.slot(t % self.p, cops, r)]
    }

    /// All copwin configurations `(t, C, r)` with `r ∉ C`, in
    /// `(t, rank(C), r)` order.
    pub fn off_diagonal_copwin(&self) -> Vec<(usize, CopMultiset, usize)> {
        let m = self.index.len();
        self.copwin
            .iter()
            .filter_map(|i| {
                let r = i % self.n;
                let c = (i / self.n) % m;
                let t = i / (self.n * m);
                let cops = self.index.unrank(c);
                (!cops.contains(r)).then_some((t, cops, r))
            })
            .collect()
    }
}

/// The least fixpoint of copwin configurations for `k` cops on `d`.
pub fn copwin_configs(d: &Arena, k: usize, budget: Budget) -> Result<ConfigTable, BudgetExceeded> {
    let (n, p) = (d.n(), d.p());
    let index = MultisetIndex::new(n, k, budget)?;
    let m = index.len();
    budget.check((p * n) as u128 * m as u128)?;

    // image lists by (t, rank), as ranks
    let mut images: Vec<Vec<usize>> = Vec::with_capacity(p * m);
    let mut members: Vec<BitSet> = Vec::with_capacity(m);
    for c in 0..m {
        members.push(BitSet::from_indices(
            n,
            index.unrank(c).elems().iter().copied(),
        ));
    }
    for t in 0..p {
        for c in 0..m {
            let cops = index.unrank(c);
            images.push(
                synchronized_images(d, t, cops.elems())
                    .iter()
                    .map(|z| index.rank_of(z))
                    .collect(),
            );
        }
    }

    let mut tab = ConfigTable {
        n,
        p,
        k,
        index,
        copwin: BitSet::new(p * m * n),
        rank: vec![NEVER; p * m * n],
        rounds: 0,
    };
    for t in 0..p {
        for (c, mem) in members.iter().enumerate() {
            for r in mem.iter() {
                let i = tab.slot_ranked(t, c, r);
                tab.copwin.insert(i);
                tab.rank[i] = 0;
            }
        }
    }

    loop {
        let round = tab.rounds + 1;
        let mut fresh = Vec::new();
        for t in 0..p {
            let next = d.next(t);
            for c in 0..m {
                for r in 0..n {
                    if tab.copwin.contains(tab.slot_ranked(t, c, r)) {
                        continue;
                    }
                    let wins = images[t * m + c].iter().any(|&z| {
                        members[z].contains(r)
                            || d.out_list(t, r)
                                .iter()
                                .all(|&r2| tab.copwin.contains(tab.slot_ranked(next, z, r2)))
                    });
                    if wins {
                        fresh.push(tab.slot_ranked(t, c, r));
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        for i in fresh {
            tab.copwin.insert(i);
            tab.rank[i] = round;
        }
        tab.rounds = round;
    }
    Ok(tab)
}

/// Whether some slice-0 placement of `k` cops wins against every robber start.
pub fn oracle_decide(d: &Arena, k: usize, budget: Budget) -> Result<bool, BudgetExceeded> {
    let tab = copwin_configs(d, k, budget)?;
    Ok(table_decides_copwin(&tab))
}

/// [`oracle_decide`] on an already computed table.
pub fn table_decides_copwin(tab: &ConfigTable) -> bool {
    (0..tab.index.len()).any(|c| (0..tab.n).all(|r| tab.copwin.contains(tab.slot_ranked(0, c, r))))
}

/// The robber's reply in round `t` after the cops have moved to
/// `cops_after`: a move to a configuration the cops do not win if there is
/// one, otherwise the move of largest rank. Ties go to the smallest vertex.
pub fn adversarial_move(
    d: &Arena,
    tab: &ConfigTable,
    t: usize,
    cops_after: &[usize],
    r: usize,
) -> usize {
    let t = t % tab.p;
    let next = d.next(t);
    let moves = d.out_list(t, r);
    if let Some(&escape) = moves
        .iter()
        .find(|&&r2| !tab.is_copwin(next, cops_after, r2))
    {
        return escape;
    }
    let mut best = moves[0];
    for &r2 in &moves[1..] {
        if tab.rank(next, cops_after, r2) > tab.rank(next, cops_after, best) {
            best = r2;
        }
    }
    best
}
