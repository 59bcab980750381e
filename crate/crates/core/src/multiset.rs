//! Multisets of cop positions and their dense combinatorial ranking.
//!
//! `k` cops on `n` vertices are described by a sorted vertex sequence of
//! length `k`. There are `C(n+k-1, k)` of them; they are numbered in
//! lexicographic order so that per-multiset tables can be flat vectors.

use std::fmt;

use thiserror::Error;

use crate::arena::Arena;

/// Cap on the number of table entries a computation may allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_entries: u64,
}

impl Budget {
    pub const DEFAULT_ENTRIES: u64 = 1 << 28;

    pub fn new(max_entries: u64) -> Self {
        Budget { max_entries }
    }

    pub fn check(&self, needed: u128) -> Result<(), BudgetExceeded> {
        if needed > u128::from(self.max_entries) {
            Err(BudgetExceeded {
                needed,
                budget: self.max_entries,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Budget::DEFAULT_ENTRIES)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("state space of {needed} entries exceeds budget of {budget}")]
pub struct BudgetExceeded {
    pub needed: u128,
    pub budget: u64,
}

/// A sorted multiset of `k` vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CopMultiset(Vec<usize>);

impl CopMultiset {
    /// Canonicalizes by sorting.
    pub fn new(mut elems: Vec<usize>) -> Self {
        elems.sort_unstable();
        CopMultiset(elems)
    }

    /// Wordcount, i.e. number of cops.
    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn elems(&self) -> &[usize] {
        &self.0
    }

    /// Multiplicity of `x`.
    pub fn count(&self, x: usize) -> usize {
        self.0.iter().filter(|&&e| e == x).count()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// Distinct elements, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.0.clone();
        s.dedup();
        s
    }
}

impl fmt::Display for CopMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ">")
    }
}

/// `C(n+k-1, k)` without overflow, saturating at `u128::MAX`.
pub fn multiset_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return u128::from(k == 0);
    }
    // C(n-1+k, k) built incrementally: each prefix product is itself binomial
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        let num = (n as u128 - 1) + i;
        acc = match acc.checked_mul(num) {
            Some(v) => v / i,
            None => return u128::MAX,
        };
    }
    acc
}

/// Bijection between multisets of size `k` over `0..n` and `0..count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisetIndex {
    n: usize,
    k: usize,
    count: usize,
    /// `tail[len][lo]` = number of sorted sequences of length `len` with all
    /// values in `lo..n`.
    tail: Vec<Vec<usize>>,
}

impl MultisetIndex {
    pub fn new(n: usize, k: usize, budget: Budget) -> Result<Self, BudgetExceeded> {
        assert!(n >= 1 && k >= 1, "need at least one vertex and one cop");
        let total = multiset_count(n, k);
        budget.check(total)?;
        let mut tail = vec![vec![0usize; n + 1]; k + 1];
        tail[0].fill(1);
        for len in 1..=k {
            for lo in (0..n).rev() {
                // first element is lo, or everything is > lo
                tail[len][lo] = tail[len - 1][lo] + tail[len][lo + 1];
            }
        }
        Ok(MultisetIndex {
            n,
            k,
            count: total as usize,
            tail,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Rank of a sorted sequence.
    pub fn rank(&self, sorted: &[usize]) -> usize {
        debug_assert_eq!(sorted.len(), self.k);
        debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
        let mut r = 0;
        let mut lo = 0;
        for (i, &a) in sorted.iter().enumerate() {
            let rest = self.k - i - 1;
            for v in lo..a {
                r += self.tail[rest][v];
            }
            lo = a;
        }
        r
    }

    pub fn rank_of(&self, x: &CopMultiset) -> usize {
        self.rank(x.elems())
    }

    pub fn unrank(&self, mut r: usize) -> CopMultiset {
        assert!(r < self.count, "rank {r} out of range");
        let mut out = Vec::with_capacity(self.k);
        let mut lo = 0;
        for i in 0..self.k {
            let rest = self.k - i - 1;
            let mut v = lo;
            while r >= self.tail[rest][v] {
                r -= self.tail[rest][v];
                v += 1;
            }
            out.push(v);
            lo = v;
        }
        CopMultiset(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = CopMultiset> + '_ {
        (0..self.count).map(|r| self.unrank(r))
    }
}

/// All `C(n+k-1, k)` multisets in rank order.
pub fn enumerate_multisets(
    n: usize,
    k: usize,
    budget: Budget,
) -> Result<Vec<CopMultiset>, BudgetExceeded> {
    let idx = MultisetIndex::new(n, k, budget)?;
    Ok(idx.iter().collect())
}

/// Every multiset the cops can reach in one synchronized round from
/// `cops` in slice `t`: each occurrence independently picks an
/// out-neighbor. Sorted and deduplicated.
pub fn synchronized_images(d: &Arena, t: usize, cops: &[usize]) -> Vec<CopMultiset> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(cops.len());
    fn rec(d: &Arena, t: usize, cops: &[usize], cur: &mut Vec<usize>, out: &mut Vec<CopMultiset>) {
        match cops.split_first() {
            None => out.push(CopMultiset::new(cur.clone())),
            Some((&x, rest)) => {
                for &y in d.out_list(t, x) {
                    cur.push(y);
                    rec(d, t, rest, cur, out);
                    cur.pop();
                }
            }
        }
    }
    rec(d, t, cops, &mut cur, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ms(v: &[usize]) -> CopMultiset {
        CopMultiset::new(v.to_vec())
    }

    #[test]
    fn small_enumerations() {
        let b = Budget::default();
        assert_eq!(
            enumerate_multisets(2, 2, b).unwrap(),
            vec![ms(&[0, 0]), ms(&[0, 1]), ms(&[1, 1])]
        );
        assert_eq!(
            enumerate_multisets(3, 1, b).unwrap(),
            vec![ms(&[0]), ms(&[1]), ms(&[2])]
        );
        assert_eq!(enumerate_multisets(4, 2, b).unwrap().len(), 10);
    }

    #[test]
    fn counts() {
        assert_eq!(multiset_count(5, 2), 15);
        assert_eq!(multiset_count(7, 3), 84);
        assert_eq!(multiset_count(1, 9), 1);
        // saturates instead of overflowing
        assert_eq!(multiset_count(1000, 40), u128::MAX);
    }

    #[test]
    fn budget_exceeded() {
        let err = MultisetIndex::new(100, 5, Budget::new(1000)).unwrap_err();
        assert_eq!(err.needed, multiset_count(100, 5));
    }

    #[test]
    fn multiset_queries() {
        let x = ms(&[3, 1, 3]);
        assert_eq!(x.elems(), &[1, 3, 3]);
        assert_eq!(x.count(3), 2);
        assert_eq!(x.support(), vec![1, 3]);
        assert_eq!(x.to_string(), "<1,3,3>");
    }

    #[test]
    fn images_of_a_pair() {
        let d = Arena::build(&crate::fixtures::dicyc(3));
        assert_eq!(synchronized_images(&d, 0, &[0, 1]), vec![ms(&[1, 2])]);
        let rp3 = Arena::build(&crate::fixtures::rp3());
        // a cop on each leaf: {0,1} x {1,2}
        assert_eq!(
            synchronized_images(&rp3, 0, &[0, 2]),
            vec![ms(&[0, 1]), ms(&[0, 2]), ms(&[1, 1]), ms(&[1, 2])]
        );
    }

    proptest! {
        #[test]
        fn rank_is_a_bijection(n in 1usize..7, k in 1usize..4) {
            let idx = MultisetIndex::new(n, k, Budget::default()).unwrap();
            prop_assert_eq!(idx.len() as u128, multiset_count(n, k));
            let all: Vec<_> = idx.iter().collect();
            for (r, m) in all.iter().enumerate() {
                prop_assert_eq!(idx.rank_of(m), r);
            }
            prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
