//! Ground-set arithmetic: binomials, blocks, lexicographic ranking and the
//! paired `(a_i, b_i)` labelling of an even ground set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact binomial coefficient with overflow detection. `k > n` gives 0.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step.
        acc = acc
            .checked_mul(u128::from(n - i))
            .ok_or(Error::Overflow("binomial"))?
            / u128::from(i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("binomial"))
}

/// A k-subset of `{0, .., v-1}` stored in increasing order.
///
/// The derived `Ord` is lexicographic on the element sequence, which for
/// blocks of equal size is exactly the lexicographic order of `C(X, k)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Block(Vec<u32>);

impl Block {
    /// Validates an already sorted element list against the ground set size.
    pub fn new(elements: Vec<u32>, v: u32) -> Result<Self> {
        let bad = |reason| Error::InvalidBlock {
            elements: elements.clone(),
            v,
            k: elements.len(),
            reason,
        };
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("elements must be strictly increasing"));
        }
        if elements.last().is_some_and(|&e| e >= v) {
            return Err(bad("element outside the ground set"));
        }
        Ok(Block(elements))
    }

    /// Sorts the elements first; repeated elements are an error.
    pub fn from_unsorted(mut elements: Vec<u32>, v: u32) -> Result<Self> {
        elements.sort_unstable();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBlock {
                k: elements.len(),
                elements,
                v,
                reason: "repeated element",
            });
        }
        Block::new(elements, v)
    }

    pub(crate) fn from_sorted_unchecked(elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Block(elements)
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Block) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    /// All t-subsets of this block, in lexicographic order.
    pub fn subsets(&self, t: usize) -> impl Iterator<Item = Block> + '_ {
        Combinations::new(self.0.len(), t)
            .map(move |idx| Block(idx.iter().map(|&i| self.0[i as usize]).collect()))
    }

    /// The same block with every element shifted by `offset`.
    pub fn shifted(&self, offset: u32) -> Block {
        Block(self.0.iter().map(|&x| x + offset).collect())
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for x in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
            first = false;
        }
        Ok(())
    }
}

/// Lexicographic enumeration of the k-subsets of `{0, .., n-1}`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: u32,
    current: Option<Vec<u32>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k as u32).collect());
        Combinations {
            n: n as u32,
            current,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let k = cur.len() as u32;
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < self.n - k + i as u32 {
                cur[i] += 1;
                for j in i + 1..cur.len() {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Every block of `C(X, k)` in lexicographic order.
pub fn all_blocks(v: u32, k: usize) -> impl Iterator<Item = Block> {
    Combinations::new(v as usize, k).map(Block)
}

/// 0-based position of `block` in the lexicographic order of `C(X, k)`.
pub fn rank_lex(block: &Block, v: u32) -> Result<u64> {
    let k = block.len();
    let block = Block::new(block.0.clone(), v)?;
    let mut rank = 0u64;
    let mut next = 0u32;
    for (i, &c) in block.0.iter().enumerate() {
        let remaining = (k - i - 1) as u64;
        for x in next..c {
            rank += binomial(u64::from(v - x - 1), remaining)?;
        }
        next = c + 1;
    }
    Ok(rank)
}

/// Inverse of [`rank_lex`].
pub fn unrank_lex(rank: u64, v: u32, k: usize) -> Result<Block> {
    let total = binomial(u64::from(v), k as u64)?;
    if rank >= total {
        return Err(Error::RankOutOfRange { rank, total });
    }
    let mut rest = rank;
    let mut out = Vec::with_capacity(k);
    let mut x = 0u32;
    for i in 0..k {
        let remaining = (k - i - 1) as u64;
        loop {
            let count = binomial(u64::from(v - x - 1), remaining)?;
            if rest < count {
                break;
            }
            rest -= count;
            x += 1;
        }
        out.push(x);
        x += 1;
    }
    Ok(Block(out))
}

/// Ranking table for a fixed `(v, k)` used on hot paths.
///
/// Precomputes the binomials so ranking a block is `k` table lookups
/// per element instead of repeated multiplicative evaluation.
#[derive(Debug, Clone)]
pub struct LexRanker {
    v: u32,
    k: usize,
    // table[i][x] = sum over y < x of C(v - y - 1, k - i - 1)
    table: Vec<Vec<u64>>,
    total: u64,
}

impl LexRanker {
    pub fn new(v: u32, k: usize) -> Result<Self> {
        let mut table = Vec::with_capacity(k);
        for i in 0..k {
            let remaining = (k - i - 1) as u64;
            let mut prefix = vec![0u64; v as usize + 1];
            for y in 0..v {
                prefix[y as usize + 1] =
                    prefix[y as usize] + binomial(u64::from(v - y - 1), remaining)?;
            }
            table.push(prefix);
        }
        Ok(LexRanker {
            v,
            k,
            table,
            total: binomial(u64::from(v), k as u64)?,
        })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Rank of a sorted, in-range element slice of length `k`.
    pub fn rank(&self, elements: &[u32]) -> u64 {
        debug_assert_eq!(elements.len(), self.k);
        let mut rank = 0;
        let mut next = 0u32;
        for (i, &c) in elements.iter().enumerate() {
            debug_assert!(c < self.v && c >= next);
            rank += self.table[i][c as usize] - self.table[i][next as usize];
            next = c + 1;
        }
        rank
    }
}

/// Partition of a ground set of size `v = 4n + 2` into two sequences
/// `a_0..a_{2n}` and `b_0..b_{2n}`; index `i` names the pair `a_i b_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labelling {
    v: u32,
    a: Vec<u32>,
    b: Vec<u32>,
}

impl Labelling {
    pub fn new(v: u32, a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if !v.is_multiple_of(2) || a.len() != v as usize / 2 || b.len() != v as usize / 2 {
            return Err(Error::InvalidLabelling(format!(
                "need two sequences of length v/2 for v={v}, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        let mut seen = vec![false; v as usize];
        for &x in a.iter().chain(&b) {
            if x >= v || std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::InvalidLabelling(format!(
                    "element {x} repeated or outside 0..{v}"
                )));
            }
        }
        Ok(Labelling { v, a, b })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    /// Number of index pairs, `v / 2`.
    pub fn size(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, i: usize) -> u32 {
        self.a[i]
    }

    pub fn b(&self, i: usize) -> u32 {
        self.b[i]
    }

    pub fn a_side(&self) -> &[u32] {
        &self.a
    }

    pub fn b_side(&self) -> &[u32] {
        &self.b
    }
}

pub fn require_two_mod_four(v: u32) -> Result<()> {
    if v < 6 || v % 4 != 2 {
        return Err(Error::Inadmissible(format!(
            "v={v} is not of the form 4n+2 with n >= 1"
        )));
    }
    Ok(())
}

/// `a_i = i`, `b_i = i + v/2`.
pub fn default_labelling(v: u32) -> Result<Labelling> {
    require_two_mod_four(v)?;
    let half = v / 2;
    Labelling::new(v, (0..half).collect(), (half..v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blk(e: &[u32]) -> Block {
        Block(e.to_vec())
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 3).unwrap(), 10);
        assert_eq!(binomial(22, 3).unwrap() / 2, 770);
        assert_eq!(binomial(14, 3).unwrap() / 2, 182);
        assert_eq!(binomial(3, 5).unwrap(), 0);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(67, 33).unwrap(), 14_226_520_737_620_288_370);
    }

    #[test]
    fn binomial_overflow_is_reported() {
        assert_eq!(binomial(70, 35), Err(Error::Overflow("binomial")));
    }

    #[test]
    fn rank_and_unrank_small_cases() {
        assert_eq!(rank_lex(&blk(&[0, 1, 2]), 6).unwrap(), 0);
        assert_eq!(rank_lex(&blk(&[3, 4, 5]), 6).unwrap(), 19);
        assert_eq!(unrank_lex(0, 6, 3).unwrap(), blk(&[0, 1, 2]));
        assert_eq!(unrank_lex(19, 6, 3).unwrap(), blk(&[3, 4, 5]));
        assert_eq!(unrank_lex(1, 6, 3).unwrap(), blk(&[0, 1, 3]));
        assert!(matches!(
            unrank_lex(20, 6, 3),
            Err(Error::RankOutOfRange { rank: 20, total: 20 })
        ));
        assert!(rank_lex(&blk(&[0, 2, 6]), 6).is_err());
    }

    #[test]
    fn rank_roundtrip_exhaustive() {
        for v in 0..=10u32 {
            for k in 0..=4usize {
                let ranker = LexRanker::new(v, k).unwrap();
                let mut count = 0u64;
                for (expected, b) in all_blocks(v, k).enumerate() {
                    let r = rank_lex(&b, v).unwrap();
                    assert_eq!(r, expected as u64);
                    assert_eq!(ranker.rank(b.elements()), r);
                    assert_eq!(unrank_lex(r, v, k).unwrap(), b);
                    count += 1;
                }
                assert_eq!(count, binomial(v.into(), k as u64).unwrap());
            }
        }
    }

    #[test]
    fn rank_is_monotone_in_block_order() {
        let blocks: Vec<_> = all_blocks(9, 3).collect();
        for w in blocks.windows(2) {
            assert!(w[0] < w[1]);
            assert!(rank_lex(&w[0], 9).unwrap() < rank_lex(&w[1], 9).unwrap());
        }
    }

    #[test]
    fn block_validation() {
        assert!(Block::new(vec![0, 2, 1], 5).is_err());
        assert!(Block::new(vec![0, 1, 5], 5).is_err());
        assert!(Block::from_unsorted(vec![3, 1, 3], 5).is_err());
        assert_eq!(Block::from_unsorted(vec![4, 0, 2], 5).unwrap(), blk(&[0, 2, 4]));
        let subs: Vec<_> = blk(&[1, 4, 7]).subsets(2).collect();
        assert_eq!(subs, vec![blk(&[1, 4]), blk(&[1, 7]), blk(&[4, 7])]);
    }

    #[test]
    fn default_labellings() {
        let l = default_labelling(14).unwrap();
        for i in 0..7 {
            assert_eq!((l.a(i), l.b(i)), (i as u32, i as u32 + 7));
        }
        let l = default_labelling(22).unwrap();
        assert_eq!((l.a(10), l.b(10)), (10, 21));
        let l = default_labelling(6).unwrap();
        assert_eq!(l.a_side(), &[0, 1, 2]);
        assert_eq!(l.b_side(), &[3, 4, 5]);
        for v in [4, 8, 12, 13] {
            assert!(default_labelling(v).is_err());
        }
    }

    #[test]
    fn labelling_rejects_overlap() {
        assert!(Labelling::new(6, vec![0, 1, 2], vec![2, 3, 4]).is_err());
        assert!(Labelling::new(6, vec![0, 1], vec![2, 3, 4, 5]).is_err());
        let l = Labelling::new(6, vec![5, 0, 3], vec![1, 4, 2]).unwrap();
        let mut all: Vec<_> = l.a_side().iter().chain(l.b_side()).copied().collect();
        all.sort();
        assert_eq!(all, (0..6).collect::<Vec<_>>());
    }
}
