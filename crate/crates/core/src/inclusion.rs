//! The inclusion operator `W_tk` acting on integer-valued block
//! collections, and the predicates (trade, design, simple, halving)
//! defined through it.
//!
//! `W_tk` is never materialized here: the image of a collection is built
//! by walking its support and enumerating the t-subsets of every block.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;
use std::ops::Neg;

use serde::Serialize;

use crate::combinatorics::{binomial, unrank_lex, Block, Combinations, LexRanker};
use crate::error::{Error, Result};

/// Sparse map from blocks of `C(X, k)` to nonzero integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCollection {
    v: u32,
    k: usize,
    coeffs: BTreeMap<Block, i64>,
}

impl SignedCollection {
    pub fn new(v: u32, k: usize) -> Self {
        SignedCollection {
            v,
            k,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_blocks<I>(v: u32, k: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Block, i64)>,
    {
        let mut out = SignedCollection::new(v, k);
        for (block, coef) in entries {
            out.add_block(block, coef)?;
        }
        Ok(out)
    }

    /// Every listed block with coefficient `+1`.
    pub fn indicator<I>(v: u32, k: usize, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = Block>,
    {
        Self::from_blocks(v, k, blocks.into_iter().map(|b| (b, 1)))
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Adds `coef` to the coefficient of `block`, dropping it if it becomes 0.
    pub fn add_block(&mut self, block: Block, coef: i64) -> Result<()> {
        if block.len() != self.k {
            return Err(Error::InvalidBlock {
                elements: block.elements().to_vec(),
                v: self.v,
                k: self.k,
                reason: "wrong block size",
            });
        }
        let block = Block::new(block.elements().to_vec(), self.v)?;
        if coef == 0 {
            return Ok(());
        }
        match self.coeffs.entry(block) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e
                    .get()
                    .checked_add(coef)
                    .ok_or(Error::Overflow("collection coefficient"))?;
                if sum == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    fn check_compatible(&self, other: &SignedCollection) -> Result<()> {
        if self.v != other.v || self.k != other.k {
            return Err(Error::Mismatch(format!(
                "(v={}, k={}) vs (v={}, k={})",
                self.v, self.k, other.v, other.k
            )));
        }
        Ok(())
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &SignedCollection, scale: i64) -> Result<()> {
        self.check_compatible(other)?;
        for (block, &c) in &other.coeffs {
            let c = c
                .checked_mul(scale)
                .ok_or(Error::Overflow("collection coefficient"))?;
            self.add_block(block.clone(), c)?;
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &SignedCollection) -> Result<()> {
        self.add_scaled(other, 1)
    }

    pub fn sub_assign(&mut self, other: &SignedCollection) -> Result<()> {
        self.add_scaled(other, -1)
    }

    pub fn checked_add(&self, other: &SignedCollection) -> Result<SignedCollection> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn checked_sub(&self, other: &SignedCollection) -> Result<SignedCollection> {
        let mut out = self.clone();
        out.sub_assign(other)?;
        Ok(out)
    }

    pub fn coefficient(&self, block: &Block) -> i64 {
        self.coeffs.get(block).copied().unwrap_or(0)
    }

    /// Nonzero entries in lexicographic block order.
    pub fn iter(&self) -> impl Iterator<Item = (&Block, i64)> + '_ {
        self.coeffs.iter().map(|(b, &c)| (b, c))
    }

    pub fn support(&self) -> impl Iterator<Item = &Block> + '_ {
        self.coeffs.keys()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_disjoint_from(&self, other: &SignedCollection) -> bool {
        let (small, large) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.coeffs.keys().all(|b| !large.coeffs.contains_key(b))
    }

    /// The collection with every element relabelled by `+offset`, in a
    /// ground set enlarged accordingly.
    pub fn shifted(&self, offset: u32) -> SignedCollection {
        SignedCollection {
            v: self.v + offset,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(b, &c)| (b.shifted(offset), c))
                .collect(),
        }
    }
}

impl Neg for &SignedCollection {
    type Output = SignedCollection;

    fn neg(self) -> SignedCollection {
        SignedCollection {
            v: self.v,
            k: self.k,
            coeffs: self.coeffs.iter().map(|(b, &c)| (b.clone(), -c)).collect(),
        }
    }
}

/// Dense integer vector indexed by the lexicographic rank of `C(X, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSubsetVector {
    pub v: u32,
    pub t: usize,
    pub counts: Vec<i64>,
}

impl TSubsetVector {
    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn is_constant(&self, lambda: i64) -> bool {
        self.counts.iter().all(|&c| c == lambda)
    }

    /// First t-subset (in lex order) whose count differs from `lambda`.
    pub fn first_deviation(&self, lambda: i64) -> Option<(Block, i64)> {
        let (rank, &c) = self
            .counts
            .iter()
            .enumerate()
            .find(|(_, &c)| c != lambda)?;
        let block = unrank_lex(rank as u64, self.v, self.t).ok()?;
        Some((block, c))
    }
}

fn check_t(t: usize, k: usize, v: u32) -> Result<()> {
    if t > k || k + t > v as usize {
        return Err(Error::Inadmissible(format!(
            "need 0 <= t <= k <= v - t, got t={t}, k={k}, v={v}"
        )));
    }
    Ok(())
}

fn accumulate<'a, I>(t: usize, k: usize, ranker: &LexRanker, entries: I, out: &mut [i64]) -> Result<()>
where
    I: Iterator<Item = (&'a Block, i64)>,
{
    let patterns: Vec<Vec<u32>> = Combinations::new(k, t).collect();
    let mut scratch = vec![0u32; t];
    for (block, coef) in entries {
        let el = block.elements();
        for pat in &patterns {
            for (dst, &i) in scratch.iter_mut().zip(pat) {
                *dst = el[i as usize];
            }
            let slot = &mut out[ranker.rank(&scratch) as usize];
            *slot = slot
                .checked_add(coef)
                .ok_or(Error::Overflow("inclusion image"))?;
        }
    }
    Ok(())
}

/// `W_tk f`: entry `T` is the sum of `f(K)` over blocks `K ⊇ T`.
pub fn apply_w(t: usize, f: &SignedCollection) -> Result<TSubsetVector> {
    check_t(t, f.k, f.v)?;
    let ranker = LexRanker::new(f.v, t)?;
    let mut counts = vec![0i64; ranker.total() as usize];
    accumulate(t, f.k, &ranker, f.iter(), &mut counts)?;
    Ok(TSubsetVector {
        v: f.v,
        t,
        counts,
    })
}

/// [`apply_w`] split over `jobs` threads; the result does not depend on
/// the split since accumulation is a plain sum.
pub fn apply_w_parallel(t: usize, f: &SignedCollection, jobs: usize) -> Result<TSubsetVector> {
    let jobs = jobs.max(1);
    if jobs == 1 || f.support_len() < 2 * jobs {
        return apply_w(t, f);
    }
    check_t(t, f.k, f.v)?;
    let ranker = LexRanker::new(f.v, t)?;
    let len = ranker.total() as usize;
    let entries: Vec<(&Block, i64)> = f.iter().collect();
    let chunk = entries.len().div_ceil(jobs);
    let partials: Vec<Result<Vec<i64>>> = std::thread::scope(|s| {
        let handles: Vec<_> = entries
            .chunks(chunk)
            .map(|part| {
                let ranker = &ranker;
                s.spawn(move || {
                    let mut local = vec![0i64; len];
                    accumulate(t, f.k, ranker, part.iter().copied(), &mut local)?;
                    Ok(local)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("apply_w worker panicked"))
            .collect()
    });
    let mut counts = vec![0i64; len];
    for part in partials {
        for (acc, x) in counts.iter_mut().zip(part?) {
            *acc = acc.checked_add(x).ok_or(Error::Overflow("inclusion image"))?;
        }
    }
    Ok(TSubsetVector {
        v: f.v,
        t,
        counts,
    })
}

/// `W_tk f = 0`. Out-of-range `t` is reported as `false`.
pub fn is_trade(t: usize, f: &SignedCollection) -> bool {
    apply_w(t, f).is_ok_and(|img| img.is_zero())
}

/// Nonnegative solution of `W_tk f = λ·1`.
pub fn is_design(t: usize, lambda: u64, f: &SignedCollection) -> bool {
    let Ok(lambda) = i64::try_from(lambda) else {
        return false;
    };
    f.iter().all(|(_, c)| c > 0) && apply_w(t, f).is_ok_and(|img| img.is_constant(lambda))
}

/// Splits `f` into `(T0, T1)` with `f = T0 - T1`, both nonnegative.
pub fn legs(f: &SignedCollection) -> (SignedCollection, SignedCollection) {
    let mut pos = SignedCollection::new(f.v, f.k);
    let mut neg = SignedCollection::new(f.v, f.k);
    for (b, c) in f.iter() {
        if c > 0 {
            pos.coeffs.insert(b.clone(), c);
        } else {
            neg.coeffs.insert(b.clone(), -c);
        }
    }
    (pos, neg)
}

/// Leg sizes (with multiplicity). For a trade both legs have the same
/// size; otherwise `blocks` is the larger one and `balanced` is false.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Volume {
    pub blocks: u64,
    pub balanced: bool,
}

pub fn volume(f: &SignedCollection) -> Volume {
    let (mut pos, mut neg) = (0u64, 0u64);
    for (_, c) in f.iter() {
        if c > 0 {
            pos += c.unsigned_abs();
        } else {
            neg += c.unsigned_abs();
        }
    }
    Volume {
        blocks: pos.max(neg),
        balanced: pos == neg,
    }
}

pub fn foundation(f: &SignedCollection) -> BTreeSet<u32> {
    f.support()
        .flat_map(|b| b.elements().iter().copied())
        .collect()
}

/// No repeated blocks: every stored coefficient is `±1`.
pub fn is_simple(f: &SignedCollection) -> bool {
    f.iter().all(|(_, c)| c == 1 || c == -1)
}

/// A simple 2-trade covering all of `C(X, k)` with volume `C(v, k) / 2`.
pub fn is_halving(f: &SignedCollection) -> bool {
    let Ok(total) = binomial(u64::from(f.v), f.k as u64) else {
        return false;
    };
    is_simple(f)
        && f.support_len() as u64 == total
        && volume(f).blocks * 2 == total
        && is_trade(2, f)
}

/// Parity condition under which a `(t, k, v)`-halving is conjectured to
/// exist: `C(v - i, k - i)` even for every `0 <= i <= t`.
pub fn halving_admissible(t: u64, k: u64, v: u64) -> bool {
    if t > k || k + t > v {
        return false;
    }
    (0..=t).all(|i| binomial(v - i, k - i).is_ok_and(|b| b % 2 == 0))
}

/// Summary of every predicate above for one collection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollectionReport {
    pub v: u32,
    pub k: usize,
    pub t: usize,
    pub lambda: u64,
    pub support: usize,
    pub volume: u64,
    pub balanced: bool,
    pub foundation_size: usize,
    pub is_simple: bool,
    /// `W_tk f = λ·1` holds (with nonnegativity when `λ > 0`).
    pub equation_holds: bool,
    pub is_halving: bool,
    /// First t-subset whose count differs from `λ`, with that count.
    pub first_violation: Option<(Vec<u32>, i64)>,
}

pub fn report(t: usize, lambda: u64, f: &SignedCollection, jobs: usize) -> Result<CollectionReport> {
    let image = apply_w_parallel(t, f, jobs)?;
    let lam = i64::try_from(lambda).map_err(|_| Error::Overflow("lambda"))?;
    let negative = lambda > 0 && f.iter().any(|(_, c)| c < 0);
    let vol = volume(f);
    Ok(CollectionReport {
        v: f.v,
        k: f.k,
        t,
        lambda,
        support: f.support_len(),
        volume: vol.blocks,
        balanced: vol.balanced,
        foundation_size: foundation(f).len(),
        is_simple: is_simple(f),
        equation_holds: !negative && image.is_constant(lam),
        is_halving: is_halving(f),
        first_violation: image
            .first_deviation(lam)
            .map(|(b, c)| (b.elements().to_vec(), c)),
    })
}
