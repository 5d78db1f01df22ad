//! End-to-end halving constructions for `C(X, 3)` with `v = 4n + 2`:
//!
//! * [`ak_halving`]: greedy lexicographic augmentation by companion trades;
//! * [`v10_halving`]: signed sum of the volume-10 rotation trades;
//! * [`partition_halving`]: minimal trades over all index triples plus one
//!   cycle trade along an Eulerian circuit of `K_{2n+1}`;
//! * [`structured_partition`]: the same, with the Eulerian trade replaced by
//!   triangles from a Steiner triple system (and 4-cycles when needed);
//! * [`hill_climb_partition`]: randomized search for 15 disjoint minimal
//!   trades covering `C({0..9}, 3)`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{
    all_blocks, binomial, require_two_mod_four, Block, Combinations, LexRanker, Labelling,
};
use crate::error::{Error, Result};
use crate::inclusion::{is_halving, is_trade, SignedCollection};
use crate::sts::{default_pair_partition, default_sts, verify_sts, PairPartition, TripleSystem};
use crate::trades::{
    ak_companion, cycle_trade, minimal_trade, v10_trade, ClosedWalk, IndexCycle, TradeKind,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constituent {
    pub kind: TradeKind,
    pub trade: SignedCollection,
}

/// An ordered list of trades whose sum is the constructed object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeDecomposition {
    pub v: u32,
    pub constituents: Vec<Constituent>,
}

impl TradeDecomposition {
    pub fn new(v: u32) -> Self {
        TradeDecomposition {
            v,
            constituents: Vec::new(),
        }
    }

    pub fn push(&mut self, kind: TradeKind, trade: SignedCollection) {
        self.constituents.push(Constituent { kind, trade });
    }

    pub fn len(&self) -> usize {
        self.constituents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constituents.is_empty()
    }

    pub fn count_by_kind(&self) -> BTreeMap<TradeKind, usize> {
        let mut out = BTreeMap::new();
        for c in &self.constituents {
            *out.entry(c.kind).or_insert(0) += 1;
        }
        out
    }

    pub fn count(&self, kind: TradeKind) -> usize {
        self.constituents.iter().filter(|c| c.kind == kind).count()
    }

    /// No block lies in the support of two constituents.
    pub fn pairwise_disjoint(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.constituents
            .iter()
            .flat_map(|c| c.trade.support())
            .all(|b| seen.insert(b))
    }

    /// Supports are pairwise disjoint and together cover `C(X, 3)`.
    pub fn partitions_complete_design(&self) -> bool {
        let total: usize = self.constituents.iter().map(|c| c.trade.support_len()).sum();
        binomial(u64::from(self.v), 3).is_ok_and(|n| n as usize == total)
            && self.pairwise_disjoint()
    }
}

/// Coefficient-wise sum of the constituents.
pub fn sum_decomposition(d: &TradeDecomposition) -> Result<SignedCollection> {
    let mut out = SignedCollection::new(d.v, 3);
    for c in &d.constituents {
        out.add_assign(&c.trade)?;
    }
    Ok(out)
}

fn verified(h: SignedCollection, method: &str) -> Result<SignedCollection> {
    if !is_halving(&h) {
        return Err(Error::Verification(format!(
            "{method} construction at v={} did not produce a halving",
            h.v()
        )));
    }
    Ok(h)
}

/// Result of [`ak_halving`] with the bookkeeping of the run.
#[derive(Debug, Clone)]
pub struct AkOutcome {
    pub halving: SignedCollection,
    /// Companion trades applied after the initial one.
    pub iterations: u64,
    pub additions: u64,
    pub subtractions: u64,
}

/// Starting from the companion trade of `{0,1,2}`, repeatedly take the
/// lexicographically first block with coefficient 0 and add its companion
/// trade if the sum stays simple, otherwise subtract it.
pub fn ak_halving(v: u32, max_iterations: u64) -> Result<AkOutcome> {
    require_two_mod_four(v)?;
    let ranker = LexRanker::new(v, 3)?;
    let blocks: Vec<Block> = all_blocks(v, 3).collect();
    let mut coef = vec![0i64; blocks.len()];
    // blocks at 0 and blocks with |coef| > 1
    let mut zeros = blocks.len();
    let mut heavy = 0usize;

    let apply = |coef: &mut [i64], zeros: &mut usize, heavy: &mut usize, t: &[(usize, i64)], s: i64| {
        for &(r, c) in t {
            let old = coef[r];
            let new = old + s * c;
            *zeros += usize::from(new == 0);
            *zeros -= usize::from(old == 0);
            *heavy += usize::from(new.abs() > 1);
            *heavy -= usize::from(old.abs() > 1);
            coef[r] = new;
        }
    };
    let companion = |r: usize| -> Result<Vec<(usize, i64)>> {
        let t = ak_companion(&blocks[r], v)?;
        Ok(t.iter().map(|(b, c)| (ranker.rank(b.elements()) as usize, c)).collect())
    };

    apply(&mut coef, &mut zeros, &mut heavy, &companion(0)?, 1);
    let (mut iterations, mut additions, mut subtractions) = (0u64, 0u64, 0u64);
    while zeros > 0 || heavy > 0 {
        if iterations >= max_iterations {
            return Err(Error::SearchCap {
                iterations,
                detail: format!("{zeros} blocks still uncovered at v={v}"),
            });
        }
        iterations += 1;
        let first = coef.iter().position(|&c| c == 0).ok_or_else(|| {
            Error::Internal(format!("repeated blocks with full support at v={v}"))
        })?;
        let t = companion(first)?;
        let stays_simple = t.iter().all(|&(r, c)| (coef[r] + c).abs() <= 1);
        if stays_simple {
            apply(&mut coef, &mut zeros, &mut heavy, &t, 1);
            additions += 1;
        } else {
            apply(&mut coef, &mut zeros, &mut heavy, &t, -1);
            subtractions += 1;
        }
        debug_assert!(is_trade(2, &collect(v, &blocks, &coef)?));
    }
    Ok(AkOutcome {
        halving: verified(collect(v, &blocks, &coef)?, "ak")?,
        iterations,
        additions,
        subtractions,
    })
}

fn collect(v: u32, blocks: &[Block], coef: &[i64]) -> Result<SignedCollection> {
    SignedCollection::from_blocks(
        v,
        3,
        blocks.iter().cloned().zip(coef.iter().copied()),
    )
}

/// Convention for the sign `(-1)^(α_0 + α_1 + α_2)` of the V10 sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IndexBase {
    #[default]
    Zero,
    One,
}

impl IndexBase {
    pub fn offset(self) -> usize {
        match self {
            IndexBase::Zero => 0,
            IndexBase::One => 1,
        }
    }
}

/// `Σ_α (-1)^(α_0+α_1+α_2) T_α` over all index triples `α`, with parity
/// taken on indices counted from `base`. The decomposition holds the
/// signed summands.
pub fn v10_halving(
    labelling: &Labelling,
    base: IndexBase,
) -> Result<(SignedCollection, TradeDecomposition)> {
    let v = labelling.v();
    require_two_mod_four(v)?;
    let mut d = TradeDecomposition::new(v);
    for alpha in Combinations::new(labelling.size(), 3) {
        let idx = [alpha[0] as usize, alpha[1] as usize, alpha[2] as usize];
        let parity: usize = idx.iter().map(|i| i + base.offset()).sum();
        let t = v10_trade(idx, labelling)?;
        d.push(TradeKind::V10, if parity.is_multiple_of(2) { t } else { -&t });
    }
    let h = verified(sum_decomposition(&d)?, "v10")?;
    Ok((h, d))
}

fn eulerian_with_order(m: usize, order: &[Vec<usize>]) -> Result<ClosedWalk> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::Inadmissible(format!(
            "K_{m} has no Eulerian circuit (need odd m >= 3)"
        )));
    }
    let mut used = vec![vec![false; m]; m];
    let greedy = |used: &mut Vec<Vec<bool>>, start: usize| {
        let mut path = vec![start];
        let mut cur = start;
        while let Some(&next) = order[cur].iter().find(|&&j| !used[cur][j]) {
            used[cur][next] = true;
            used[next][cur] = true;
            path.push(next);
            cur = next;
        }
        path
    };
    let mut tour = greedy(&mut used, 0);
    loop {
        let gap = tour
            .iter()
            .position(|&x| order[x].iter().any(|&j| !used[x][j]));
        let Some(p) = gap else { break };
        let sub = greedy(&mut used, tour[p]);
        tour.splice(p + 1..p + 1, sub.into_iter().skip(1));
    }
    debug_assert_eq!(tour.len(), m * (m - 1) / 2 + 1);
    ClosedWalk::new(tour.windows(2).map(|w| (w[0], w[1])).collect())
}

/// Hierholzer on `K_m`: from vertex 0 always take the lowest unused
/// neighbour, then splice sub-tours at the first vertex of the tour that
/// still has unused edges.
pub fn eulerian_circuit(m: usize) -> Result<ClosedWalk> {
    let order: Vec<Vec<usize>> = (0..m).map(|i| (0..m).filter(|&j| j != i).collect()).collect();
    eulerian_with_order(m, &order)
}

/// Uniform index in `0..n`, drawn as a `u32` so a seed gives the same
/// stream on 32- and 64-bit targets.
fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.gen_range(0..n as u32) as usize
}

/// As [`eulerian_circuit`], with each vertex's neighbour preference
/// shuffled by a seeded RNG.
pub fn eulerian_circuit_seeded(m: usize, seed: u64) -> Result<ClosedWalk> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            let mut n: Vec<usize> = (0..m).filter(|&j| j != i).collect();
            for k in (1..n.len()).rev() {
                n.swap(k, below(&mut rng, k + 1));
            }
            n
        })
        .collect();
    eulerian_with_order(m, &order)
}

fn push_minimal_trades(d: &mut TradeDecomposition, l: &Labelling) -> Result<()> {
    for alpha in Combinations::new(l.size(), 3) {
        let [x, y, z] = [alpha[0] as usize, alpha[1] as usize, alpha[2] as usize];
        d.push(
            TradeKind::Minimal,
            minimal_trade([l.a(x), l.a(y), l.a(z)], [l.b(x), l.b(y), l.b(z)], l.v())?,
        );
    }
    Ok(())
}

/// Minimal trades over all index triples plus the cycle trade of `walk`,
/// which must be an Eulerian circuit of `K_{v/2}` for the result to be a
/// halving.
pub fn partition_halving_with(
    labelling: &Labelling,
    walk: &ClosedWalk,
) -> Result<(SignedCollection, TradeDecomposition)> {
    let v = labelling.v();
    require_two_mod_four(v)?;
    let mut d = TradeDecomposition::new(v);
    push_minimal_trades(&mut d, labelling)?;
    d.push(TradeKind::Cycle, cycle_trade(walk, labelling)?);
    let h = verified(sum_decomposition(&d)?, "partition")?;
    Ok((h, d))
}

pub fn partition_halving(labelling: &Labelling) -> Result<(SignedCollection, TradeDecomposition)> {
    let walk = eulerian_circuit(labelling.size())?;
    partition_halving_with(labelling, &walk)
}

/// Which triple system a structured partition needs for a given `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructuredCase {
    /// `2n+1 ≡ 1, 3 (mod 6)`: an STS(2n+1) on all indices.
    Full { sts_order: u32 },
    /// `2n+1 ≡ 5 (mod 6)`: an STS(2n-1), one extra triangle and `n-1`
    /// four-cycles through indices `2n-1` and `2n`.
    Patched { sts_order: u32, pairs: usize },
}

pub fn structured_case(v: u32) -> Result<StructuredCase> {
    require_two_mod_four(v)?;
    let m = v / 2;
    Ok(if m % 6 == 5 {
        StructuredCase::Patched {
            sts_order: m - 2,
            pairs: (m as usize - 3) / 2,
        }
    } else {
        StructuredCase::Full { sts_order: m }
    })
}

/// Cycle trades of a structured partition only (triangles, and four-cycles
/// in the patched case), covering every index edge exactly once.
pub fn structured_cycle_part(
    labelling: &Labelling,
    sts: &TripleSystem,
    pairs: Option<&PairPartition>,
) -> Result<TradeDecomposition> {
    let v = labelling.v();
    if !verify_sts(sts) {
        return Err(Error::InvalidTripleSystem(format!(
            "supplied system of order {} is not Steiner",
            sts.order()
        )));
    }
    let mut d = TradeDecomposition::new(v);
    let triangle = |d: &mut TradeDecomposition, t: [usize; 3]| -> Result<()> {
        let c = IndexCycle::new(t.to_vec())?;
        d.push(TradeKind::Cycle6, cycle_trade(&c.walk(), labelling)?);
        Ok(())
    };
    match structured_case(v)? {
        StructuredCase::Full { sts_order } => {
            if sts.order() != sts_order {
                return Err(Error::Inadmissible(format!(
                    "v={v} needs a triple system of order {sts_order}, got {}",
                    sts.order()
                )));
            }
            for t in sts.triples() {
                triangle(&mut d, t.map(|x| x as usize))?;
            }
        }
        StructuredCase::Patched { sts_order, pairs: npairs } => {
            if sts.order() != sts_order {
                return Err(Error::Inadmissible(format!(
                    "v={v} needs a triple system of order {sts_order}, got {}",
                    sts.order()
                )));
            }
            let default;
            let s = match pairs {
                Some(s) => s,
                None => {
                    default = default_pair_partition(2 * npairs)?;
                    &default
                }
            };
            if s.size() != 2 * npairs {
                return Err(Error::Inadmissible(format!(
                    "v={v} needs a pair partition of 0..{}, got one of size {}",
                    2 * npairs,
                    s.size()
                )));
            }
            for t in sts.triples() {
                triangle(&mut d, t.map(|x| x as usize))?;
            }
            let top = labelling.size();
            let (p, q, r) = (top - 3, top - 2, top - 1);
            triangle(&mut d, [p, q, r])?;
            for &(i, j) in s.pairs() {
                let c = IndexCycle::new(vec![q, i, r, j])?;
                d.push(TradeKind::Cycle8, cycle_trade(&c.walk(), labelling)?);
            }
        }
    }
    Ok(d)
}

/// Minimal trades over all index triples plus the structured cycle part.
/// `pairs` is only consulted in the patched case and defaults to
/// `{0,1}, {2,3}, ..`.
pub fn structured_partition(
    labelling: &Labelling,
    sts: &TripleSystem,
    pairs: Option<&PairPartition>,
) -> Result<(SignedCollection, TradeDecomposition)> {
    let v = labelling.v();
    let cycles = structured_cycle_part(labelling, sts, pairs)?;
    let mut d = TradeDecomposition::new(v);
    push_minimal_trades(&mut d, labelling)?;
    d.constituents.extend(cycles.constituents);
    let h = verified(sum_decomposition(&d)?, "structured")?;
    Ok((h, d))
}

/// [`structured_partition`] with the default triple system for `v`.
pub fn structured_partition_default(
    labelling: &Labelling,
) -> Result<(SignedCollection, TradeDecomposition)> {
    let order = match structured_case(labelling.v())? {
        StructuredCase::Full { sts_order } | StructuredCase::Patched { sts_order, .. } => sts_order,
    };
    structured_partition(labelling, &default_sts(order)?, None)
}

/// Caps and seed for [`hill_climb_partition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Steps allowed per attempt. Attempts that have not finished within a
    /// few thousand steps rarely finish at all, so short attempts with many
    /// restarts work better than one long run.
    pub max_iterations: u64,
    /// Independent attempts before giving up.
    pub restart_limit: u64,
    /// Choose only among the first `w` fitting candidates (all if `None`).
    pub candidate_window: Option<usize>,
    /// Attempts run concurrently; the outcome does not depend on it.
    pub jobs: usize,
}

pub const DEFAULT_SEED: u64 = 0x5eed_2023;

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: DEFAULT_SEED,
            max_iterations: 2_000,
            restart_limit: 500,
            candidate_window: None,
            jobs: 1,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.restart_limit == 0 || self.candidate_window == Some(0) {
            return Err(Error::Inadmissible(
                "search caps and candidate window must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HillClimbOutcome {
    pub decomposition: TradeDecomposition,
    /// Index of the successful attempt (0-based).
    pub attempt: u64,
    /// Steps taken by the successful attempt.
    pub iterations: u64,
    /// Steps taken across all attempts up to and including the winner.
    pub total_iterations: u64,
}

const HC_V: u32 = 10;
const HC_TRADES: usize = 15;

struct Candidate {
    mask: u128,
    a: [u32; 3],
    b: [u32; 3],
}

/// For each block (by rank) every minimal trade in which it is the
/// positive `a` row: the 7·6·5 ordered rows from the complement, in lex
/// order.
fn hill_climb_candidates() -> &'static [Vec<Candidate>] {
    static TABLE: OnceLock<Vec<Vec<Candidate>>> = OnceLock::new();
    TABLE.get_or_init(|| build_candidates().expect("candidate table for v = 10"))
}

fn build_candidates() -> Result<Vec<Vec<Candidate>>> {
    let ranker = LexRanker::new(HC_V, 3)?;
    let mut out = Vec::with_capacity(ranker.total() as usize);
    for block in all_blocks(HC_V, 3) {
        let a: [u32; 3] = block.elements().try_into().unwrap();
        let rest: Vec<u32> = (0..HC_V).filter(|x| !block.contains(*x)).collect();
        let mut cands = Vec::with_capacity(210);
        for &b0 in &rest {
            for &b1 in rest.iter().filter(|&&x| x != b0) {
                for &b2 in rest.iter().filter(|&&x| x != b0 && x != b1) {
                    let b = [b0, b1, b2];
                    let t = minimal_trade(a, b, HC_V)?;
                    let mask = t
                        .support()
                        .fold(0u128, |m, blk| m | 1 << ranker.rank(blk.elements()));
                    cands.push(Candidate { mask, a, b });
                }
            }
        }
        out.push(cands);
    }
    Ok(out)
}

enum Attempt {
    Found { picks: Vec<(usize, usize)>, iterations: u64 },
    Exhausted { iterations: u64, best: usize },
}

fn run_attempt(cands: &[Vec<Candidate>], cfg: &SearchConfig, attempt: u64) -> Attempt {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(attempt);
    let full: u128 = (1u128 << 120) - 1;
    let mut free = full;
    let mut held: Vec<(usize, usize)> = Vec::with_capacity(HC_TRADES);
    let mut fitting = Vec::with_capacity(210);
    let mut best = 0;
    for step in 0..cfg.max_iterations {
        if free == 0 {
            return Attempt::Found {
                picks: held,
                iterations: step,
            };
        }
        let first = free.trailing_zeros() as usize;
        fitting.clear();
        let window = cfg.candidate_window.unwrap_or(usize::MAX);
        fitting.extend(
            cands[first]
                .iter()
                .enumerate()
                .filter(|(_, c)| c.mask & !free == 0)
                .map(|(i, _)| i)
                .take(window),
        );
        if !fitting.is_empty() {
            let pick = fitting[below(&mut rng, fitting.len())];
            free &= !cands[first][pick].mask;
            held.push((first, pick));
            best = best.max(held.len());
        } else {
            // the first free block cannot be covered; return a random trade
            let out = below(&mut rng, held.len());
            let (r, i) = held.swap_remove(out);
            free |= cands[r][i].mask;
        }
    }
    if free == 0 {
        return Attempt::Found {
            picks: held,
            iterations: cfg.max_iterations,
        };
    }
    Attempt::Exhausted {
        iterations: cfg.max_iterations,
        best,
    }
}

/// Randomized search for 15 pairwise disjoint minimal trades covering
/// `C({0..9}, 3)`. Attempt `i` draws from stream `i` of a ChaCha8 generator
/// seeded with `cfg.seed`, and the lowest-numbered successful attempt
/// wins, so the result depends only on the seed and caps.
pub fn hill_climb_partition(cfg: &SearchConfig) -> Result<HillClimbOutcome> {
    cfg.validate()?;
    let cands = hill_climb_candidates();
    let jobs = cfg.jobs.max(1) as u64;
    let mut total = 0u64;
    let mut best = 0usize;
    let mut next = 0u64;
    while next < cfg.restart_limit {
        let batch: Vec<u64> = (next..(next + jobs).min(cfg.restart_limit)).collect();
        next += batch.len() as u64;
        let results: Vec<Attempt> = if batch.len() == 1 {
            vec![run_attempt(cands, cfg, batch[0])]
        } else {
            std::thread::scope(|s| {
                let handles: Vec<_> = batch
                    .iter()
                    .map(|&a| {
                        s.spawn(move || run_attempt(cands, cfg, a))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("hill-climb worker panicked"))
                    .collect()
            })
        };
        for (attempt, result) in batch.into_iter().zip(results) {
            match result {
                Attempt::Exhausted { iterations, best: b } => {
                    total += iterations;
                    best = best.max(b);
                }
                Attempt::Found { picks, iterations } => {
                    total += iterations;
                    let mut d = TradeDecomposition::new(HC_V);
                    let mut picks = picks;
                    picks.sort_unstable();
                    for (r, i) in picks {
                        let c = &cands[r][i];
                        d.push(TradeKind::Minimal, minimal_trade(c.a, c.b, HC_V)?);
                    }
                    if !d.partitions_complete_design() {
                        return Err(Error::Internal("hill climb produced overlapping trades".into()));
                    }
                    return Ok(HillClimbOutcome {
                        decomposition: d,
                        attempt,
                        iterations,
                        total_iterations: total,
                    });
                }
            }
        }
    }
    Err(Error::SearchCap {
        iterations: total,
        detail: format!(
            "{} attempts without a partition; best attempt held {best} of {HC_TRADES} trades",
            cfg.restart_limit
        ),
    })
}

/// The ground-set sizes every builder accepts.
pub fn admissible_halving_order(v: u32) -> bool {
    require_two_mod_four(v).is_ok()
}
