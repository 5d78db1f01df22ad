//! Explicit builders for the trade families used by the halving
//! constructions: minimal trades, cycle trades on the paired-vertex graph,
//! the volume-10 rotation trades and the companion trade of the
//! lexicographic halving algorithm.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{Block, Labelling};
use crate::error::{Error, Result};
use crate::inclusion::SignedCollection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TradeKind {
    Minimal,
    Cycle6,
    Cycle8,
    /// Eulerian cycle trade (or any other closed walk).
    Cycle,
    V10,
    AkCompanion,
}

impl TradeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TradeKind::Minimal => "minimal",
            TradeKind::Cycle6 => "cycle6",
            TradeKind::Cycle8 => "cycle8",
            TradeKind::Cycle => "cycle",
            TradeKind::V10 => "v10",
            TradeKind::AkCompanion => "ak-companion",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "minimal" => TradeKind::Minimal,
            "cycle6" => TradeKind::Cycle6,
            "cycle8" => TradeKind::Cycle8,
            "cycle" => TradeKind::Cycle,
            "v10" => TradeKind::V10,
            "ak-companion" => TradeKind::AkCompanion,
            _ => return None,
        })
    }
}

fn sorted_block(mut e: [u32; 3]) -> Result<Block> {
    e.sort_unstable();
    if e[0] == e[1] || e[1] == e[2] {
        return Err(Error::Degenerate(format!(
            "block collapses to fewer than 3 elements: {e:?}"
        )));
    }
    Ok(Block::from_sorted_unchecked(e.to_vec()))
}

/// `(a_0 - b_0)(a_1 - b_1)(a_2 - b_2)`: the 8-block trade whose block for
/// `S ⊆ {0,1,2}` takes `b_i` at positions in `S` and `a_i` elsewhere, with
/// sign `(-1)^|S|`. The pairing `a_i ↔ b_i` is positional.
pub fn minimal_trade(a: [u32; 3], b: [u32; 3], v: u32) -> Result<SignedCollection> {
    let mut all: Vec<u32> = a.iter().chain(&b).copied().collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Degenerate(format!(
            "minimal trade needs six distinct elements, got {a:?} / {b:?}"
        )));
    }
    if all[5] >= v {
        return Err(Error::Degenerate(format!(
            "element {} outside the ground set 0..{v}",
            all[5]
        )));
    }
    let mut out = SignedCollection::new(v, 3);
    for mask in 0u32..8 {
        let mut e = a;
        for (i, slot) in e.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                *slot = b[i];
            }
        }
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        out.add_block(sorted_block(e)?, sign)?;
    }
    Ok(out)
}

/// A closed walk on index vertices `0..v/2`, as directed edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedWalk {
    edges: Vec<(usize, usize)>,
}

impl ClosedWalk {
    pub fn new(edges: Vec<(usize, usize)>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidCycle("empty walk".into()));
        }
        for (i, w) in edges.windows(2).enumerate() {
            if w[0].1 != w[1].0 {
                return Err(Error::InvalidCycle(format!(
                    "edge {i} ends at {} but edge {} starts at {}",
                    w[0].1,
                    i + 1,
                    w[1].0
                )));
            }
        }
        if edges.last().unwrap().1 != edges[0].0 {
            return Err(Error::InvalidCycle("walk does not close".into()));
        }
        Ok(ClosedWalk { edges })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Same walk traversed backwards.
    pub fn reversed(&self) -> ClosedWalk {
        ClosedWalk {
            edges: self.edges.iter().rev().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// Vertex sequence `i_0, i_1, ..` without the closing repeat.
    pub fn vertices(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.0).collect()
    }
}

/// A simple cycle `i_0 → i_1 → … → i_{m-1} → i_0` with `m >= 3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCycle {
    vertices: Vec<usize>,
}

impl IndexCycle {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidCycle(format!(
                "a cycle needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let distinct: HashSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidCycle(format!(
                "repeated vertex in {vertices:?}"
            )));
        }
        Ok(IndexCycle { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn walk(&self) -> ClosedWalk {
        let m = self.vertices.len();
        ClosedWalk {
            edges: (0..m)
                .map(|i| (self.vertices[i], self.vertices[(i + 1) % m]))
                .collect(),
        }
    }
}

/// Sum over directed edges `(i, j)` of
/// `a_i b_i (a_j + b_j) - a_j b_j (a_i + b_i)`.
///
/// Each edge alone leaves the pair `{a_i, b_i}` at `+2` and `{a_j, b_j}` at
/// `-2`; these cancel exactly when every vertex has equal in- and
/// out-degree, which a closed walk guarantees. A repeated undirected edge
/// would double some block, so it is rejected.
pub fn cycle_trade(walk: &ClosedWalk, labelling: &Labelling) -> Result<SignedCollection> {
    let m = labelling.size();
    let mut seen = HashSet::with_capacity(walk.len());
    let mut balance = vec![0i64; m];
    for &(i, j) in walk.edges() {
        if i >= m || j >= m {
            return Err(Error::InvalidCycle(format!(
                "edge ({i}, {j}) has an index outside 0..{m}"
            )));
        }
        if i == j {
            return Err(Error::InvalidCycle(format!("self-loop at {i}")));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::InvalidCycle(format!(
                "undirected edge {{{i}, {j}}} used twice"
            )));
        }
        balance[i] += 1;
        balance[j] -= 1;
    }
    if let Some(i) = balance.iter().position(|&d| d != 0) {
        return Err(Error::InvalidCycle(format!(
            "vertex {i} has unequal in- and out-degree"
        )));
    }
    let mut out = SignedCollection::new(labelling.v(), 3);
    for &(i, j) in walk.edges() {
        edge_bundle(&mut out, labelling, i, j)?;
    }
    Ok(out)
}

fn edge_bundle(out: &mut SignedCollection, l: &Labelling, i: usize, j: usize) -> Result<()> {
    let (ai, bi, aj, bj) = (l.a(i), l.b(i), l.a(j), l.b(j));
    out.add_block(sorted_block([ai, bi, aj])?, 1)?;
    out.add_block(sorted_block([ai, bi, bj])?, 1)?;
    out.add_block(sorted_block([aj, bj, ai])?, -1)?;
    out.add_block(sorted_block([aj, bj, bi])?, -1)?;
    Ok(())
}

/// The four signed blocks contributed by a single directed edge. Not a
/// trade on its own.
pub fn edge_trade_bundle(labelling: &Labelling, i: usize, j: usize) -> Result<SignedCollection> {
    let mut out = SignedCollection::new(labelling.v(), 3);
    edge_bundle(&mut out, labelling, i, j)?;
    Ok(out)
}

fn check_alpha(alpha: [usize; 3], m: usize) -> Result<[usize; 3]> {
    let mut s = alpha;
    s.sort_unstable();
    if s[0] == s[1] || s[1] == s[2] || s[2] >= m {
        return Err(Error::Inadmissible(format!(
            "index triple {alpha:?} must be three distinct values in 0..{m}"
        )));
    }
    Ok(s)
}

/// Identity pairing plus one rotation of the `b` row minus the other
/// rotation: a simple trade of volume 10 on the foundation
/// `{a_α, b_α}`. The indices are taken in increasing order.
pub fn v10_trade(alpha: [usize; 3], labelling: &Labelling) -> Result<SignedCollection> {
    let [x, y, z] = check_alpha(alpha, labelling.size())?;
    let (a, b) = (|i| labelling.a(i), |i| labelling.b(i));
    let v = labelling.v();
    let top = [a(x), a(y), a(z)];
    let mut out = minimal_trade(top, [b(x), b(y), b(z)], v)?;
    out.add_assign(&minimal_trade(top, [b(y), b(z), b(x)], v)?)?;
    out.sub_assign(&minimal_trade(top, [b(z), b(x), b(y)], v)?)?;
    Ok(out)
}

/// Companion row `(b_0, b_1, b_2)` for the block `a_0 a_1 a_2`:
/// `b_2 = a_2 + 1`, then `b_1` and `b_0` the least unused elements above
/// `a_1` and `a_0` respectively.
pub fn ak_companion_row(block: &Block, v: u32) -> Result<[u32; 3]> {
    let &[a0, a1, a2] = block.elements() else {
        return Err(Error::InvalidBlock {
            elements: block.elements().to_vec(),
            v,
            k: 3,
            reason: "companion rule needs a 3-block",
        });
    };
    let unsatisfiable = |what: &str| {
        Error::Inadmissible(format!(
            "companion rule for {a0} {a1} {a2} at v={v}: no candidate for {what}"
        ))
    };
    let b2 = a2 + 1;
    if b2 >= v {
        return Err(unsatisfiable("b2"));
    }
    let pick = |above: u32, used: &[u32]| (above + 1..v).find(|x| !used.contains(x));
    let b1 = pick(a1, &[a0, a1, a2, b2]).ok_or_else(|| unsatisfiable("b1"))?;
    let b0 = pick(a0, &[a0, a1, a2, b2, b1]).ok_or_else(|| unsatisfiable("b0"))?;
    Ok([b0, b1, b2])
}

pub fn ak_companion(block: &Block, v: u32) -> Result<SignedCollection> {
    let row = ak_companion_row(block, v)?;
    let e = block.elements();
    minimal_trade([e[0], e[1], e[2]], row, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::default_labelling;
    use crate::inclusion::{apply_w, foundation, is_simple, is_trade, volume};

    fn blk(e: &[u32]) -> Block {
        Block::new(e.to_vec(), 64).unwrap()
    }

    fn entries(f: &SignedCollection) -> Vec<(Vec<u32>, i64)> {
        f.iter().map(|(b, c)| (b.elements().to_vec(), c)).collect()
    }

    #[test]
    fn minimal_trade_expansion() {
        let f = minimal_trade([0, 1, 2], [3, 4, 5], 6).unwrap();
        let expect = vec![
            (vec![0, 1, 2], 1),
            (vec![0, 1, 5], -1),
            (vec![0, 2, 4], -1),
            (vec![0, 4, 5], 1),
            (vec![1, 2, 3], -1),
            (vec![1, 3, 5], 1),
            (vec![2, 3, 4], 1),
            (vec![3, 4, 5], -1),
        ];
        assert_eq!(entries(&f), expect);
        assert!(is_trade(2, &f));
        assert_eq!(volume(&f).blocks, 4);
    }

    #[test]
    fn minimal_trade_rejects_overlap() {
        assert!(matches!(
            minimal_trade([0, 1, 2], [2, 4, 5], 6),
            Err(Error::Degenerate(_))
        ));
        assert!(minimal_trade([0, 1, 2], [3, 4, 6], 6).is_err());
    }

    #[test]
    fn triangle_cycle_trade() {
        let lab = default_labelling(6).unwrap();
        let tri = IndexCycle::new(vec![0, 1, 2]).unwrap();
        let f = cycle_trade(&tri.walk(), &lab).unwrap();
        let mut expect: Vec<(Vec<u32>, i64)> = [
            ([0, 3, 1], 1),
            ([0, 3, 4], 1),
            ([1, 4, 0], -1),
            ([1, 4, 3], -1),
            ([1, 4, 2], 1),
            ([1, 4, 5], 1),
            ([2, 5, 1], -1),
            ([2, 5, 4], -1),
            ([2, 5, 0], 1),
            ([2, 5, 3], 1),
            ([0, 3, 2], -1),
            ([0, 3, 5], -1),
        ]
        .iter()
        .map(|(e, c)| {
            let mut e = e.to_vec();
            e.sort();
            (e, *c)
        })
        .collect();
        expect.sort();
        assert_eq!(entries(&f), expect);
        assert!(is_trade(2, &f));
        assert_eq!(volume(&f).blocks, 6);
        assert_eq!(foundation(&f).len(), 6);

        let sum = f.checked_add(&minimal_trade([0, 1, 2], [3, 4, 5], 6).unwrap()).unwrap();
        assert!(is_simple(&sum) && is_trade(2, &sum));
        assert_eq!(volume(&sum).blocks, 10);
    }

    #[test]
    fn reversal_negates() {
        let lab = default_labelling(10).unwrap();
        let c = IndexCycle::new(vec![3, 0, 4, 1]).unwrap().walk();
        let f = cycle_trade(&c, &lab).unwrap();
        let g = cycle_trade(&c.reversed(), &lab).unwrap();
        assert_eq!(g, -&f);
        assert!(is_trade(2, &f) && is_trade(2, &g));
        assert_eq!(volume(&f).blocks, 8);
        assert_eq!(foundation(&f).len(), 8);
    }

    #[test]
    fn single_edge_is_not_a_trade() {
        let lab = default_labelling(6).unwrap();
        let f = edge_trade_bundle(&lab, 0, 1).unwrap();
        assert!(!is_trade(2, &f));
        let img = apply_w(2, &f).unwrap();
        let (pair, count) = img.first_deviation(0).unwrap();
        assert_eq!((pair.elements(), count), (&[0u32, 3][..], 2));
        let rank = crate::combinatorics::rank_lex(&blk(&[1, 4]), 6).unwrap() as usize;
        assert_eq!(img.counts[rank], -2);
    }

    #[test]
    fn walk_validation() {
        let lab = default_labelling(10).unwrap();
        assert!(ClosedWalk::new(vec![(0, 1), (2, 0)]).is_err());
        assert!(ClosedWalk::new(vec![(0, 1), (1, 2)]).is_err());
        assert!(IndexCycle::new(vec![0, 1]).is_err());
        assert!(IndexCycle::new(vec![0, 1, 0]).is_err());
        let twice = ClosedWalk::new(vec![(0, 1), (1, 2), (2, 0), (0, 2), (2, 1), (1, 0)]).unwrap();
        assert!(cycle_trade(&twice, &lab).is_err());
        let out_of_range = IndexCycle::new(vec![0, 1, 5]).unwrap();
        assert!(cycle_trade(&out_of_range.walk(), &lab).is_err());
    }

    #[test]
    fn v10_trade_shape() {
        let lab = default_labelling(10).unwrap();
        for alpha in [[0, 1, 2], [1, 2, 4], [0, 3, 4]] {
            let f = v10_trade(alpha, &lab).unwrap();
            assert!(is_simple(&f) && is_trade(2, &f));
            assert_eq!(volume(&f).blocks, 10);
            let fnd = foundation(&f);
            let expect: std::collections::BTreeSet<u32> =
                alpha.iter().flat_map(|&i| [lab.a(i), lab.b(i)]).collect();
            assert_eq!(fnd, expect);
        }
        assert!(v10_trade([0, 0, 1], &lab).is_err());
        assert!(v10_trade([0, 1, 5], &lab).is_err());
    }

    #[test]
    fn companion_rows() {
        assert_eq!(ak_companion_row(&blk(&[0, 1, 2]), 6).unwrap(), [5, 4, 3]);
        assert_eq!(ak_companion_row(&blk(&[0, 1, 3]), 6).unwrap(), [5, 2, 4]);
        assert!(ak_companion_row(&blk(&[0, 1, 5]), 6).is_err());
        // b2 = 5 leaves nothing above a1 = 3 for b1
        assert!(ak_companion_row(&blk(&[2, 3, 4]), 6).is_err());
        let f = ak_companion(&blk(&[0, 1, 2]), 6).unwrap();
        assert_eq!(f, minimal_trade([0, 1, 2], [5, 4, 3], 6).unwrap());
        assert!(is_trade(2, &f));
    }

    #[test]
    fn kind_names_roundtrip() {
        for k in [
            TradeKind::Minimal,
            TradeKind::Cycle6,
            TradeKind::Cycle8,
            TradeKind::Cycle,
            TradeKind::V10,
            TradeKind::AkCompanion,
        ] {
            assert_eq!(TradeKind::parse(k.as_str()), Some(k));
        }
    }
}
