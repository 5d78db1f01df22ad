//! Steiner triple systems: Bose and Skolem constructions, verification,
//! the two small systems used as fixtures, a text format, and the pair
//! partitions used alongside them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::combinatorics::Block;
use crate::error::{Error, Result};
use crate::inclusion::{is_design, SignedCollection};

/// STS(7) on `0..7` used for the v = 14 construction.
pub const STS7_FIXTURE: [[u32; 3]; 7] = [
    [0, 1, 3],
    [0, 2, 6],
    [0, 4, 5],
    [1, 2, 4],
    [1, 5, 6],
    [2, 3, 5],
    [3, 4, 6],
];

/// STS(9) on `0..9` used for the v = 22 construction.
pub const STS9_FIXTURE: [[u32; 3]; 12] = [
    [0, 1, 2],
    [0, 3, 6],
    [0, 4, 8],
    [0, 5, 7],
    [1, 3, 8],
    [1, 4, 7],
    [1, 5, 6],
    [2, 3, 7],
    [2, 4, 6],
    [2, 5, 8],
    [3, 4, 5],
    [6, 7, 8],
];

/// A set of triples on the points `0..order`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSystem {
    order: u32,
    triples: Vec<[u32; 3]>,
}

impl TripleSystem {
    /// Normalizes each triple and the list order; rejects malformed triples
    /// but does not check the Steiner property (see [`verify_sts`]).
    pub fn new(order: u32, triples: impl IntoIterator<Item = [u32; 3]>) -> Result<Self> {
        let mut out = BTreeSet::new();
        for mut t in triples {
            t.sort_unstable();
            if t[0] == t[1] || t[1] == t[2] || t[2] >= order {
                return Err(Error::InvalidTripleSystem(format!(
                    "triple {t:?} is not a 3-subset of 0..{order}"
                )));
            }
            if !out.insert(t) {
                return Err(Error::InvalidTripleSystem(format!("triple {t:?} repeated")));
            }
        }
        Ok(TripleSystem {
            order,
            triples: out.into_iter().collect(),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn triples(&self) -> &[[u32; 3]] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn to_collection(&self) -> SignedCollection {
        let mut f = SignedCollection::new(self.order, 3);
        for t in &self.triples {
            f.add_block(Block::from_sorted_unchecked(t.to_vec()), 1)
                .expect("triples are validated on construction");
        }
        f
    }
}

/// Every pair of points lies in exactly one triple.
pub fn verify_sts(ts: &TripleSystem) -> bool {
    if ts.order < 5 {
        // below k + t the inclusion operator is out of range; count directly
        let mut covered = BTreeSet::new();
        for t in &ts.triples {
            for p in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
                if !covered.insert(p) {
                    return false;
                }
            }
        }
        return covered.len() as u32 == ts.order * ts.order.saturating_sub(1) / 2;
    }
    is_design(2, 1, &ts.to_collection())
}

pub fn sts_admissible(order: u32) -> bool {
    matches!(order % 6, 1 | 3)
}

/// Bose for `order ≡ 3 (mod 6)`, Skolem for `order ≡ 1 (mod 6)`.
/// Deterministic; the result is verified before it is returned.
pub fn sts_generate(order: u32) -> Result<TripleSystem> {
    if !sts_admissible(order) {
        return Err(Error::Inadmissible(format!(
            "no Steiner triple system of order {order} (need order ≡ 1, 3 mod 6)"
        )));
    }
    let triples = if order == 1 {
        Vec::new()
    } else if order % 6 == 3 {
        bose(order)
    } else {
        skolem(order)
    };
    let ts = TripleSystem::new(order, triples)?;
    if !verify_sts(&ts) {
        return Err(Error::Internal(format!(
            "generated triple system of order {order} failed verification"
        )));
    }
    Ok(ts)
}

/// The fixture systems for orders 7 and 9, a generated one otherwise.
pub fn default_sts(order: u32) -> Result<TripleSystem> {
    match order {
        7 => TripleSystem::new(7, STS7_FIXTURE),
        9 => TripleSystem::new(9, STS9_FIXTURE),
        _ => sts_generate(order),
    }
}

// Points (x, i) with x in Z_n, i in Z_3, encoded as x + n*i. Uses the
// idempotent commutative quasigroup x∘y = (x + y)(n + 1)/2 mod n.
fn bose(order: u32) -> Vec<[u32; 3]> {
    let n = order / 3;
    let half = n.div_ceil(2);
    let op = |x: u32, y: u32| ((x + y) * half) % n;
    let pt = |x: u32, i: u32| x + n * (i % 3);
    let mut out = Vec::new();
    for x in 0..n {
        out.push([pt(x, 0), pt(x, 1), pt(x, 2)]);
    }
    for x in 0..n {
        for y in x + 1..n {
            for i in 0..3 {
                out.push([pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    out
}

// order = 6m + 1, quasigroup of order 2m obtained from (Z_2m, +) by
// relabelling 2i -> i and 2i + 1 -> m + i, which is half-idempotent:
// x∘x = (x+m)∘(x+m) = x for x < m. Infinity is the point 6m.
fn skolem(order: u32) -> Vec<[u32; 3]> {
    let m = (order - 1) / 6;
    let q = 2 * m;
    let relabel = |s: u32| if s.is_multiple_of(2) { s / 2 } else { m + s / 2 };
    let op = |x: u32, y: u32| relabel((x + y) % q);
    let pt = |x: u32, i: u32| x + q * (i % 3);
    let inf = 6 * m;
    let mut out = Vec::new();
    for x in 0..m {
        out.push([pt(x, 0), pt(x, 1), pt(x, 2)]);
        for i in 0..3 {
            out.push([inf, pt(x + m, i), pt(x, i + 1)]);
        }
    }
    for x in 0..q {
        for y in x + 1..q {
            for i in 0..3 {
                out.push([pt(x, i), pt(y, i), pt(op(x, y), i + 1)]);
            }
        }
    }
    out
}

/// Disjoint 2-subsets covering an index set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairPartition {
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    /// Pairs must be disjoint and together cover exactly `0..size`.
    pub fn new(pairs: Vec<(usize, usize)>, size: usize) -> Result<Self> {
        let mut seen = vec![false; size];
        for &(i, j) in &pairs {
            for x in [i, j] {
                if x >= size || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Inadmissible(format!(
                        "pair partition: {x} repeated or outside 0..{size}"
                    )));
                }
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::Inadmissible(format!(
                "pair partition does not cover {x}"
            )));
        }
        Ok(PairPartition { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of indices covered.
    pub fn size(&self) -> usize {
        self.pairs.len() * 2
    }
}

/// `{0,1}, {2,3}, .., {m-2, m-1}`.
pub fn default_pair_partition(m: usize) -> Result<PairPartition> {
    if !m.is_multiple_of(2) {
        return Err(Error::Inadmissible(format!(
            "cannot split {m} indices into pairs"
        )));
    }
    PairPartition::new((0..m / 2).map(|i| (2 * i, 2 * i + 1)).collect(), m)
}

/// One triple per line, whitespace separated; `#` starts a comment line.
/// With `one_based`, points are read as `1..=order`. When `order` is
/// `None` it is taken to be one more than the largest point.
pub fn parse_sts(text: &str, one_based: bool, order: Option<u32>) -> Result<TripleSystem> {
    let mut triples = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Parse {
            line: lineno + 1,
            msg,
        };
        let nums = line
            .split_whitespace()
            .map(|tok| {
                let x: u32 = tok
                    .parse()
                    .map_err(|_| err(format!("not a point: {tok:?}")))?;
                if one_based {
                    x.checked_sub(1)
                        .ok_or_else(|| err("point 0 in one-based input".into()))
                } else {
                    Ok(x)
                }
            })
            .collect::<Result<Vec<u32>>>()?;
        let [a, b, c] = nums[..] else {
            return Err(err(format!("expected 3 points, found {}", nums.len())));
        };
        triples.push([a, b, c]);
    }
    let order = order.unwrap_or_else(|| {
        triples
            .iter()
            .flat_map(|t| t.iter().copied())
            .max()
            .map_or(0, |m| m + 1)
    });
    TripleSystem::new(order, triples)
}

pub fn format_sts(ts: &TripleSystem, one_based: bool) -> String {
    let shift = u32::from(one_based);
    let mut out = String::new();
    for t in &ts.triples {
        out.push_str(&format!("{} {} {}\n", t[0] + shift, t[1] + shift, t[2] + shift));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_verify() {
        let s7 = TripleSystem::new(7, STS7_FIXTURE).unwrap();
        let s9 = TripleSystem::new(9, STS9_FIXTURE).unwrap();
        assert!(verify_sts(&s7));
        assert!(verify_sts(&s9));
        assert_eq!(s9.len(), 12);
        let mut broken = STS7_FIXTURE;
        broken[0] = [0, 1, 2];
        assert!(!verify_sts(&TripleSystem::new(7, broken).unwrap()));
    }

    #[test]
    fn generated_systems_verify() {
        for order in 0..=99u32 {
            if !sts_admissible(order) {
                assert!(sts_generate(order).is_err(), "order {order}");
                continue;
            }
            let ts = sts_generate(order).unwrap();
            assert!(verify_sts(&ts), "order {order}");
            assert_eq!(ts.len() as u32, order * (order - 1) / 6);
        }
        assert_eq!(sts_generate(3).unwrap().triples(), &[[0, 1, 2]]);
        assert_eq!(sts_generate(7).unwrap().len(), 7);
        assert_eq!(sts_generate(9).unwrap().len(), 12);
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(sts_generate(31).unwrap(), sts_generate(31).unwrap());
    }

    #[test]
    fn pair_partitions() {
        let p = default_pair_partition(8).unwrap();
        assert_eq!(p.pairs(), &[(0, 1), (2, 3), (4, 5), (6, 7)]);
        assert_eq!(default_pair_partition(2).unwrap().pairs(), &[(0, 1)]);
        assert_eq!(default_pair_partition(4).unwrap().pairs(), &[(0, 1), (2, 3)]);
        assert_eq!(default_pair_partition(0).unwrap().size(), 0);
        assert!(default_pair_partition(5).is_err());
        assert!(PairPartition::new(vec![(0, 1), (1, 2)], 4).is_err());
        assert!(PairPartition::new(vec![(0, 1)], 4).is_err());
        assert!(PairPartition::new(vec![(0, 3), (2, 1)], 4).is_ok());
    }

    #[test]
    fn text_format() {
        let text = "# STS(7)\n1 2 4\n1 3 7\n1 5 6\n2 3 5\n\n2 6 7\n3 4 6\n4 5 7\n";
        let ts = parse_sts(text, true, None).unwrap();
        assert_eq!(ts.order(), 7);
        assert_eq!(ts, TripleSystem::new(7, STS7_FIXTURE).unwrap());
        assert!(verify_sts(&ts));
        assert_eq!(parse_sts(&format_sts(&ts, false), false, Some(7)).unwrap(), ts);
        assert!(matches!(
            parse_sts("0 1\n", false, None),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(parse_sts("0 1 x\n", false, None).is_err());
        assert!(parse_sts("0 1 2\n", true, None).is_err());
        assert!(parse_sts("0 1 1\n", false, None).is_err());
    }
}
