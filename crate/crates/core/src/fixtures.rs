//! Reference objects written out by hand, used as golden data.
//!
//! Points here are one-based (`1..=10`), exactly as they are usually
//! printed; the accessors convert to the internal zero-based ground set.

use crate::error::Result;
use crate::halving::TradeDecomposition;
use crate::trades::{minimal_trade, TradeKind};

/// Fifteen minimal trades `(a_0 a_1 a_2 / b_0 b_1 b_2)` on `{1, .., 10}`
/// whose supports partition all 120 triples.
pub const TEN_POINT_PARTITION: [([u32; 3], [u32; 3]); 15] = [
    ([3, 4, 6], [8, 7, 9]),
    ([2, 5, 10], [6, 3, 9]),
    ([1, 3, 5], [2, 4, 6]),
    ([2, 3, 8], [5, 9, 4]),
    ([3, 7, 10], [6, 1, 2]),
    ([1, 2, 9], [10, 3, 4]),
    ([4, 7, 8], [1, 5, 6]),
    ([1, 2, 7], [4, 3, 8]),
    ([4, 7, 9], [2, 6, 10]),
    ([3, 5, 10], [1, 8, 9]),
    ([3, 6, 8], [2, 7, 5]),
    ([1, 7, 9], [5, 10, 4]),
    ([8, 9, 10], [7, 5, 6]),
    ([1, 7, 10], [8, 2, 5]),
    ([6, 8, 10], [4, 9, 1]),
];

/// Signed index triples (one-based) of the V10 sum at `v = 10`.
pub const V10_TEN_TERMS: [(i64, [usize; 3]); 10] = [
    (1, [1, 2, 3]),
    (-1, [1, 2, 4]),
    (1, [1, 2, 5]),
    (1, [1, 3, 4]),
    (-1, [1, 3, 5]),
    (1, [1, 4, 5]),
    (-1, [2, 3, 4]),
    (1, [2, 3, 5]),
    (-1, [2, 4, 5]),
    (1, [3, 4, 5]),
];

/// [`TEN_POINT_PARTITION`] on the zero-based ground set `0..10`.
pub fn ten_point_partition() -> Result<TradeDecomposition> {
    let mut d = TradeDecomposition::new(10);
    for (a, b) in TEN_POINT_PARTITION {
        d.push(
            TradeKind::Minimal,
            minimal_trade(a.map(|x| x - 1), b.map(|x| x - 1), 10)?,
        );
    }
    Ok(d)
}
