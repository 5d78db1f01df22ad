//! Halvings of the complete design `C(X, 3)` and their trade structure.
//!
//! A collection of 3-subsets with integer multiplicities is a *trade* when
//! every pair of points is covered with total weight zero, and a
//! *halving* when it is a simple trade touching every 3-subset, so that
//! its two legs split `C(X, 3)` into two halves covering every pair
//! equally often. This crate builds halvings for `v = 4n + 2` by several
//! routes, decomposes them into small disjoint trades, and checks every
//! result exactly against the inclusion operator.

pub mod combinatorics;
pub mod error;
pub mod fixtures;
pub mod halving;
pub mod inclusion;
pub mod io;
pub mod kernel;
pub mod sts;
pub mod trades;

pub use combinatorics::{
    binomial, default_labelling, rank_lex, unrank_lex, Block, Labelling,
};
pub use error::{Error, Result};
pub use halving::{
    ak_halving, eulerian_circuit, hill_climb_partition, partition_halving,
    structured_partition, sum_decomposition, v10_halving, SearchConfig, TradeDecomposition,
};
pub use inclusion::{
    apply_w, foundation, halving_admissible, is_design, is_halving, is_simple, is_trade, legs,
    volume, SignedCollection,
};
pub use sts::{default_pair_partition, sts_generate, verify_sts, PairPartition, TripleSystem};
pub use trades::{
    ak_companion, cycle_trade, minimal_trade, v10_trade, ClosedWalk, IndexCycle, TradeKind,
};
