//! Dense exact-rational work on the inclusion matrix: materialization,
//! reduced row echelon form, the standard kernel basis `(I / -C)` and a
//! scan of its rows for sign patterns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::combinatorics::{all_blocks, binomial, Block, LexRanker};
use crate::error::{Error, Result};

/// Default limit on the number of columns [`materialize_w`] will build.
pub const DENSE_COLUMN_CAP: u64 = 10_000;

/// Row-major dense matrix of arbitrary-precision rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: BigRational) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }
}

fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `W_tk(v)` with rows and columns in lexicographic order.
pub fn materialize_w(t: usize, k: usize, v: u32) -> Result<ExactMatrix> {
    materialize_w_capped(t, k, v, DENSE_COLUMN_CAP)
}

pub fn materialize_w_capped(t: usize, k: usize, v: u32, cap: u64) -> Result<ExactMatrix> {
    if t > k || k + t > v as usize {
        return Err(Error::Inadmissible(format!(
            "need 0 <= t <= k <= v - t, got t={t}, k={k}, v={v}"
        )));
    }
    let cols = binomial(u64::from(v), k as u64)?;
    if cols > cap {
        return Err(Error::TooLarge { cols, cap });
    }
    let rows = binomial(u64::from(v), t as u64)? as usize;
    let ranker = LexRanker::new(v, t)?;
    let mut w = ExactMatrix::zeros(rows, cols as usize);
    for (c, block) in all_blocks(v, k).enumerate() {
        for sub in block.subsets(t) {
            w.set(ranker.rank(sub.elements()) as usize, c, BigRational::one());
        }
    }
    Ok(w)
}

/// Gauss–Jordan elimination choosing pivots greedily left to right.
/// Returns the reduced matrix and its pivot columns.
pub fn rref(m: &ExactMatrix) -> (ExactMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = a.get(row, col).recip();
        for c in col..a.cols {
            let idx = row * a.cols + c;
            a.data[idx] *= &inv;
        }
        for r in 0..a.rows {
            if r == row || a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col).clone();
            for c in col..a.cols {
                let sub = &factor * a.get(row, c);
                if !sub.is_zero() {
                    a.data[r * a.cols + c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Kernel basis `(I / -C)` of `W_tk(v)`, where `(C | I)` is the reduced
/// form of `W` with its pivot columns moved to the end.
#[derive(Debug, Clone)]
pub struct StandardBasis {
    pub v: u32,
    pub t: usize,
    pub k: usize,
    /// `column_order[p]` is the lex rank of the block presented at position
    /// `p`: non-pivot columns first, then pivot columns.
    pub column_order: Vec<usize>,
    /// Rows follow `column_order`; shape `C(v,k) x (C(v,k) - C(v,t))`.
    pub matrix: ExactMatrix,
}

impl StandardBasis {
    pub fn num_columns(&self) -> usize {
        self.matrix.cols()
    }

    /// The basis with rows put back in lexicographic block order.
    pub fn in_lex_order(&self) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.matrix.rows(), self.matrix.cols());
        for (p, &lex) in self.column_order.iter().enumerate() {
            for c in 0..self.matrix.cols() {
                out.set(lex, c, self.matrix.get(p, c).clone());
            }
        }
        out
    }

    /// `W · S = 0`, checked exactly.
    pub fn annihilated_by(&self, w: &ExactMatrix) -> Result<bool> {
        Ok(w.mul(&self.in_lex_order())?.is_zero())
    }
}

pub fn standard_basis(t: usize, k: usize, v: u32) -> Result<StandardBasis> {
    let w = materialize_w(t, k, v)?;
    let (r, pivots) = rref(&w);
    if pivots.len() != w.rows() {
        return Err(Error::Internal(format!(
            "W_{t}{k}({v}) has rank {} < {} rows",
            pivots.len(),
            w.rows()
        )));
    }
    let n = w.cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let dim = free.len();
    let mut m = ExactMatrix::zeros(n, dim);
    for (j, &fc) in free.iter().enumerate() {
        m.set(j, j, BigRational::one());
        // pivot row i has its leading 1 in pivots[i]
        for (i, _) in pivots.iter().enumerate() {
            let c = r.get(i, fc);
            if !c.is_zero() {
                m.set(dim + i, j, -c.clone());
            }
        }
    }
    let basis = StandardBasis {
        v,
        t,
        k,
        column_order: free.iter().chain(&pivots).copied().collect(),
        matrix: m,
    };
    if !basis.annihilated_by(&w)? {
        return Err(Error::Internal("standard basis is not in the kernel of W".into()));
    }
    Ok(basis)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowViolation {
    /// Row position in the presented order.
    pub row: usize,
    pub block: Vec<u32>,
    pub positive: usize,
    pub negative: usize,
}

/// Observations on the rows of a standard basis. These describe open
/// questions; the report records what was seen and asserts nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub t: usize,
    pub k: usize,
    pub v: u32,
    pub num_basis_columns: usize,
    /// Every row's nonzero entries share one sign.
    pub sign_constant_rows: bool,
    pub violations: Vec<RowViolation>,
    /// Some row has no zero entry. Only examined for `t > 1`.
    pub nowhere_zero_row: bool,
    pub nowhere_zero_checked: bool,
    pub nowhere_zero_rows: Vec<usize>,
    /// Blocks in presented column order.
    pub column_order: Vec<Vec<u32>>,
}

pub fn probe_conjectures(basis: &StandardBasis) -> Result<ConjectureReport> {
    let blocks: Vec<Block> = all_blocks(basis.v, basis.k).collect();
    let mut violations = Vec::new();
    let mut nowhere_zero_rows = Vec::new();
    for r in 0..basis.matrix.rows() {
        let row = basis.matrix.row(r);
        let positive = row.iter().filter(|x| x.is_positive()).count();
        let negative = row.iter().filter(|x| x.is_negative()).count();
        if positive + negative == 0 {
            return Err(Error::Internal(format!("row {r} of the standard basis is zero")));
        }
        if positive > 0 && negative > 0 {
            violations.push(RowViolation {
                row: r,
                block: blocks[basis.column_order[r]].elements().to_vec(),
                positive,
                negative,
            });
        }
        if positive + negative == row.len() {
            nowhere_zero_rows.push(r);
        }
    }
    let checked = basis.t > 1;
    Ok(ConjectureReport {
        t: basis.t,
        k: basis.k,
        v: basis.v,
        num_basis_columns: basis.num_columns(),
        sign_constant_rows: violations.is_empty(),
        violations,
        nowhere_zero_row: checked && !nowhere_zero_rows.is_empty(),
        nowhere_zero_checked: checked,
        nowhere_zero_rows: if checked { nowhere_zero_rows } else { Vec::new() },
        column_order: basis
            .column_order
            .iter()
            .map(|&c| blocks[c].elements().to_vec())
            .collect(),
    })
}

/// Integer matrix helper for tests and callers that build small matrices.
pub fn from_integers(rows: usize, cols: usize, entries: &[i64]) -> ExactMatrix {
    assert_eq!(entries.len(), rows * cols);
    ExactMatrix {
        rows,
        cols,
        data: entries.iter().map(|&x| int(x)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_sums(m: &ExactMatrix) -> Vec<BigRational> {
        (0..m.rows())
            .map(|r| m.row(r).iter().fold(BigRational::zero(), |a, b| a + b))
            .collect()
    }

    #[test]
    fn materialized_shapes() {
        let w = materialize_w(2, 3, 5).unwrap();
        assert_eq!((w.rows(), w.cols()), (10, 10));
        for c in 0..10 {
            let ones = (0..10).filter(|&r| w.get(r, c).is_one()).count();
            assert_eq!(ones, 3);
        }
        let w = materialize_w(2, 3, 6).unwrap();
        assert!(row_sums(&w).iter().all(|s| *s == int(4)));
        let w = materialize_w(1, 2, 4).unwrap();
        assert_eq!((w.rows(), w.cols()), (4, 6));
        assert!(row_sums(&w).iter().all(|s| *s == int(3)));
        assert!(materialize_w(3, 2, 6).is_err());
        assert!(matches!(
            materialize_w_capped(2, 3, 10, 100),
            Err(Error::TooLarge { cols: 120, cap: 100 })
        ));
    }

    #[test]
    fn rref_of_small_matrix() {
        let m = from_integers(2, 3, &[2, 4, 6, 1, 3, 5]);
        let (r, piv) = rref(&m);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r, from_integers(2, 3, &[1, 0, -1, 0, 1, 2]));
        let (rr, piv2) = rref(&r);
        assert_eq!((rr, piv2), (r, piv));
    }

    #[test]
    fn basis_dimensions_and_kernel() {
        for (t, k, v, dim) in [(2, 3, 6, 5), (2, 3, 7, 14), (1, 2, 4, 2)] {
            let b = standard_basis(t, k, v).unwrap();
            assert_eq!(b.num_columns(), dim);
            assert!(b.annihilated_by(&materialize_w(t, k, v).unwrap()).unwrap());
            for j in 0..dim {
                for i in 0..dim {
                    let expect = if i == j { BigRational::one() } else { BigRational::zero() };
                    assert_eq!(b.matrix.get(i, j), &expect);
                }
            }
        }
    }

    #[test]
    fn probe_runs_and_skips_nowhere_zero_for_t1() {
        let b = standard_basis(1, 2, 4).unwrap();
        let r = probe_conjectures(&b).unwrap();
        assert!(!r.nowhere_zero_checked);
        assert!(!r.nowhere_zero_row);
        assert_eq!(r.num_basis_columns, 2);
        let b = standard_basis(2, 3, 6).unwrap();
        let r = probe_conjectures(&b).unwrap();
        assert!(r.nowhere_zero_checked);
        assert_eq!(r.column_order.len(), 20);
    }
}
