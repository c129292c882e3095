use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Column-style Hermite normal form `H = A · V` with `V` unimodular.
#[derive(Clone, Debug)]
pub struct HnfDecomposition {
    pub h: IntMatrix,
    pub v: IntMatrix,
    /// `(row, column)` of each pivot; pivot columns are `0..pivots.len()`.
    pub pivots: Vec<(usize, usize)>,
}

impl HnfDecomposition {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Column Hermite normal form of `a`; spans the same column lattice.
///
/// Nonzero columns come first in echelon order: each pivot is positive and
/// every entry to its left in the pivot row lies in `[0, pivot)`.
pub fn hnf(a: &IntMatrix) -> IntMatrix {
    hnf_with_transform(a).h
}

pub fn hnf_with_transform(a: &IntMatrix) -> HnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut v = IntMatrix::identity(n);
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..m {
        if k == n {
            break;
        }
        loop {
            // Smallest nonzero entry in row i among the free columns.
            let mut best: Option<usize> = None;
            for j in k..n {
                if !h[(i, j)].is_zero() && best.is_none_or(|b| h[(i, j)].abs() < h[(i, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(k, b);
            v.swap_cols(k, b);
            let mut done = true;
            for j in k + 1..n {
                if !h[(i, j)].is_zero() {
                    let q = h[(i, j)].div_floor(&h[(i, k)]);
                    h.add_col_multiple(j, k, &-&q);
                    v.add_col_multiple(j, k, &-q);
                    if !h[(i, j)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            h.negate_col(k);
            v.negate_col(k);
        }
        let p: BigInt = h[(i, k)].clone();
        for j in 0..k {
            let q = h[(i, j)].div_floor(&p);
            if !q.is_zero() {
                h.add_col_multiple(j, k, &-&q);
                v.add_col_multiple(j, k, &-q);
            }
        }
        pivots.push((i, k));
        k += 1;
    }
    HnfDecomposition { h, v, pivots }
}

/// Canonical basis of the column lattice: the nonzero HNF columns.
pub fn lattice_basis(a: &IntMatrix) -> IntMatrix {
    let dec = hnf_with_transform(a);
    let r = dec.rank();
    dec.h.select_columns(&(0..r).collect::<Vec<_>>())
}
