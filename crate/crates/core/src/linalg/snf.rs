use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal in Smith form.
///
/// `u_inv` is carried along so that callers can map Smith coordinates back
/// to the original basis without inverting `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SnfDecomposition {
    /// The nonzero diagonal entries `d_1 | d_2 | ... | d_rank`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form with transforms.
///
/// Pivoting always takes the entry of least absolute value in the active
/// submatrix, so the result is deterministic for a given input.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut u_inv = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    let swap_r = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, i: usize, j: usize| {
        d.swap_rows(i, j);
        u.swap_rows(i, j);
        ui.swap_cols(i, j);
    };
    // row[dst] += k * row[src]
    let add_r = |d: &mut IntMatrix, u: &mut IntMatrix, ui: &mut IntMatrix, dst: usize, src: usize, k: &BigInt| {
        d.add_row_multiple(dst, src, k);
        u.add_row_multiple(dst, src, k);
        ui.add_col_multiple(src, dst, &-k);
    };

    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = min_abs_position(&d, t..m, t..n) else { break };
        swap_r(&mut d, &mut u, &mut u_inv, t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            // Clear column t below the pivot.
            for i in t + 1..m {
                if !d[(i, t)].is_zero() {
                    let q = d[(i, t)].div_floor(&d[(t, t)]);
                    add_r(&mut d, &mut u, &mut u_inv, i, t, &-q);
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..n {
                if !d[(t, j)].is_zero() {
                    let q = d[(t, j)].div_floor(&d[(t, t)]);
                    d.add_col_multiple(j, t, &-&q);
                    v.add_col_multiple(j, t, &-q);
                }
            }
            let col_left = (t + 1..m).find(|&i| !d[(i, t)].is_zero());
            let row_left = (t + 1..n).find(|&j| !d[(t, j)].is_zero());
            if col_left.is_some() || row_left.is_some() {
                // A remainder smaller than the pivot survived; promote the smallest.
                let mut best: Option<(usize, usize)> = None;
                for i in t + 1..m {
                    if !d[(i, t)].is_zero() && best.is_none_or(|(bi, bj)| d[(i, t)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, t));
                    }
                }
                for j in t + 1..n {
                    if !d[(t, j)].is_zero() && best.is_none_or(|(bi, bj)| d[(t, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((t, j));
                    }
                }
                let (bi, bj) = best.expect("nonzero remainder");
                if bi != t {
                    swap_r(&mut d, &mut u, &mut u_inv, t, bi);
                } else {
                    d.swap_cols(t, bj);
                    v.swap_cols(t, bj);
                }
                continue;
            }
            // Enforce divisibility by folding an offending row into row t.
            let p = d[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => add_r(&mut d, &mut u, &mut u_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }
    SnfDecomposition { u, u_inv, d, v, rank: t }
}

fn min_abs_position(
    d: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
                if x.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> SnfDecomposition {
        let s = snf(a);
        assert_eq!(&(&s.u * a) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(a.rows()));
        assert!(s.d.is_diagonal());
        s
    }

    #[test]
    fn zero_matrix_is_fixed() {
        let s = check(&IntMatrix::from_rows(&[vec![0]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[vec![0]]));
        assert_eq!(s.u, IntMatrix::identity(1));
        assert_eq!(s.v, IntMatrix::identity(1));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn coprime_diagonal_merges() {
        let s = check(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn empty_shapes() {
        let s = check(&IntMatrix::zeros(3, 0));
        assert_eq!(s.rank, 0);
        let s = check(&IntMatrix::zeros(0, 2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }
}
