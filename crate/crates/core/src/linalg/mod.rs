//! Exact integer linear algebra: Smith and Hermite normal forms, integer
//! solving, kernels and lattice saturation.

mod hnf;
mod matrix;
mod snf;

pub use hnf::{hnf, hnf_with_transform, lattice_basis, HnfDecomposition};
pub use matrix::{ivec, IntMatrix, IntVector};
pub use snf::{snf, SnfDecomposition};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Some `x` with `A · x = b` over the integers, or `None` when no integer
/// solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<IntVector>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    Ok(solve_with(&snf(a), b))
}

/// Solve against a precomputed Smith decomposition of `A`.
pub fn solve_with(s: &SnfDecomposition, b: &[BigInt]) -> Option<IntVector> {
    let ub = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); s.v.rows()];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, r) = c.div_rem(&s.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Basis (as columns, in Hermite form) of the integer kernel `{x : A x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let dec = hnf_with_transform(a);
    let r = dec.rank();
    let null: Vec<usize> = (r..a.cols()).collect();
    lattice_basis(&dec.v.select_columns(&null))
}

/// Basis of the saturation `{v : n·v ∈ L for some n ≠ 0}` of the column
/// lattice `L` of `a`, in Hermite form.
pub fn saturate(a: &IntMatrix) -> IntMatrix {
    let s = snf(a);
    let cols: Vec<usize> = (0..s.rank).collect();
    lattice_basis(&s.u_inv.select_columns(&cols))
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    hnf_with_transform(a).rank()
}

/// Whether `v` lies in the column lattice of `basis`.
pub fn lattice_contains(basis: &IntMatrix, v: &[BigInt]) -> bool {
    solve_integer(basis, v).expect("length checked by caller").is_some()
}

/// Whether two generating matrices span the same column lattice.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.rows() == b.rows() && lattice_basis(a) == lattice_basis(b)
}

/// JSON form of an integer matrix; entries are decimal strings.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<JsonInt>>,
}

/// An integer read from either a decimal string or a JSON number; written as a string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            S(String),
            I(i64),
        }
        match Raw::deserialize(d)? {
            Raw::S(s) => s.trim().parse::<BigInt>().map(JsonInt).map_err(serde::de::Error::custom),
            Raw::I(i) => Ok(JsonInt(BigInt::from(i))),
        }
    }
}

impl From<&IntMatrix> for MatrixJson {
    fn from(m: &IntMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.to_rows().into_iter().map(|r| r.into_iter().map(JsonInt).collect()).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for IntMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<IntMatrix> {
        if j.entries.len() != j.rows {
            return Err(Error::DimensionMismatch(format!("{} rows listed, header says {}", j.entries.len(), j.rows)));
        }
        let mut flat = Vec::with_capacity(j.rows * j.cols);
        for (i, r) in j.entries.into_iter().enumerate() {
            if r.len() != j.cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, header says {}", r.len(), j.cols)));
            }
            flat.extend(r.into_iter().map(|x| x.0));
        }
        IntMatrix::from_vec(j.rows, j.cols, flat)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        IntMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_examples() {
        let a = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(solve_integer(&a, &ivec(&[4])).unwrap(), Some(ivec(&[2])));
        assert_eq!(solve_integer(&a, &ivec(&[3])).unwrap(), None);
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![0, 2]]);
        assert_eq!(solve_integer(&a, &ivec(&[3, 2])).unwrap(), Some(ivec(&[2, 1])));
        assert!(solve_integer(&a, &ivec(&[1])).is_err());
    }

    #[test]
    fn saturate_examples() {
        let a = IntMatrix::from_rows(&[vec![2], vec![4]]);
        assert_eq!(saturate(&a), IntMatrix::from_rows(&[vec![1], vec![2]]));
        let u = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        assert!(same_lattice(&saturate(&u), &u));
        let z = saturate(&IntMatrix::zeros(3, 2));
        assert_eq!((z.rows(), z.cols()), (3, 0));
    }

    #[test]
    fn kernel_of_difference_map() {
        let k = kernel_basis(&IntMatrix::from_rows(&[vec![2, -2]]));
        assert_eq!(k, IntMatrix::from_rows(&[vec![1], vec![1]]));
    }

    #[test]
    fn matrix_json_uses_decimal_strings() {
        let m = IntMatrix::from_rows(&[vec![BigInt::from(10).pow(30), BigInt::from(-3)]]);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"1000000000000000000000000000000\""));
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let loose: IntMatrix = serde_json::from_str(r#"{"rows":1,"cols":2,"entries":[[1,"2"]]}"#).unwrap();
        assert_eq!(loose, IntMatrix::from_rows(&[vec![1, 2]]));
        assert!(serde_json::from_str::<IntMatrix>(r#"{"rows":2,"cols":2,"entries":[[1,2]]}"#).is_err());
    }
}
