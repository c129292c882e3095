use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{lattice_basis, snf, IntMatrix, IntVector};

/// A finitely generated abelian group `Z^n / L`, where `L` is the column
/// lattice of the relation matrix.
///
/// Elements are coordinate vectors on the `n` generators. Two vectors denote
/// the same element when their difference lies in `L`.
#[derive(Clone)]
pub struct FgAbGroup(Arc<Inner>);

struct Inner {
    generators: usize,
    relations: IntMatrix,
    relation_basis: IntMatrix,
    // Smith data of `relations`: y = u·x are coordinates in which the group is
    // ⊕ Z/diag[i] (diag[i] == 0 for free coordinates).
    u: IntMatrix,
    u_inv: IntMatrix,
    diag: Vec<BigInt>,
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    /// `⟨generators | columns of relations⟩`.
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() != generators {
            return Err(Error::DimensionMismatch(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        let s = snf(&relations);
        let mut diag = vec![BigInt::zero(); generators];
        for (i, d) in diag.iter_mut().enumerate().take(s.rank) {
            *d = s.d[(i, i)].clone();
        }
        let torsion: Vec<BigInt> = diag[..s.rank].iter().filter(|d| !d.is_one()).cloned().collect();
        Ok(FgAbGroup(Arc::new(Inner {
            generators,
            relation_basis: lattice_basis(&relations),
            relations,
            u: s.u,
            u_inv: s.u_inv,
            diag,
            free_rank: generators - s.rank,
            torsion,
        })))
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, IntMatrix::zeros(rank, 0)).expect("shape is consistent")
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::new(1, IntMatrix::from_rows(&[vec![order.into()]])).expect("shape is consistent")
    }

    /// `Z^free_rank ⊕ Z/t_1 ⊕ ...` in the canonical presentation (torsion generators first).
    pub fn from_invariants(free_rank: usize, torsion: &[BigInt]) -> Self {
        let n = torsion.len() + free_rank;
        let rel = IntMatrix::diagonal(n, torsion.len(), torsion);
        Self::new(n, rel).expect("shape is consistent")
    }

    pub fn generators(&self) -> usize {
        self.0.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    /// Hermite basis of the relation lattice.
    pub fn relation_basis(&self) -> &IntMatrix {
        &self.0.relation_basis
    }

    pub fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    /// Torsion coefficients `t_1 | t_2 | ...`, each greater than one.
    pub fn torsion(&self) -> &[BigInt] {
        &self.0.torsion
    }

    pub fn invariants(&self) -> (usize, Vec<BigInt>) {
        (self.free_rank(), self.torsion().to_vec())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.torsion().is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion().is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion().iter().product())
    }

    /// Isomorphism test by canonical invariants.
    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.invariants() == other.invariants()
    }

    /// Same generator count and same relation lattice: the groups are equal
    /// as presented, so homomorphisms compose across them.
    pub fn same_presentation(&self, other: &FgAbGroup) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.generators() == other.generators() && self.relation_basis() == other.relation_basis())
    }

    pub fn zero_element(&self) -> IntVector {
        vec![BigInt::zero(); self.generators()]
    }

    pub fn generator(&self, i: usize) -> IntVector {
        let mut v = self.zero_element();
        v[i] = BigInt::one();
        v
    }

    /// Canonical coordinates: the Smith coordinates reduced into `[0, t)` on
    /// torsion factors, dropped on trivial factors. Equal elements have equal
    /// canonical coordinates.
    pub fn canonical(&self, x: &[BigInt]) -> IntVector {
        assert_eq!(x.len(), self.generators(), "element has the wrong length");
        let y = self.0.u.mul_vec(x);
        y.into_iter()
            .zip(&self.0.diag)
            .filter(|(_, d)| !d.is_one())
            .map(|(c, d)| if d.is_zero() { c } else { c.mod_floor(d) })
            .collect()
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.canonical(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let d: IntVector = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero(&d)
    }

    /// Whether `x` lies in the relation lattice exactly (as an integer vector).
    pub fn in_relation_lattice(&self, x: &[BigInt]) -> bool {
        self.is_zero(x)
    }

    /// Order of an element, `None` for infinite order.
    pub fn element_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let y = self.0.u.mul_vec(x);
        let mut order = BigInt::one();
        for (c, d) in y.iter().zip(&self.0.diag) {
            if d.is_one() {
                continue;
            }
            if d.is_zero() {
                if !c.is_zero() {
                    return None;
                }
                continue;
            }
            let c = c.mod_floor(d);
            let o = d / c.gcd(d);
            order = order.lcm(&o);
        }
        Some(order)
    }

    /// Columns generating the torsion subgroup, in ambient coordinates.
    pub fn torsion_generators(&self) -> IntMatrix {
        let cols: Vec<usize> = (0..self.generators())
            .filter(|&i| !self.0.diag[i].is_zero() && !self.0.diag[i].is_one())
            .collect();
        self.0.u_inv.select_columns(&cols)
    }

    /// Projection `Z^n → Z^free_rank` onto the torsion-free quotient (rows of `U`).
    pub fn free_quotient_projection(&self) -> IntMatrix {
        let rows: Vec<usize> = (0..self.generators()).filter(|&i| self.0.diag[i].is_zero()).collect();
        self.0.u.select_rows(&rows)
    }

    /// Section of [`Self::free_quotient_projection`]: images of the free basis.
    pub fn free_quotient_section(&self) -> IntMatrix {
        let cols: Vec<usize> = (0..self.generators()).filter(|&i| self.0.diag[i].is_zero()).collect();
        self.0.u_inv.select_columns(&cols)
    }

    /// Smith transform data `(u, u_inv, diag)`.
    pub(crate) fn smith(&self) -> (&IntMatrix, &IntMatrix, &[BigInt]) {
        (&self.0.u, &self.0.u_inv, &self.0.diag)
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({} gens; {})", self.generators(), self)
    }
}

/// Prints the canonical decomposition, e.g. `Z^2 + Z/2 + Z/6`, or `0`.
impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion().iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
