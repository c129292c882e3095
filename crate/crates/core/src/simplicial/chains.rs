use num_bigint::BigInt;

use super::{Simplex, SimplicialComplex};
use crate::error::Result;
use crate::fgab::{subquotient, FgAbGroup, GroupHom, Subquotient};
use crate::linalg::IntMatrix;

/// Chains of a pair `(K, L)`: basis = simplices of `K` not in `L`, by dimension.
#[derive(Clone, Debug)]
pub struct ChainComplexData {
    pub basis: Vec<Vec<Simplex>>,
    /// `boundaries[n] : C_n → C_{n-1}`; `boundaries[0]` has no rows.
    pub boundaries: Vec<IntMatrix>,
}

impl ChainComplexData {
    pub fn absolute(k: &SimplicialComplex) -> Self {
        Self::relative_unchecked(k, &SimplicialComplex::empty())
    }

    pub fn relative(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Self> {
        l.check_subcomplex_of(k, "relative chains")?;
        Ok(Self::relative_unchecked(k, l))
    }

    pub(crate) fn relative_unchecked(k: &SimplicialComplex, l: &SimplicialComplex) -> Self {
        let top = (k.dimension() + 1).max(0) as usize;
        let basis: Vec<Vec<Simplex>> =
            (0..top).map(|d| k.simplices(d).iter().filter(|s| !l.contains(s)).cloned().collect()).collect();
        let mut boundaries = Vec::with_capacity(top);
        for n in 0..top {
            let rows = if n == 0 { 0 } else { basis[n - 1].len() };
            let mut m = IntMatrix::zeros(rows, basis[n].len());
            if n > 0 {
                let pos: std::collections::HashMap<&Simplex, usize> =
                    basis[n - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
                for (j, s) in basis[n].iter().enumerate() {
                    for i in 0..s.len() {
                        let mut face = s.clone();
                        face.remove(i);
                        if let Some(&r) = pos.get(&face) {
                            m[(r, j)] = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
                        }
                    }
                }
            }
            boundaries.push(m);
        }
        ChainComplexData { basis, boundaries }
    }

    pub fn rank(&self, n: usize) -> usize {
        self.basis.get(n).map_or(0, Vec::len)
    }

    fn chain_group(&self, n: isize) -> FgAbGroup {
        if n < 0 {
            FgAbGroup::trivial()
        } else {
            FgAbGroup::free(self.rank(n as usize))
        }
    }

    /// `∂_n` as a homomorphism (zero outside the stored range).
    pub fn boundary(&self, n: isize) -> GroupHom {
        let (src, tgt) = (self.chain_group(n), self.chain_group(n - 1));
        match usize::try_from(n).ok().and_then(|i| self.boundaries.get(i)) {
            Some(m) if n > 0 => GroupHom::new(src, tgt, m.clone()).expect("free groups"),
            _ => GroupHom::zero(&src, &tgt),
        }
    }

    /// `δ^n = ∂_{n+1}^T : C^n → C^{n+1}`.
    pub fn coboundary(&self, n: isize) -> GroupHom {
        let (src, tgt) = (self.chain_group(n), self.chain_group(n + 1));
        let d = self.boundary(n + 1);
        GroupHom::new(src, tgt, d.matrix().transpose()).expect("free groups")
    }

    pub fn homology(&self, n: usize) -> Subquotient {
        let n = n as isize;
        subquotient(&self.boundary(n + 1), &self.boundary(n)).expect("∂∂ = 0")
    }

    pub fn cohomology(&self, n: usize) -> Subquotient {
        let n = n as isize;
        subquotient(&self.coboundary(n - 1), &self.coboundary(n)).expect("δδ = 0")
    }

    /// Whether `∂_{n} ∘ ∂_{n+1} = 0` for every `n`.
    pub fn is_chain_complex(&self) -> bool {
        (1..self.boundaries.len()).all(|n| (&self.boundaries[n - 1] * &self.boundaries[n]).is_zero())
    }
}

pub fn homology(k: &SimplicialComplex, n: usize) -> FgAbGroup {
    ChainComplexData::absolute(k).homology(n).group
}

pub fn cohomology(k: &SimplicialComplex, n: usize) -> FgAbGroup {
    ChainComplexData::absolute(k).cohomology(n).group
}

pub fn relative_homology(k: &SimplicialComplex, l: &SimplicialComplex, n: usize) -> Result<FgAbGroup> {
    Ok(ChainComplexData::relative(k, l)?.homology(n).group)
}

pub fn relative_cohomology(k: &SimplicialComplex, l: &SimplicialComplex, n: usize) -> Result<FgAbGroup> {
    Ok(ChainComplexData::relative(k, l)?.cohomology(n).group)
}
