use num_bigint::BigInt;

use super::{subgroup_group, FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::linalg::{lattice_basis, saturate, snf, solve_with, IntMatrix, IntVector};

/// Subgroup of an ambient group, given by generating elements (columns).
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FgAbGroup,
    generators: IntMatrix,
}

impl Subgroup {
    pub fn new(ambient: FgAbGroup, generators: IntMatrix) -> Result<Self> {
        if generators.rows() != ambient.generators() {
            return Err(Error::DimensionMismatch(format!(
                "generator vectors have length {}, ambient has {} generators",
                generators.rows(),
                ambient.generators()
            )));
        }
        Ok(Subgroup { ambient, generators })
    }

    pub fn from_vectors(ambient: FgAbGroup, vectors: &[IntVector]) -> Result<Self> {
        let n = ambient.generators();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch(format!("element of length {} in a group with {n} generators", v.len())));
        }
        Ok(Subgroup { generators: IntMatrix::from_columns(n, vectors), ambient })
    }

    pub fn whole(ambient: &FgAbGroup) -> Self {
        Subgroup { generators: IntMatrix::identity(ambient.generators()), ambient: ambient.clone() }
    }

    pub fn zero(ambient: &FgAbGroup) -> Self {
        Subgroup { generators: IntMatrix::zeros(ambient.generators(), 0), ambient: ambient.clone() }
    }

    /// Image of a homomorphism as a subgroup of its target.
    pub fn image_of(f: &GroupHom) -> Self {
        Subgroup { ambient: f.target().clone(), generators: f.matrix().clone() }
    }

    pub fn ambient(&self) -> &FgAbGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    /// Canonical basis of the preimage lattice `span(generators) + relations` in `Z^n`.
    pub fn lattice(&self) -> IntMatrix {
        lattice_basis(&self.generators.hconcat(self.ambient.relations()))
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        let s = snf(&self.generators.hconcat(self.ambient.relations()));
        solve_with(&s, x).is_some()
    }

    /// Expresses `x` in terms of the generators, when it lies in the subgroup.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<IntVector> {
        let s = snf(&self.generators.hconcat(self.ambient.relations()));
        solve_with(&s, x).map(|z| z[..self.generators.cols()].to_vec())
    }

    /// First generator of `other` not contained in `self`, if any.
    pub fn missing_from(&self, other: &Subgroup) -> Option<IntVector> {
        let s = snf(&self.generators.hconcat(self.ambient.relations()));
        other.generators.columns().into_iter().find(|c| solve_with(&s, c).is_none())
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        self.ambient.same_presentation(&other.ambient) && self.missing_from(other).is_none()
    }

    pub fn same_as(&self, other: &Subgroup) -> bool {
        self.ambient.same_presentation(&other.ambient) && self.lattice() == other.lattice()
    }

    /// The subgroup as an abstract group, with its inclusion into the ambient group.
    pub fn as_group(&self) -> (FgAbGroup, GroupHom) {
        subgroup_group(&self.ambient, &self.generators)
    }

    /// Image of this subgroup under `f`.
    pub fn map(&self, f: &GroupHom) -> Result<Subgroup> {
        if !f.source().same_presentation(&self.ambient) {
            return Err(Error::NotComposable(0));
        }
        Ok(Subgroup { ambient: f.target().clone(), generators: f.matrix() * &self.generators })
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        if !self.ambient.same_presentation(&other.ambient) {
            return Err(Error::DimensionMismatch("subgroups of different groups".into()));
        }
        Ok(Subgroup { ambient: self.ambient.clone(), generators: self.generators.hconcat(&other.generators) })
    }

    /// Replaces the generators by a canonical lattice basis (drops redundancy).
    pub fn reduced(&self) -> Subgroup {
        let kept: Vec<IntVector> =
            self.lattice().columns().into_iter().filter(|c| !self.ambient.is_zero(c)).collect();
        Subgroup { generators: IntMatrix::from_columns(self.ambient.generators(), &kept), ambient: self.ambient.clone() }
    }

    /// Purification `{g : n·g ∈ H for some n ≠ 0}` inside a torsion-free ambient group.
    pub fn purify(&self) -> Result<Subgroup> {
        if !self.ambient.is_free() {
            return Err(Error::TorsionAmbient);
        }
        let sat = saturate(&self.generators.hconcat(self.ambient.relations()));
        Ok(Subgroup { ambient: self.ambient.clone(), generators: sat }.reduced())
    }

    /// Pure means the quotient `ambient / self` is torsion-free.
    pub fn is_pure(&self) -> bool {
        let q = FgAbGroup::new(self.ambient.generators(), self.ambient.relations().hconcat(&self.generators))
            .expect("shape is consistent");
        q.is_free()
    }

    pub fn index_in(&self, larger: &Subgroup) -> Option<BigInt> {
        if !larger.contains_subgroup(self) {
            return None;
        }
        let (_, incl) = larger.as_group();
        let pre = crate::fgab::lift(&incl, &GroupHom::from_parts_unchecked(
            FgAbGroup::free(self.generators.cols()),
            self.ambient.clone(),
            self.generators.clone(),
        ))
        .ok()
        .flatten()?;
        let (q, _) = crate::fgab::cokernel(&pre);
        q.order()
    }
}
