use std::fmt;

use num_bigint::BigInt;

use super::FgAbGroup;
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntVector};

/// Homomorphism given on generators: column `j` of `matrix` is the image of
/// source generator `j` in target coordinates.
#[derive(Clone)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks that every source relator maps into the target relation lattice.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(Error::DimensionMismatch(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        let images = &matrix * source.relations();
        for j in 0..images.cols() {
            if !target.is_zero(&images.column(j)) {
                return Err(Error::IllDefinedHom { column: j });
            }
        }
        Ok(GroupHom { source, target, matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.generators()) }
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.generators(), source.generators()),
        }
    }

    /// Multiplication by `k` on a group (always well defined).
    pub fn scalar(g: &FgAbGroup, k: impl Into<BigInt>) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.generators()).scale(&k.into()) }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> IntVector {
        self.matrix.mul_vec(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if !self.target.same_presentation(&other.source) {
            return Err(Error::NotComposable(0));
        }
        Ok(GroupHom { source: self.source.clone(), target: other.target.clone(), matrix: &other.matrix * &self.matrix })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom> {
        other.then(self)
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero(&self.matrix.column(j)))
    }

    /// Equality as maps: same endpoints and generator images agree in the target.
    pub fn equals(&self, other: &GroupHom) -> bool {
        self.source.same_presentation(&other.source)
            && self.target.same_presentation(&other.target)
            && (0..self.matrix.cols())
                .all(|j| self.target.elements_equal(&self.matrix.column(j), &other.matrix.column(j)))
    }

    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom> {
        if !(self.source.same_presentation(&other.source) && self.target.same_presentation(&other.target)) {
            return Err(Error::NotComposable(0));
        }
        Ok(GroupHom { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.sub(&other.matrix) })
    }

    pub fn negate(&self) -> GroupHom {
        GroupHom { source: self.source.clone(), target: self.target.clone(), matrix: self.matrix.scale(&BigInt::from(-1)) }
    }

    pub(crate) fn from_parts_unchecked(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> GroupHom {
        GroupHom { source, target, matrix }
    }
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom[{} -> {}]{:?}", self.source, self.target, self.matrix)
    }
}
