use serde::Serialize;

use super::{ChainComplexData, SimplicialComplex, SimplicialMap};
use crate::error::Result;
use crate::fgab::{cokernel, lift, pullback, FgAbGroup, GroupHom, Pullback};
use crate::linalg::{IntMatrix, IntVector};

/// The four groups and maps of the square
/// `H^n(K, Z∪W) → H^n(K, W) → H^n(Y, W′) ← H^n(Y, Z∪W′)`.
#[derive(Clone, Debug)]
pub struct PullbackSquare {
    pub top: GroupHom,
    pub left: GroupHom,
    pub i_star: GroupHom,
    pub j_star: GroupHom,
    pub pullback: Pullback,
    /// `H^n(K, Z∪W) → pullback`.
    pub comparison: GroupHom,
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackCheck {
    pub degree: usize,
    pub source: String,
    pub pullback: String,
    pub surjective: bool,
    /// For each pullback generator, a cocycle on `(K, Z∪W)` mapping onto it.
    pub preimages: Vec<IntVector>,
    /// Index of a pullback generator with no preimage.
    pub failing_generator: Option<usize>,
}

pub(crate) fn pullback_square(
    k: &SimplicialComplex,
    y: &SimplicialComplex,
    z: &SimplicialComplex,
    w: &SimplicialComplex,
    n: usize,
) -> Result<PullbackSquare> {
    z.check_subcomplex_of(y, "Z in Y")?;
    y.check_subcomplex_of(k, "Y in K")?;
    w.check_subcomplex_of(k, "W in K")?;
    let w1 = w.intersection(y);
    let zw = z.union(w);
    let zw1 = z.union(&w1);
    let id_k = SimplicialMap::identity(k);
    let id_y = SimplicialMap::identity(y);
    let incl = SimplicialMap::inclusion(y, k)?;
    let left = id_k.induced_relative_cohomology(w, &zw, n)?;
    let top = incl.induced_relative_cohomology(&zw1, &zw, n)?;
    let i_star = incl.induced_relative_cohomology(&w1, w, n)?;
    let j_star = id_y.induced_relative_cohomology(&w1, &zw1, n)?;
    let pb = pullback(&i_star, &j_star)?;
    let comparison = pb.factor(&left, &top)?.expect("the square of restrictions commutes");
    Ok(PullbackSquare { top, left, i_star, j_star, pullback: pb, comparison })
}

/// Checks that `H^n(K, Z∪W)` surjects onto the pullback of `i*` and `j*`,
/// for `Z ⊆ Y ⊆ K` and `W ⊆ K`, with `W′ = W ∩ Y`.
pub fn check_cochain_pullback(
    k: &SimplicialComplex,
    y: &SimplicialComplex,
    z: &SimplicialComplex,
    w: &SimplicialComplex,
    n: usize,
) -> Result<PullbackCheck> {
    let sq = pullback_square(k, y, z, w, n)?;
    let surjective = cokernel(&sq.comparison).0.is_trivial();
    let reps = ChainComplexData::relative_unchecked(k, &z.union(w)).cohomology(n).representatives();
    let p = sq.pullback.group.clone();
    let mut preimages = Vec::new();
    let mut failing = None;
    for g in 0..p.generators() {
        let pick = GroupHom::new(FgAbGroup::free(1), p.clone(), IntMatrix::from_columns(p.generators(), &[p.generator(g)]))?;
        match lift(&sq.comparison, &pick)? {
            Some(x) => preimages.push(reps.mul_vec(&x.matrix().column(0))),
            None => {
                failing = Some(g);
                break;
            }
        }
    }
    Ok(PullbackCheck {
        degree: n,
        source: sq.comparison.source().to_string(),
        pullback: p.to_string(),
        surjective: surjective && failing.is_none(),
        preimages: if failing.is_none() { preimages } else { Vec::new() },
        failing_generator: failing,
    })
}
