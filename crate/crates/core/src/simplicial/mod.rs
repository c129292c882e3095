//! Finite simplicial complexes and their integral (co)homology.

mod chains;
mod complex;
mod json;
mod maps;
mod pullback;
pub mod random;

pub use chains::{cohomology, homology, relative_cohomology, relative_homology, ChainComplexData};
pub use complex::{Simplex, SimplicialComplex};
pub use json::{ComplexJson, PullbackCheckJson, SimplicialMapJson, TelescopeJson};
pub use maps::{mapping_cylinder, mapping_telescope, Cylinder, SimplicialMap, Telescope};
pub use pullback::{check_cochain_pullback, PullbackCheck, PullbackSquare};

#[cfg(test)]
pub(crate) use pullback::pullback_square;

/// Map `v ↦ v mod m` from the `(k·m)`-gon onto the `m`-gon, of degree `k`.
pub fn polygon_wrap(k: usize, m: usize) -> SimplicialMap {
    let src = SimplicialComplex::polygon(k * m);
    let tgt = SimplicialComplex::polygon(m);
    SimplicialMap::from_fn(&src, &tgt, |v| v % m).expect("wrap of polygons is simplicial")
}
