//! Seeded random complexes and subcomplex data.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SimplicialComplex;

/// Complex on at most `max_vertices` vertices with a few random facets.
pub fn random_complex(rng: &mut ChaCha8Rng, max_vertices: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let count = rng.gen_range(1..=5);
    let verts: Vec<usize> = (0..n).collect();
    let facets: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let k = rng.gen_range(1..=4.min(n));
            let mut f: Vec<usize> = verts.choose_multiple(rng, k).copied().collect();
            f.sort_unstable();
            f
        })
        .collect();
    SimplicialComplex::from_facets(&verts, &facets).expect("vertices in range")
}

/// Random subcomplex: closure of a random subset of simplices.
pub fn random_subcomplex(rng: &mut ChaCha8Rng, k: &SimplicialComplex, p: f64) -> SimplicialComplex {
    let picked: BTreeSet<Vec<usize>> = k.all_simplices().filter(|_| rng.gen_bool(p)).cloned().collect();
    let facets: Vec<Vec<usize>> = picked.into_iter().collect();
    if facets.is_empty() {
        SimplicialComplex::empty()
    } else {
        SimplicialComplex::from_facet_list(&facets)
    }
}

/// `(K, Y, Z, W)` with `Z ⊆ Y ⊆ K` and `W ⊆ K`.
pub fn random_pullback_data(seed: u64) -> (SimplicialComplex, SimplicialComplex, SimplicialComplex, SimplicialComplex) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = random_complex(&mut rng, 8);
    let y = random_subcomplex(&mut rng, &k, 0.5);
    let z = random_subcomplex(&mut rng, &y, 0.4);
    let w = random_subcomplex(&mut rng, &k, 0.4);
    (k, y, z, w)
}
