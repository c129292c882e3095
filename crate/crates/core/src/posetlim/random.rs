//! Seeded random functorial diagrams.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FinitePoset, FinitePosetDiagram};
use crate::fgab::{FgAbGroup, GroupHom};
use crate::linalg::IntMatrix;

/// Random poset on `n` elements (pairs `i < j` kept with probability 0.4);
/// with `directed`, a top element is appended.
pub fn random_poset(rng: &mut ChaCha8Rng, n: usize, directed: bool) -> FinitePoset {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                pairs.push((i, j));
            }
        }
    }
    let mut ids: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    if directed {
        ids.push("top".into());
        pairs.extend((0..n).map(|i| (i, n)));
    }
    FinitePoset::new(ids, &pairs).expect("pairs respect index order")
}

/// `G_x = Z` with `G_y → G_x` multiplication by `h(y)/h(x)`, where
/// `h(x) = ∏_{z ≤ x} q_z` for random `q_z ∈ {1, 2, 3}`.
pub fn random_diagram(seed: u64, n: usize, directed: bool) -> FinitePosetDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poset = random_poset(&mut rng, n, directed);
    let m = poset.len();
    let q: Vec<u64> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
    let h: Vec<u64> = (0..m).map(|x| (0..m).filter(|&z| poset.leq(z, x)).map(|z| q[z]).product()).collect();
    let groups: Vec<FgAbGroup> = (0..m).map(|_| FgAbGroup::free(1)).collect();
    let mut given = Vec::new();
    for x in 0..m {
        for y in 0..m {
            if poset.lt(x, y) {
                let k = BigInt::from(h[y] / h[x]);
                let f = GroupHom::new(groups[y].clone(), groups[x].clone(), IntMatrix::from_rows(&[vec![k]])).expect("free");
                given.push(((x, y), f));
            }
        }
    }
    FinitePosetDiagram::new(poset, groups, given).expect("functorial by construction")
}
