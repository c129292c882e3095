//! Seeded random towers for property tests and the verification driver.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Tower;
use crate::fgab::{kernel, FgAbGroup, GroupHom};
use crate::linalg::{IntMatrix, IntVector};

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let v = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_vec(rows, cols, v).expect("shape")
}

/// A random group on `1..=3` generators with a few small relators.
pub fn random_group(rng: &mut ChaCha8Rng) -> FgAbGroup {
    let n = rng.gen_range(1..=3);
    let r = rng.gen_range(0..=2);
    FgAbGroup::new(n, random_matrix(rng, n, r, 4)).expect("shape")
}

/// A random group `H` with a well-defined map `H → target`.
///
/// Relators of `H` are small multiples of kernel vectors of the generator
/// images; with `finite` set, multiples of the exponent of `target` are added
/// so that `H` is finite.
pub fn random_map_into(rng: &mut ChaCha8Rng, target: &FgAbGroup, finite: bool) -> GroupHom {
    let n = rng.gen_range(1..=3);
    let m = random_matrix(rng, target.generators(), n, 3);
    let free = FgAbGroup::free(n);
    let f = GroupHom::new(free, target.clone(), m.clone()).expect("free source");
    let (_, incl) = kernel(&f);
    let mut rel: Vec<IntVector> = Vec::new();
    for c in incl.matrix().columns() {
        if rng.gen_bool(0.7) {
            let k = BigInt::from(rng.gen_range(1..=3));
            rel.push(c.into_iter().map(|x| x * &k).collect());
        }
    }
    if finite {
        let e = target.torsion().last().cloned().unwrap_or_else(|| BigInt::from(1));
        for j in 0..n {
            let mut v = vec![BigInt::from(0); n];
            v[j] = &e * BigInt::from(rng.gen_range(1..=2));
            rel.push(v);
        }
    }
    let h = FgAbGroup::new(n, IntMatrix::from_columns(n, &rel)).expect("shape");
    GroupHom::new(h, target.clone(), m).expect("relators lie in the kernel")
}

/// Random explicit tower with `depth` terms.
pub fn random_tower(seed: u64, depth: usize, finite: bool) -> Tower {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = if finite {
        let n = rng.gen_range(1..=2);
        let d: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(1..=6))).collect();
        FgAbGroup::new(n, IntMatrix::diagonal(n, n, &d)).expect("shape")
    } else {
        random_group(&mut rng)
    };
    let mut groups = vec![first];
    let mut maps = Vec::new();
    for i in 1..depth.max(1) {
        let f = random_map_into(&mut rng, &groups[i - 1], finite);
        groups.push(f.source().clone());
        maps.push(f);
    }
    Tower::explicit(groups, maps).expect("maps compose")
}

/// Random tower `... → G --φ--> G` with `G` free of rank `1..=3` plus optional torsion.
pub fn random_self_map(seed: u64) -> Tower {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = rng.gen_range(1..=2);
    let t: Vec<BigInt> = (0..rng.gen_range(0..=1)).map(|_| BigInt::from(rng.gen_range(2..=4))).collect();
    let g = FgAbGroup::from_invariants(r, &t);
    let n = g.generators();
    // At most one torsion factor, and torsion columns stay inside it.
    let mut m = random_matrix(&mut rng, n, n, 3);
    for j in 0..t.len() {
        for i in t.len()..n {
            m[(i, j)] = BigInt::from(0);
        }
    }
    let phi = GroupHom::new(g.clone(), g, m).expect("torsion maps into torsion");
    Tower::self_map(&phi).expect("endomorphism")
}
