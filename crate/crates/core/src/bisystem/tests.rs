use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fgab::{is_isomorphism, Subgroup};
use crate::linalg::IntMatrix;
use crate::towers::random::{random_group, random_map_into};

fn z() -> FgAbGroup {
    FgAbGroup::free(1)
}

fn mat(rows: usize, cols: usize, v: &[i64]) -> IntMatrix {
    IntMatrix::from_vec(rows, cols, v.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
}

fn w(a: usize, b: usize) -> Window {
    Window::new(a, b)
}

fn p_power(p: i64) -> BiSystem {
    BiSystem::bi_periodic(GroupHom::scalar(&z(), p), GroupHom::scalar(&z(), p)).unwrap()
}

fn sum_grid() -> ToeplitzGrid {
    let sum = GroupHom::new(FgAbGroup::free(2), z(), mat(1, 2, &[1, 1])).unwrap();
    ToeplitzGrid::new(-1, vec![z(), FgAbGroup::free(2)], vec![sum.clone()], vec![sum]).unwrap()
}

#[test]
fn constant_grid_is_identity() {
    let r = tau(&BiSystem::constant(&z()), w(3, 3)).unwrap();
    assert!(r.colim_lim.group().unwrap().is_isomorphic(&z()));
    assert!(r.lim_colim.group().unwrap().is_isomorphic(&z()));
    assert!(r.is_isomorphism());
    assert!(r.kernel.unwrap().is_trivial() && r.cokernel.unwrap().is_trivial());
}

#[test]
fn zero_grid_gives_zero() {
    let r = tau(&BiSystem::constant(&FgAbGroup::trivial()), w(2, 2)).unwrap();
    assert_eq!(r.colim_lim.is_zero(), Some(true));
    assert_eq!(r.lim_colim.is_zero(), Some(true));
}

#[test]
fn p_power_grid_is_not_surjective() {
    let s = p_power(2);
    let r = tau(&s, w(6, 6)).unwrap();
    assert_eq!(r.colim_lim.is_zero(), Some(true));
    assert_eq!(r.lim_colim.is_zero(), Some(false));
    assert_eq!(r.surjective.verdict, Verdict::CertifiedFalse);
    assert_eq!(r.injective.verdict, Verdict::CertifiedTrue);
    let t = r.thread.unwrap();
    assert_eq!(t.step, 1);
    let g = z();
    assert!(t.verify(&GroupHom::scalar(&g, 2), &GroupHom::scalar(&g, 2), &Subgroup::zero(&g)).unwrap());
}

#[test]
fn p_power_window_chase() {
    // Every column thread dies: lim of (Z, x2) truncated at depth 6 is 2^5 Z at the top.
    let s = p_power(2);
    let grid = s.window(w(6, 6)).unwrap();
    let mut img = BigInt::from(1);
    for b in 0..5 {
        img *= BigInt::from(2);
        assert_eq!(&grid.beta_maps[0][b].matrix().entries()[0], &BigInt::from(2));
    }
    assert_eq!(img, BigInt::from(32));
    // The diagonal element 1 at (β, β) is compatible across rows.
    for b in 0..5 {
        let down = s.beta_map(b + 1, b).apply(&[BigInt::from(1)]);
        let across = s.alpha_map(b, b).apply(&[BigInt::from(1)]);
        assert_eq!(down, across);
    }
}

#[test]
fn explicit_grid_uses_identity_tails() {
    let g = FgAbGroup::free(1);
    let two = GroupHom::scalar(&g, 2);
    let id = GroupHom::identity(&g);
    let grid = ExplicitGrid::new(
        vec![vec![g.clone(); 2]; 3],
        vec![vec![two.clone(), two.clone()]; 2],
        vec![vec![id.clone()]; 3],
    )
    .unwrap();
    let r = tau(&BiSystem::Explicit(grid), w(3, 2)).unwrap();
    assert!(r.is_isomorphism());
    assert_eq!(r.tau.unwrap().matrix(), &mat(1, 1, &[1]));
}

#[test]
fn non_commuting_squares_are_rejected() {
    let g = FgAbGroup::free(2);
    let u = GroupHom::new(g.clone(), g.clone(), mat(2, 2, &[1, 1, 0, 1])).unwrap();
    let v = GroupHom::new(g.clone(), g.clone(), mat(2, 2, &[1, 0, 1, 1])).unwrap();
    assert!(matches!(BiSystem::bi_periodic(u, v), Err(Error::NotCommutative { .. })));
    let sum = GroupHom::new(FgAbGroup::free(2), z(), mat(1, 2, &[1, 1])).unwrap();
    let first = GroupHom::new(FgAbGroup::free(2), z(), mat(1, 2, &[1, 0])).unwrap();
    assert!(ToeplitzGrid::new(-1, vec![z(), FgAbGroup::free(2)], vec![sum], vec![first]).is_err());
}

#[test]
fn diagonal_sum_grid_kills_the_difference() {
    let r = tau(&BiSystem::Toeplitz(sum_grid()), w(4, 4)).unwrap();
    assert_eq!(r.injective.verdict, Verdict::CertifiedFalse);
    assert_eq!(r.surjective.verdict, Verdict::CertifiedTrue);
    let x = r.kernel_witness.unwrap();
    assert_eq!(&x[0] + &x[1], BigInt::from(0));
    assert!(r.kernel.unwrap().is_isomorphic(&z()));
}

#[test]
fn diagonal_grid_round_trips_through_a_window() {
    let s = BiSystem::Toeplitz(sum_grid());
    let back = ToeplitzGrid::from_explicit(&s.window(w(4, 5)).unwrap()).unwrap();
    let r1 = tau(&s, w(4, 5)).unwrap();
    let r2 = tau(&BiSystem::Toeplitz(back), w(4, 5)).unwrap();
    assert!(r1.tau.unwrap().equals(&r2.tau.unwrap()));
}

#[test]
fn exact_sequence_slots() {
    let lower = BiSystem::constant(&z());
    let r = tau_with_upper(&lower, &BiSystem::constant(&z()), w(3, 3)).unwrap();
    assert_eq!(r.sequence_exact(), Some(true));
    let r = tau_with_upper(&BiSystem::Toeplitz(sum_grid()), &BiSystem::constant(&z()), w(3, 3)).unwrap();
    assert_eq!(r.sequence_exact(), Some(false));
    let upper = BiSystem::bi_periodic(GroupHom::identity(&z()), GroupHom::scalar(&z(), 3)).unwrap();
    let r = tau_with_upper(&lower, &upper, w(3, 3)).unwrap();
    assert_eq!(r.p1.unwrap().value, SlotValue::NonVanishing);
    assert_eq!(r.q1.unwrap().value, SlotValue::NonVanishing);
    assert!(r.sequence.is_none());
    let r = tau_with_upper(&lower, &p_power(3), w(3, 3)).unwrap();
    assert_eq!(r.p1.unwrap().value, SlotValue::Undetermined);
    assert_eq!(r.q1.unwrap().value, SlotValue::Vanishes);
    assert!(r.sequence.is_none());
}

#[test]
fn window_parsing() {
    assert_eq!("6,6".parse::<Window>().unwrap(), w(6, 6));
    assert!("6".parse::<Window>().is_err());
    assert!("0,3".parse::<Window>().is_err());
}

#[test]
fn bisystem_json_round_trip() {
    for s in [p_power(2), BiSystem::Toeplitz(sum_grid()), BiSystem::Explicit(p_power(2).window(w(2, 3)).unwrap())] {
        let text = serde_json::to_string(&s).unwrap();
        let back: BiSystem = serde_json::from_str(&text).unwrap();
        let (a, b) = (tau(&s, w(3, 3)).unwrap(), tau(&back, w(3, 3)).unwrap());
        assert_eq!(a.injective.verdict, b.injective.verdict);
        assert_eq!(a.surjective.verdict, b.surjective.verdict);
    }
}

fn random_endo(rng: &mut ChaCha8Rng, g: &FgAbGroup) -> GroupHom {
    let n = g.generators();
    let v: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-2..=2)).collect();
    GroupHom::new(FgAbGroup::free(n), FgAbGroup::free(n), mat(n, n, &v)).unwrap()
}

/// `u` random on `Z^n`, `v = c0 + c1 u` so that the two commute.
fn random_periodic(seed: u64) -> BiSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=2);
    let g = FgAbGroup::free(n);
    let u = random_endo(&mut rng, &g);
    let (c0, c1) = (rng.gen_range(-2..=2), rng.gen_range(-1..=1));
    let v = GroupHom::new(g.clone(), g.clone(), GroupHom::scalar(&g, c0).matrix().add(&u.matrix().scale(&BigInt::from(c1)))).unwrap();
    BiSystem::bi_periodic(u, v).unwrap()
}

fn random_diagonal(seed: u64) -> ToeplitzGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(1..=4);
    let mut groups = vec![random_group(&mut rng)];
    let mut maps = Vec::new();
    for _ in 1..len {
        let f = random_map_into(&mut rng, groups.last().unwrap(), false);
        groups.push(f.source().clone());
        maps.push(f);
    }
    let low = rng.gen_range(-2..=1);
    ToeplitzGrid::new(low, groups, maps.clone(), maps).unwrap()
}

/// `τ` by pushing generators of the top diagonal through window cells:
/// down the column to row `b`, then along the row until the diagonal tail.
fn chase(t: &ToeplitzGrid, b_row: usize) -> IntMatrix {
    let s = BiSystem::Toeplitz(t.clone());
    let top = t.high().max(0) as usize + b_row + 1;
    let start_b = top;
    let gens: Vec<_> = (0..t.diagonal(t.high()).generators()).map(|j| t.diagonal(t.high()).generator(j)).collect();
    let mut cols = Vec::new();
    for x in gens {
        let mut cur = x;
        let mut b = start_b;
        while b > b_row {
            cur = s.beta_map(0, b - 1).apply(&cur);
            b -= 1;
        }
        let mut a = 0;
        while (b_row as i64 - a as i64) > t.low() {
            cur = s.alpha_map(a, b_row).apply(&cur);
            a += 1;
        }
        cols.push(cur);
    }
    IntMatrix::from_columns(t.diagonal(t.low()).generators(), &cols)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn diagonal_tau_matches_window_chase(seed in any::<u64>(), b_row in 0usize..4) {
        let t = random_diagonal(seed);
        let r = tau(&BiSystem::Toeplitz(t.clone()), w(4, 4)).unwrap();
        let m = r.tau.clone().unwrap();
        let chased = GroupHom::new(m.source().clone(), m.target().clone(), chase(&t, b_row)).unwrap();
        prop_assert!(m.equals(&chased));
        prop_assert_eq!(r.is_isomorphism(), r.kernel.clone().unwrap().is_trivial() && r.cokernel.clone().unwrap().is_trivial());
    }

    #[test]
    fn verdicts_are_monotone_in_the_window(seed in any::<u64>(), a in 2usize..5, b in 2usize..5) {
        let s = random_periodic(seed);
        let small = tau(&s, w(a, b)).unwrap();
        let big = tau(&s, w(a, b).grow(2)).unwrap();
        for (x, y) in [(&small.injective, &big.injective), (&small.surjective, &big.surjective)] {
            if x.verdict != Verdict::Undetermined {
                prop_assert_eq!(x.verdict, y.verdict);
            }
        }
    }

    #[test]
    fn constant_in_alpha_is_identity_on_the_limit(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FgAbGroup::free(rng.gen_range(1..=2));
        let v = random_endo(&mut rng, &g);
        let s = BiSystem::bi_periodic(GroupHom::identity(&g), v).unwrap();
        let r = tau(&s, w(3, 3)).unwrap();
        if let (Some(_), Some(_)) = (r.colim_lim.group(), r.lim_colim.group()) {
            prop_assert!(is_isomorphism(r.tau.as_ref().unwrap()));
        }
        prop_assert_eq!(r.injective.verdict, Verdict::CertifiedTrue);
    }

    #[test]
    fn constant_in_beta_is_identity_on_the_colimit(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = FgAbGroup::free(rng.gen_range(1..=2));
        let u = random_endo(&mut rng, &g);
        let s = BiSystem::bi_periodic(u, GroupHom::identity(&g)).unwrap();
        let r = tau(&s, w(3, 3)).unwrap();
        prop_assert!(r.is_isomorphism());
    }
}
