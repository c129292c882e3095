use num_bigint::BigInt;
use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::linalg::{ivec, IntMatrix};

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

fn inv(g: &FgAbGroup) -> (usize, Vec<i64>) {
    (g.free_rank(), g.torsion().iter().map(|t| i64::try_from(t).unwrap()).collect())
}

fn z() -> FgAbGroup {
    FgAbGroup::free(1)
}

#[test]
fn invariants_of_small_presentations() {
    assert_eq!(inv(&FgAbGroup::new(1, m(&[&[2]])).unwrap()), (0, vec![2]));
    assert_eq!(inv(&FgAbGroup::free(2)), (2, vec![]));
    assert_eq!(inv(&FgAbGroup::new(2, m(&[&[2], &[4]])).unwrap()), (1, vec![2]));
    assert_eq!(inv(&FgAbGroup::new(2, m(&[&[2, 0], &[0, 3]])).unwrap()), (0, vec![6]));
    assert_eq!(FgAbGroup::new(2, m(&[&[2, 0], &[0, 3]])).unwrap().to_string(), "Z/6");
}

#[test]
fn ill_defined_hom_is_rejected() {
    // Z/2 -> Z, generator to 1: 2 does not map to 0.
    let err = GroupHom::new(FgAbGroup::cyclic(2), z(), m(&[&[1]])).unwrap_err();
    assert!(matches!(err, Error::IllDefinedHom { column: 0 }));
    assert!(GroupHom::new(FgAbGroup::cyclic(2), FgAbGroup::cyclic(4), m(&[&[2]])).is_ok());
}

#[test]
fn multiplication_by_p() {
    for p in [2, 3, 7] {
        let f = GroupHom::scalar(&z(), p);
        assert!(kernel(&f).0.is_trivial());
        assert_eq!(inv(&image(&f).0), (1, vec![]));
        assert_eq!(inv(&cokernel(&f).0), (0, vec![p]));
    }
    let zero = GroupHom::zero(&z(), &z());
    assert_eq!(inv(&kernel(&zero).0), (1, vec![]));
    assert_eq!(inv(&cokernel(&zero).0), (1, vec![]));
}

#[test]
fn two_x_minus_two_y() {
    let f = GroupHom::new(FgAbGroup::free(2), z(), m(&[&[2, -2]])).unwrap();
    let (k, incl) = kernel(&f);
    assert_eq!(inv(&k), (1, vec![]));
    assert!(f.matrix().mul_vec(&incl.matrix().column(0)).iter().all(|x| x == &BigInt::from(0)));
    assert_eq!(inv(&cokernel(&f).0), (0, vec![2]));
}

#[test]
fn exactness_examples() {
    let p = 5;
    let zero_z = GroupHom::zero(&FgAbGroup::trivial(), &z());
    let times_p = GroupHom::scalar(&z(), p);
    let (q, proj) = cokernel(&times_p);
    let to_zero = GroupHom::zero(&q, &FgAbGroup::trivial());
    let reports = check_exact(&[zero_z.clone(), times_p, proj, to_zero]).unwrap();
    assert!(reports.iter().all(|r| r.exact), "{reports:?}");

    let zero_map = GroupHom::zero(&z(), &z());
    let out = GroupHom::zero(&z(), &FgAbGroup::trivial());
    let reports = check_exact(&[zero_z, zero_map, out]).unwrap();
    assert!(reports.iter().all(|r| !r.exact));
    assert_eq!(reports[0].witness, Some(ivec(&[1])));
    assert_eq!(reports[1].witness, Some(ivec(&[1])));

    let z2 = FgAbGroup::cyclic(2);
    let z4 = FgAbGroup::cyclic(4);
    let seq = [
        GroupHom::zero(&FgAbGroup::trivial(), &z2),
        GroupHom::new(z2.clone(), z4.clone(), m(&[&[2]])).unwrap(),
        GroupHom::new(z4.clone(), z2.clone(), m(&[&[1]])).unwrap(),
        GroupHom::zero(&z2, &FgAbGroup::trivial()),
    ];
    assert!(is_exact(&seq).unwrap());
    // Element chase over the four elements of Z/4.
    let kernel_elems: Vec<i64> = (0..4).filter(|x| x % 2 == 0).collect();
    let image_elems: Vec<i64> = (0..2).map(|x| (2 * x) % 4).collect();
    assert_eq!(kernel_elems, image_elems);

    let bad = [GroupHom::identity(&z2), GroupHom::identity(&z4)];
    assert!(matches!(check_exact(&bad), Err(Error::NotComposable(0))));
}

#[test]
fn purification_examples() {
    let h = Subgroup::from_vectors(z(), &[ivec(&[2])]).unwrap();
    assert!(h.purify().unwrap().same_as(&Subgroup::whole(&z())));
    let h = Subgroup::from_vectors(FgAbGroup::free(2), &[ivec(&[2, 4])]).unwrap();
    let p = h.purify().unwrap();
    assert!(p.same_as(&Subgroup::from_vectors(FgAbGroup::free(2), &[ivec(&[1, 2])]).unwrap()));
    assert!(p.is_pure() && !h.is_pure());
    assert_eq!(h.index_in(&p), Some(BigInt::from(2)));
    let w = Subgroup::whole(&FgAbGroup::free(3));
    assert!(w.purify().unwrap().same_as(&w));
    let t = Subgroup::whole(&FgAbGroup::cyclic(3));
    assert!(matches!(t.purify(), Err(Error::TorsionAmbient)));
}

#[test]
fn hom_and_ext() {
    let g = FgAbGroup::cyclic(7);
    assert!(hom_to_z(&g).is_trivial());
    assert_eq!(inv(&ext_to_z(&g)), (0, vec![7]));
    let g = FgAbGroup::free(3);
    assert_eq!(inv(&hom_to_z(&g)), (3, vec![]));
    assert!(ext_to_z(&g).is_trivial());
    let g = FgAbGroup::from_invariants(1, &[BigInt::from(6)]);
    assert_eq!(inv(&hom_to_z(&g)), (1, vec![]));
    assert_eq!(inv(&ext_to_z(&g)), (0, vec![6]));
}

#[test]
fn pullback_examples() {
    let id = GroupHom::identity(&z());
    let pb = pullback(&id, &id).unwrap();
    assert_eq!(inv(&pb.group), (1, vec![]));

    let f = GroupHom::scalar(&z(), 2);
    let g = GroupHom::scalar(&z(), 3);
    let pb = pullback(&f, &g).unwrap();
    assert_eq!(inv(&pb.group), (1, vec![]));
    let gen = pb.inclusion.matrix().column(0);
    let gen: Vec<i64> = gen.iter().map(|x| i64::try_from(x).unwrap().abs()).collect();
    assert_eq!(gen, vec![3, 2]);
    // Commuting cone (3, 2) from Z factors uniquely.
    let h1 = GroupHom::scalar(&z(), 3);
    let h2 = GroupHom::scalar(&z(), 2);
    let u = pb.factor(&h1, &h2).unwrap().unwrap();
    assert!(u.then(&pb.to_left).unwrap().equals(&h1));
    assert!(u.then(&pb.to_right).unwrap().equals(&h2));
    assert!(pb.factor(&h1, &h1).unwrap().is_none());

    // 2x = 2y in Z forces x = y.
    let pb = pullback(&f, &f).unwrap();
    assert_eq!(inv(&pb.group), (1, vec![]));
    let diff = GroupHom::new(FgAbGroup::free(2), z(), m(&[&[2, -2]])).unwrap();
    assert_eq!(inv(&cokernel(&diff).0), (0, vec![2]));

    let bad = pullback(&f, &GroupHom::identity(&FgAbGroup::free(2)));
    assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
}

#[test]
fn pushout_of_two_and_three() {
    let f = GroupHom::scalar(&z(), 2);
    let g = GroupHom::scalar(&z(), 3);
    let po = pushout(&f, &g).unwrap();
    assert_eq!(inv(&po.group), (1, vec![]));
    assert!(f.then(&po.from_left).unwrap().equals(&g.then(&po.from_right).unwrap()));
}

#[test]
fn subquotient_classes() {
    // Z --x2--> Z --0--> Z: subquotient Z/2.
    let inc = GroupHom::scalar(&z(), 2);
    let out = GroupHom::zero(&z(), &z());
    let sq = subquotient(&inc, &out).unwrap();
    assert_eq!(inv(&sq.group), (0, vec![2]));
    let c3 = sq.class_of(&ivec(&[3])).unwrap();
    assert!(!sq.group.is_zero(&c3));
    assert!(sq.group.is_zero(&sq.class_of(&ivec(&[4])).unwrap()));
}

#[test]
fn simplify_round_trips() {
    let g = FgAbGroup::new(3, m(&[&[2, 0], &[4, 6], &[0, 0]])).unwrap();
    let s = simplify(&g);
    assert!(s.group.is_isomorphic(&g));
    assert!(s.from_canonical.then(&s.to_canonical).unwrap().equals(&GroupHom::identity(&s.group)));
    assert!(s.to_canonical.then(&s.from_canonical).unwrap().equals(&GroupHom::identity(&g)));
}

#[test]
fn json_round_trip() {
    let g = FgAbGroup::new(2, m(&[&[2], &[4]])).unwrap();
    let f = GroupHom::new(g.clone(), FgAbGroup::cyclic(2), m(&[&[1, 0]])).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    let back: GroupHom = serde_json::from_str(&s).unwrap();
    assert!(back.equals(&f));
    let g: FgAbGroup = serde_json::from_str(r#"{"generators": 2, "relations": {"rows": 2, "cols": 1, "entries": [["2"], ["4"]]}}"#).unwrap();
    assert_eq!(inv(&g), (1, vec![2]));
    let bad = serde_json::from_str::<GroupHom>(
        r#"{"source": {"generators": 1, "relations": {"rows":1,"cols":1,"entries":[["2"]]}},
            "target": {"generators": 1}, "matrix": {"rows":1,"cols":1,"entries":[["1"]]}}"#,
    );
    assert!(bad.is_err());
}

// ---- property tests ----

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-6i64..=6, rows * cols).prop_map(move |v| {
        IntMatrix::from_vec(rows, cols, v.into_iter().map(BigInt::from).collect()).unwrap()
    })
}

fn any_matrix() -> impl Strategy<Value = IntMatrix> {
    (0usize..4, 0usize..4).prop_flat_map(|(r, c)| small_matrix(r, c))
}

/// Random unimodular matrix as a product of elementary operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec((0..n.max(1), 0..n.max(1), -3i64..=3), 0..8).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, k) in ops {
            if i != j && n > 0 {
                u.add_row_multiple(i, j, &BigInt::from(k));
            }
        }
        u
    })
}

/// Number of elements killed by `k` in `Z/a_1 + ... + Z/a_m`, by enumeration.
fn killed_by(a: &[i64], k: i64) -> usize {
    let total: i64 = a.iter().product();
    (0..total)
        .filter(|&idx| {
            let mut r = idx;
            a.iter().all(|&ai| {
                let x = r % ai;
                r /= ai;
                (k * x) % ai == 0
            })
        })
        .count()
}

fn profile(a: &[i64]) -> Vec<usize> {
    (1..=16).map(|k| killed_by(a, k)).collect()
}

fn cyclic_list() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(1i64..=8, 1..4).prop_filter("order at most 16", |a| a.iter().product::<i64>() <= 16)
}

fn disguised(a: &[i64], u: &IntMatrix, v: &IntMatrix) -> FgAbGroup {
    let n = a.len();
    let d = IntMatrix::diagonal(n, n, &a.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    FgAbGroup::new(n, &(u * &d) * v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_nullity(a in any_matrix()) {
        let f = GroupHom::new(FgAbGroup::free(a.cols()), FgAbGroup::free(a.rows()), a.clone()).unwrap();
        let (k, incl) = kernel(&f);
        let (im, _) = image(&f);
        prop_assert_eq!(k.free_rank() + im.free_rank(), a.cols());
        prop_assert!(incl.then(&f).unwrap().is_zero());
        // First isomorphism theorem: source / ker ≅ im.
        let (q, _) = cokernel(&incl);
        prop_assert!(q.is_isomorphic(&im));
    }

    #[test]
    fn canonical_invariants_chain(rel in any_matrix()) {
        let g = FgAbGroup::new(rel.rows(), rel).unwrap();
        let t = g.torsion();
        prop_assert!(t.iter().all(|x| x > &BigInt::from(1)));
        prop_assert!(t.windows(2).all(|w| (&w[1] % &w[0]) == BigInt::from(0)));
    }

    #[test]
    fn isomorphism_matches_element_counts(
        a in cyclic_list(), b in cyclic_list(),
        (ua, va) in (unimodular(3), unimodular(3)),
        (ub, vb) in (unimodular(3), unimodular(3)),
    ) {
        let pad = |x: &[i64]| { let mut x = x.to_vec(); x.resize(3, 1); x };
        let (a, b) = (pad(&a), pad(&b));
        let ga = disguised(&a, &ua, &va);
        let gb = disguised(&b, &ub, &vb);
        prop_assert_eq!(ga.is_isomorphic(&gb), profile(&a) == profile(&b));
    }

    #[test]
    fn purify_is_idempotent_and_monotone(g in small_matrix(3, 2), extra in small_matrix(3, 1)) {
        let amb = FgAbGroup::free(3);
        let h = Subgroup::new(amb.clone(), g.clone()).unwrap();
        let h2 = Subgroup::new(amb, g.hconcat(&extra)).unwrap();
        let p = h.purify().unwrap();
        prop_assert!(p.is_pure());
        prop_assert!(p.contains_subgroup(&h));
        prop_assert!(p.purify().unwrap().same_as(&p));
        prop_assert!(h2.purify().unwrap().contains_subgroup(&p));
    }

    #[test]
    fn kernel_inclusion_projection_is_exact(a in small_matrix(2, 3), rel in small_matrix(2, 1)) {
        let target = FgAbGroup::new(2, rel).unwrap();
        let f = GroupHom::new(FgAbGroup::free(3), target, a).unwrap();
        let (_, incl) = kernel(&f);
        let (_, proj) = cokernel(&incl);
        let zero_in = GroupHom::zero(&FgAbGroup::trivial(), incl.source());
        let zero_out = GroupHom::zero(proj.target(), &FgAbGroup::trivial());
        prop_assert!(is_exact(&[zero_in, incl, proj, zero_out]).unwrap());
    }
}
