use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::fgab::is_isomorphism;
use crate::simplicial::homology;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn segment_sample(m: i64) -> Vec<CarrierPoint> {
    (0..=m).map(|i| CarrierPoint { id: format!("p{i}"), coords: Some((q(i, m), q(0, 1))) }).collect()
}

fn balls(radius: BigRational, centers: &[BigRational], prefix: &str) -> Vec<Ball> {
    centers
        .iter()
        .enumerate()
        .map(|(i, c)| Ball { label: format!("{prefix}{i:02}"), center: (c.clone(), q(0, 1)), radius: radius.clone() })
        .collect()
}

fn components(k: &SimplicialComplex) -> Vec<usize> {
    let vs = k.vertices().to_vec();
    let mut root: Vec<usize> = (0..vs.len()).collect();
    fn find(r: &mut Vec<usize>, x: usize) -> usize {
        if r[x] != x {
            let y = find(r, r[x]);
            r[x] = y;
        }
        r[x]
    }
    for e in k.simplices(1) {
        let a = vs.iter().position(|&v| v == e[0]).unwrap();
        let b = vs.iter().position(|&v| v == e[1]).unwrap();
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        root[ra] = rb;
    }
    (0..vs.len()).map(|x| find(&mut root, x)).collect()
}

#[test]
fn disjoint_sets_give_isolated_vertices() {
    let c = Cover::from_sets(4, &[vec![0, 1], vec![2, 3]]).unwrap();
    let n = nerve(&c).unwrap();
    assert_eq!(n.count(0), 2);
    assert_eq!(n.count(1), 0);
}

#[test]
fn three_arcs_give_a_circle() {
    // six points on a circle, arcs {0,1,2}, {2,3,4}, {4,5,0}
    let c = Cover::from_sets(6, &[vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap();
    let n = nerve(&c).unwrap();
    assert_eq!(n.count(1), 3);
    assert_eq!(n.count(2), 0);
    assert_eq!(homology(&n, 1).invariants(), (1, vec![]));
    assert_eq!(homology(&n, 0).invariants(), (1, vec![]));
}

#[test]
fn single_element_is_a_point() {
    let c = Cover::from_sets(3, &[vec![0, 1, 2]]).unwrap();
    let n = nerve(&c).unwrap();
    assert_eq!(n.total_simplices(), 1);
}

#[test]
fn invalid_covers_are_rejected() {
    assert!(Cover::from_sets(3, &[vec![0, 1]]).is_err());
    assert!(Cover::from_sets(2, &[vec![0, 1], vec![]]).is_err());
    let c = Cover::from_sets(2, &[vec![0, 1]]).unwrap();
    assert!(c.restrict(&BTreeSet::new()).is_err());
}

#[test]
fn restriction_to_everything_is_the_same_cover() {
    let c = Cover::from_sets(6, &[vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap();
    let r = c.restrict(&(0..6).collect()).unwrap();
    assert_eq!(r.cover.elements(), c.elements());
    assert_eq!(r.parent, vec![0, 1, 2]);
    let f = r.nerve_map(&c, 2).unwrap();
    assert!(is_isomorphism(&f.induced_homology(1)));
}

#[test]
fn restriction_to_a_point_is_a_simplex() {
    let c = Cover::from_sets(4, &[vec![0, 1], vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
    let r = c.restrict(&BTreeSet::from([1])).unwrap();
    assert_eq!(r.parent, vec![0, 1, 2]);
    let n = nerve(&r.cover).unwrap();
    assert_eq!(n.facets(), vec![vec![0, 1, 2]]);
    r.nerve_map(&c, 3).unwrap();
}

/// Sample of `{1/n} x [-1,1]` minus the origin, with `a = (0,1)`, `b = (0,-1)`.
fn comb_sample(columns: i64, rows: i64) -> Vec<CarrierPoint> {
    let mut pts = Vec::new();
    let mut xs = vec![q(0, 1)];
    xs.extend((1..=columns).map(|n| q(1, n)));
    for x in &xs {
        for j in -rows..=rows {
            let y = q(j, rows);
            if *x == q(0, 1) && j == 0 {
                continue;
            }
            let id = if *x == q(0, 1) && j == rows {
                "a".to_string()
            } else if *x == q(0, 1) && j == -rows {
                "b".to_string()
            } else {
                format!("({x},{y})")
            };
            pts.push(CarrierPoint { id, coords: Some((x.clone(), y)) });
        }
    }
    pts
}

#[test]
fn compactum_avoiding_the_origin_box_separates_a_from_b() {
    let k = 3;
    let carrier = comb_sample(6, 6);
    let small = q(1, k);
    let in_rect = |p: &Point2, x0: &BigRational, x1: &BigRational, y0: &BigRational, y1: &BigRational| {
        &p.0 >= x0 && &p.0 <= x1 && &p.1 >= y0 && &p.1 <= y1
    };
    let rects = [
        ("R01", (q(0, 1), small.clone(), small.clone(), q(1, 1))),
        ("R0-1", (q(0, 1), small.clone(), q(-1, 1), -small.clone())),
        ("R10", (q(1, k - 1), q(1, 1), q(-1, 1), q(1, 1))),
        ("box", (q(0, 1), small.clone(), -small.clone(), small.clone())),
    ];
    let elements = rects
        .iter()
        .map(|(label, (x0, x1, y0, y1))| CoverElement {
            label: label.to_string(),
            members: carrier
                .iter()
                .enumerate()
                .filter(|(_, p)| in_rect(p.coords.as_ref().unwrap(), x0, x1, y0, y1))
                .map(|(i, _)| i)
                .collect(),
        })
        .collect();
    let c = Cover::new(carrier.clone(), elements).unwrap();
    let a = c.point_index("a").unwrap();
    let b = c.point_index("b").unwrap();

    let whole = nerve(&c).unwrap();
    let comp = components(&whole);
    assert_eq!(comp[c.star(a)[0]], comp[c.star(b)[0]]);

    let kset: BTreeSet<usize> = carrier
        .iter()
        .enumerate()
        .filter(|(_, p)| !in_rect(p.coords.as_ref().unwrap(), &q(0, 1), &small, &-small.clone(), &small))
        .map(|(i, _)| i)
        .collect();
    let r = c.restrict(&kset).unwrap();
    r.nerve_map(&c, 2).unwrap();
    let rn = nerve(&r.cover).unwrap();
    assert_eq!(homology(&rn, 0).invariants(), (3, vec![]));
    let ra = r.cover.point_index("a").unwrap();
    let rb = r.cover.point_index("b").unwrap();
    let comp = components(&rn);
    assert_ne!(comp[r.cover.star(ra)[0]], comp[r.cover.star(rb)[0]]);
}

fn segment_covers(m: i64) -> (Cover, Cover) {
    let carrier = segment_sample(m);
    let fine_c: Vec<_> = (0..=4).map(|i| q(i, 4)).collect();
    let coarse_c: Vec<_> = (0..=2).map(|i| q(i, 2)).collect();
    let fine = Cover::from_balls(carrier.clone(), &balls(q(1, 4), &fine_c, "f")).unwrap();
    let coarse = Cover::from_balls(carrier, &balls(q(1, 2), &coarse_c, "c")).unwrap();
    (fine, coarse)
}

#[test]
fn quarter_balls_refine_half_balls() {
    let (fine, coarse) = segment_covers(8);
    // containment table: f_i = [i/4 - 1/4, i/4 + 1/4] lies in c_j = [j/2 - 1/2, j/2 + 1/2]
    // exactly when |i/4 - j/2| <= 1/4; least label wins.
    let r = refinement(&fine, &coarse).unwrap();
    assert_eq!(r.assignment, vec![0, 0, 1, 1, 1]);
    let f = r.nerve_map(&fine, &coarse, 2).unwrap();
    let h0 = f.induced_homology(0);
    assert!(is_isomorphism(&h0));
    assert_eq!(homology(&nerve(&fine).unwrap(), 1).invariants(), (0, vec![]));
}

#[test]
fn self_refinement_is_identity() {
    let (fine, _) = segment_covers(8);
    let r = refinement(&fine, &fine).unwrap();
    assert_eq!(r.assignment, (0..fine.len()).collect::<Vec<_>>());
}

#[test]
fn refining_the_trivial_cover_is_constant() {
    let (fine, _) = segment_covers(8);
    let n = fine.carrier().len();
    let trivial = Cover::new(fine.carrier().to_vec(), vec![CoverElement { label: "X".into(), members: (0..n).collect() }]).unwrap();
    let r = refinement(&fine, &trivial).unwrap();
    assert!(r.assignment.iter().all(|&j| j == 0));
    r.nerve_map(&fine, &trivial, 2).unwrap();
}

#[test]
fn non_refinement_names_a_witness() {
    let (fine, coarse) = segment_covers(8);
    match refinement(&coarse, &fine) {
        Err(Error::NotRefinement { label }) => assert!(label.starts_with('c')),
        other => panic!("expected a witness, got {other:?}"),
    }
}

#[test]
fn cover_json_round_trip() {
    let (fine, _) = segment_covers(8);
    let j = serde_json::to_string(&CoverJson::from(&fine)).unwrap();
    let back: Cover = serde_json::from_str::<CoverJson>(&j).unwrap().try_into().unwrap();
    assert_eq!(back.elements(), fine.elements());
    let ball = r#"{"carrier":[{"id":"x","coords":[[0,1],[0,1]]},{"id":"y","coords":[[1,1],[0,1]]}],
        "elements":[{"label":"B","center":[[1,2],[0,1]],"radius":[1,2]}]}"#;
    let c: Cover = serde_json::from_str::<CoverJson>(ball).unwrap().try_into().unwrap();
    assert_eq!(c.elements()[0].members, BTreeSet::from([0, 1]));
}

fn ball_schedule(m: i64, radii: &[i64]) -> Vec<Cover> {
    let carrier = segment_sample(m);
    radii
        .iter()
        .map(|&d| {
            let centers: Vec<_> = (0..=d).map(|i| q(i, d)).collect();
            Cover::from_balls(carrier.clone(), &balls(q(1, d), &centers, &format!("r{d}_"))).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composed_refinements_agree_on_homology(n in 2usize..7, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        // three random covers, each coarsening the previous by unions
        let mut sets: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        let mut covers = vec![Cover::from_sets(n, &sets).unwrap()];
        for _ in 0..2 {
            let mut next = Vec::new();
            let mut i = 0;
            while i < sets.len() {
                let take = rng.gen_range(1..=2).min(sets.len() - i);
                let merged: BTreeSet<usize> = sets[i..i + take].iter().flatten().copied().collect();
                next.push(merged.into_iter().collect::<Vec<_>>());
                i += take;
            }
            sets = next;
            covers.push(Cover::from_sets(n, &sets).unwrap());
        }
        let r01 = refinement(&covers[0], &covers[1]).unwrap();
        let r12 = refinement(&covers[1], &covers[2]).unwrap();
        let r02 = refinement(&covers[0], &covers[2]).unwrap();
        let composed = r01.then(&r12);
        let dim = 3;
        let a = composed.nerve_map(&covers[0], &covers[2], dim).unwrap();
        let b = r02.nerve_map(&covers[0], &covers[2], dim).unwrap();
        let ab = r01.nerve_map(&covers[0], &covers[1], dim).unwrap().then(&r12.nerve_map(&covers[1], &covers[2], dim).unwrap()).unwrap();
        for k in 0..2 {
            let (ha, hb, hab) = (a.induced_homology(k), b.induced_homology(k), ab.induced_homology(k));
            prop_assert_eq!(ha.matrix(), hb.matrix());
            prop_assert_eq!(hab.matrix(), hb.matrix());
        }
    }

    #[test]
    fn metric_nerve_is_invariant_under_relabeling(perm_seed in any::<u64>(), d in 2i64..6) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed);
        let c = &ball_schedule(12, &[d])[0];
        let mut order: Vec<usize> = (0..c.carrier().len()).collect();
        order.shuffle(&mut rng);
        let carrier: Vec<CarrierPoint> = order
            .iter()
            .map(|&i| CarrierPoint { id: format!("z{i}"), coords: c.carrier()[i].coords.clone() })
            .collect();
        let centers: Vec<_> = (0..=d).map(|i| q(i, d)).collect();
        let relabeled = Cover::from_balls(carrier, &balls(q(1, d), &centers, &format!("r{d}_"))).unwrap();
        let n1 = nerve(c).unwrap();
        let n2 = nerve(&relabeled).unwrap();
        prop_assert_eq!(n1.facets(), n2.facets());
    }
}

#[test]
fn ball_schedule_refines_in_order() {
    let covers = ball_schedule(16, &[2, 4, 8]);
    for w in covers.windows(2) {
        let r = refinement(&w[1], &w[0]).unwrap();
        r.nerve_map(&w[1], &w[0], 2).unwrap();
    }
}
