//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prolim::bisystem::{Verdict, Window};
use prolim::fgab::{FgAbGroup, GroupHom};
use prolim::linalg::{snf, IntMatrix};
use prolim::nerve::{nerve_skeleton, Cover};
use prolim::posetlim::{derived_limits, random::random_diagram, FinitePoset, FinitePosetDiagram};
use prolim::scenarios::{alexandroff, nested_free, p_power_bisystem, solenoid, telescope, ScenarioReport};
use prolim::simplicial::{check_cochain_pullback, homology, random::random_pullback_data, ChainComplexData, SimplicialComplex};
use prolim::towers::{lim_fg_check, random::random_tower, roos_shift_check};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn report_ok(r: &ScenarioReport) -> Result<(), String> {
    let bad: Vec<String> = r.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    ensure(bad.is_empty(), bad.join("; "))
}

fn check(r: &ScenarioReport, name: &str) -> Result<(), String> {
    let c = r.checks.iter().find(|c| c.name == name).ok_or(format!("{} has no check {name}", r.name))?;
    ensure(c.pass, format!("{}.{name}: {}", r.name, c.detail))
}

// ---------- 1. SNF ----------

fn rational_det(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = m.to_rows().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigInt::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det.to_integer()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn minor_gcd(m: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rs in subsets(m.rows(), k) {
        for cs in subsets(m.cols(), k) {
            g = g.gcd(&rational_det(&m.select_rows(&rs).select_columns(&cs)));
        }
    }
    g
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut small = 0;
    for case in 0..200 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let v = (0..r * c).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
        let a = IntMatrix::from_vec(r, c, v).map_err(|e| e.to_string())?;
        let s = snf(&a);
        ensure(&(&s.u * &a) * &s.v == s.d, format!("case {case}: U A V != D"))?;
        ensure(rational_det(&s.u).abs().is_one() && rational_det(&s.v).abs().is_one(), format!("case {case}: transform not unimodular"))?;
        for i in 0..r {
            for j in 0..c {
                ensure(i == j || s.d[(i, j)].is_zero(), format!("case {case}: D not diagonal"))?;
            }
        }
        let f = s.invariant_factors();
        ensure(f.iter().all(|d| d.is_positive()), format!("case {case}: nonpositive invariant factor"))?;
        ensure(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])), format!("case {case}: divisibility chain broken"))?;
        ensure((s.rank..r.min(c)).all(|i| s.d[(i, i)].is_zero()), format!("case {case}: rank mismatch"))?;
        if r <= 5 && c <= 5 {
            small += 1;
            let mut prod = BigInt::one();
            for k in 1..=r.min(c) {
                if k <= s.rank {
                    prod *= &f[k - 1];
                } else {
                    prod = BigInt::zero();
                }
                ensure(minor_gcd(&a, k) == prod, format!("case {case}: determinant divisor {k} disagrees"))?;
            }
        }
    }
    Ok(format!("200 matrices, {small} checked against minor gcds"))
}

// ---------- 2. homology table ----------

fn complex(f: &[Vec<usize>]) -> SimplicialComplex {
    SimplicialComplex::from_facet_list(f)
}

fn torus7() -> SimplicialComplex {
    let mut f = Vec::new();
    for i in 0..7 {
        f.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        f.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    complex(&f)
}

fn rp2() -> SimplicialComplex {
    let f = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]];
    complex(&f.iter().map(|t| t.to_vec()).collect::<Vec<_>>())
}

/// 3 x 3 grid on the square with `(0, y) ~ (3, y)` and `(x, 3) ~ (3 − x, 0)`.
fn klein() -> SimplicialComplex {
    let v = |x: usize, y: usize| if y.is_multiple_of(3) && y == 3 { (3 - x % 3) % 3 } else { (x % 3) + 3 * (y % 3) };
    let mut f = Vec::new();
    for x in 0..3 {
        for y in 0..3 {
            f.push(vec![v(x, y), v(x + 1, y), v(x + 1, y + 1)]);
            f.push(vec![v(x, y), v(x, y + 1), v(x + 1, y + 1)]);
        }
    }
    complex(&f)
}

fn criterion_2() -> Outcome {
    let g = |r: usize, t: &[i64]| FgAbGroup::from_invariants(r, &t.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
    let table: Vec<(&str, SimplicialComplex, Vec<FgAbGroup>)> = vec![
        ("hollow triangle", SimplicialComplex::polygon(3), vec![g(1, &[]), g(1, &[]), g(0, &[])]),
        ("2-sphere", SimplicialComplex::simplex(3).skeleton(2), vec![g(1, &[]), g(0, &[]), g(1, &[])]),
        ("torus", torus7(), vec![g(1, &[]), g(2, &[]), g(1, &[])]),
        ("projective plane", rp2(), vec![g(1, &[]), g(0, &[2]), g(0, &[])]),
        ("Klein bottle", klein(), vec![g(1, &[]), g(1, &[2]), g(0, &[])]),
    ];
    for (name, k, want) in &table {
        for (n, w) in want.iter().enumerate() {
            let h = homology(k, n);
            ensure(h.is_isomorphic(w), format!("{name}: H_{n} = {h}, expected {w}"))?;
        }
    }
    ensure(torus7().count(0) == 7 && rp2().count(0) == 6, "vertex counts")?;
    Ok("triangle, sphere, torus, RP^2, Klein bottle".into())
}

// ---------- 3-5, 8, 9. scenarios ----------

fn criterion_3() -> Outcome {
    for p in [2u64, 3] {
        let s = solenoid(p, 4).map_err(|e| e.to_string())?;
        for f in &s.h1.maps {
            let k = f.matrix().entries()[0].abs();
            ensure(f.matrix().rows() == 1 && f.matrix().cols() == 1 && k == BigInt::from(p), format!("p = {p}: H_1 map {}", f.matrix()))?;
        }
        let r = s.report();
        check(&r, "lim_zero")?;
        check(&r, "lim1_nonvanishing")?;
        report_ok(&r)?;
    }
    Ok("p = 2, 3 at depth 4: (Z, xp), lim = 0, lim^1 nonvanishing".into())
}

fn criterion_4() -> Outcome {
    let t = telescope(2, 4).map_err(|e| e.to_string())?;
    ensure(t.groups.len() == 4, "four telescopes")?;
    let r = t.report();
    check(&r, "h1_groups")?;
    check(&r, "bonding_maps")?;
    check(&r, "lim_zero")?;
    check(&r, "lim1_nonvanishing")?;
    Ok(format!("H^1 = {}", t.groups.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
}

fn criterion_5() -> Outcome {
    let n = nested_free(5).map_err(|e| e.to_string())?;
    ensure(!n.lim1.vanishes(), "lim^1 should not vanish")?;
    ensure(n.lim1_fg.class.vanishes(), "lim^1_fg should vanish")?;
    report_ok(&n.report())?;
    Ok(format!("lim^1: {}; lim^1_fg via {:?}", n.lim1.summary(), n.lim1_fg.method))
}

/// `[a] − [b]` in `H_0` of the 1-skeleton of a nerve, via the chain-level solver.
fn difference_class(c: &Cover) -> Result<bool, String> {
    let k = nerve_skeleton(c, 1);
    let h = ChainComplexData::absolute(&k).homology(0);
    let mut chain = vec![BigInt::zero(); k.count(0)];
    let ea = c.star(c.point_index("a").ok_or("no a")?)[0];
    let eb = c.star(c.point_index("b").ok_or("no b")?)[0];
    chain[k.position(&[ea]).ok_or("a element")?] += 1;
    chain[k.position(&[eb]).ok_or("b element")?] -= 1;
    let class = h.class_of(&chain).ok_or("0-chains are cycles")?;
    Ok(!h.group.is_zero(&class))
}

fn criterion_8() -> Outcome {
    let a = alexandroff(4, 4).map_err(|e| e.to_string())?;
    for (k, c) in a.covers.iter().enumerate() {
        ensure(!difference_class(c)?, format!("[a] - [b] survives at scale {}", k + 1))?;
    }
    let finest = a.covers.last().expect("scales >= 2");
    for (j, y) in a.compacta.iter().enumerate() {
        let r = finest.restrict(y).map_err(|e| e.to_string())?;
        ensure(difference_class(&r.cover)?, format!("[a] - [b] dies on K_{}", j + 1))?;
    }
    ensure(a.tau.injective.verdict == Verdict::CertifiedFalse, "tau_injective is not certified_false")?;
    let w = a.tau.kernel_witness.clone().ok_or("no kernel witness")?;
    ensure(w.len() == 2 && !w[0].is_zero() && w[0] == -&w[1], "kernel witness is not a multiple of [a] - [b]")?;
    report_ok(&a.report())?;
    Ok(format!("4 scheduled nerves join a and b; {} compacta separate them; tau kills ({}, {})", a.compacta.len(), w[0], w[1]))
}

fn criterion_9() -> Outcome {
    let p = p_power_bisystem(2, Window::new(6, 6)).map_err(|e| e.to_string())?;
    ensure(p.tau.surjective.verdict == Verdict::CertifiedFalse, "tau_surjective is not certified_false")?;
    let r = p.report();
    check(&r, "thread_certificate")?;
    report_ok(&r)?;
    Ok(p.tau.surjective.certificate.clone())
}

// ---------- 6, 7, 10, 11. corpora ----------

fn criterion_6() -> Outcome {
    for seed in 0..100u64 {
        let depth = 1 + (seed % 5) as usize;
        let t = random_tower(seed, depth, false);
        let r = lim_fg_check(&t, 2, depth.max(2), seed).map_err(|e| e.to_string())?;
        ensure(r.pass, format!("seed {seed}: sampled subtower limits do not recover lim"))?;
    }
    Ok("100 towers, zero failures".into())
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for seed in 0..100u64 {
        let (k, y, z, w) = random_pullback_data(seed);
        ensure(k.vertices().len() <= 8, "complex too large")?;
        for n in 0..=2 {
            let r = check_cochain_pullback(&k, &y, &z, &w, n).map_err(|e| e.to_string())?;
            ensure(r.surjective, format!("seed {seed}, n = {n}: not surjective"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} squares surjective"))
}

/// `lim^1` of `Z --x2--> Z <--x2-- Z` from the order-complex cochains, as (rank, order of torsion).
fn cospan_oracle() -> (usize, BigInt) {
    // Elements c < a, c < b; chains c<a, c<b; d(g)(x<y) = g_x − f(g_y).
    let d = IntMatrix::from_vec(2, 3, [1, -2, 0, 1, 0, -2].iter().map(|&x| BigInt::from(x)).collect()).expect("shape");
    let full = minor_gcd(&d, 2);
    let rank = if full.is_zero() { 1 } else { 2 };
    (2 - rank, full)
}

fn criterion_10() -> Outcome {
    for seed in 0..50u64 {
        let d = random_diagram(seed, 2 + (seed % 5) as usize, true);
        ensure(d.poset().is_directed(), format!("seed {seed}: not directed"))?;
        let l = derived_limits(&d, 3).map_err(|e| e.to_string())?;
        for (p, g) in l.iter().enumerate().skip(1) {
            ensure(g.is_trivial(), format!("seed {seed}: lim^{p} = {g}"))?;
        }
    }
    let poset = FinitePoset::new(vec!["c".into(), "a".into(), "b".into()], &[(0, 1), (0, 2)]).map_err(|e| e.to_string())?;
    let z = FgAbGroup::free(1);
    let two = GroupHom::scalar(&z, 2);
    let d = FinitePosetDiagram::new(poset, vec![z.clone(), z.clone(), z.clone()], vec![((0, 1), two.clone()), ((0, 2), two)]).map_err(|e| e.to_string())?;
    let l = derived_limits(&d, 2).map_err(|e| e.to_string())?;
    let (free, order) = cospan_oracle();
    ensure(free == 0 && order == BigInt::from(2), "oracle: lim^1 should be Z/2")?;
    ensure(l[1].is_isomorphic(&FgAbGroup::cyclic(2)), format!("cospan lim^1 = {}", l[1]))?;
    Ok(format!("50 directed posets vanish; cospan lim^1 = {}", l[1]))
}

fn criterion_11() -> Outcome {
    for seed in 0..50u64 {
        let depth = 2 + (seed % 4) as usize;
        let t = random_tower(1000 + seed, depth, seed % 2 == 0);
        let r = roos_shift_check(&t, depth).map_err(|e| e.to_string())?;
        ensure(r.kernel_matches_lim, format!("seed {seed}: ker {} vs lim {}", r.kernel, r.truncated_lim))?;
        ensure(r.cokernel_vanishes, format!("seed {seed}: coker {}", r.cokernel))?;
    }
    Ok("50 towers: ker(shift) = lim, coker = 0".into())
}

fn main() {
    let criteria: Vec<(usize, &str, fn() -> Outcome, Option<u64>)> = vec![
        (1, "SNF suite", criterion_1, Some(10)),
        (2, "homology table", criterion_2, Some(5)),
        (3, "solenoid", criterion_3, Some(10)),
        (4, "telescope", criterion_4, Some(30)),
        (5, "nested free tower", criterion_5, None),
        (6, "finitely generated subtowers", criterion_6, None),
        (7, "pullback lemma fuzz", criterion_7, Some(60)),
        (8, "Alexandroff scenario", criterion_8, Some(30)),
        (9, "tau non-surjectivity", criterion_9, None),
        (10, "finite-poset derived limits", criterion_10, None),
        (11, "shift map", criterion_11, None),
    ];
    let mut failures = 0;
    for (n, name, f, limit) in criteria {
        let start = Instant::now();
        let mut out = f();
        let took = start.elapsed();
        if let (Ok(_), Some(s)) = (&out, limit) {
            if took > Duration::from_secs(s) {
                out = Err(format!("took {took:.2?}, limit {s} s"));
            }
        }
        match out {
            Ok(detail) => println!("criterion {n:>2} PASS  {name} ({took:.2?}): {detail}"),
            Err(e) => {
                failures += 1;
                println!("criterion {n:>2} FAIL  {name} ({took:.2?}): {e}");
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 11 acceptance criteria pass");
}
