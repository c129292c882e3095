//! Sampled comb: columns `x = 3^-n` over `[-1, 1]` plus the two points
//! `a = (0, 1)`, `b = (0, -1)` of the missing limit segment.
//!
//! Scale `k` covers the sample by closed balls of radius `3^-k` centred at the
//! sample points whose height is a multiple of `3^-k`. Compactum `K_j` keeps
//! the sample points outside the open box `(-3^(1-j), 3^(1-j))²`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::{Check, ScenarioReport};
use crate::bisystem::{tau, BiSystem, ExplicitGrid, TauReport, ToeplitzGrid, Verdict, Window};
use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, GroupHom};
use crate::linalg::IntMatrix;
use crate::nerve::{nerve, nerve_skeleton, refinement, Ball, CarrierPoint, Cover, Point2};

pub struct Alexandroff {
    pub scales: usize,
    pub columns: usize,
    /// `covers[k-1]` is the scale-`k` cover.
    pub covers: Vec<Cover>,
    /// `compacta[j-1]` is `K_j`, as carrier indices.
    pub compacta: Vec<BTreeSet<usize>>,
    /// Whether the whole scale-`k` nerve joins `a` and `b`.
    pub joined: Vec<bool>,
    /// `separated[j-1][k-1]`: the nerve of the scale-`k` cover restricted to `K_j` separates `a` from `b`.
    pub separated: Vec<Vec<bool>>,
    /// Simplex count of each whole nerve.
    pub nerve_sizes: Vec<usize>,
    /// The `H_0` classes spanned by `a` and `b`, α = compactum, β = scale.
    pub grid: ExplicitGrid,
    pub diagonal: ToeplitzGrid,
    pub tau: TauReport,
}

fn pow3(n: usize) -> BigInt {
    BigInt::from(3).pow(n as u32)
}

fn inv3(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), pow3(n))
}

fn carrier(columns: usize) -> Vec<CarrierPoint> {
    let pt = |x: BigRational, y: BigRational| Some((x, y));
    let mut out = vec![
        CarrierPoint { id: "a".into(), coords: pt(BigRational::zero(), BigRational::one()) },
        CarrierPoint { id: "b".into(), coords: pt(BigRational::zero(), -BigRational::one()) },
    ];
    for n in 1..=columns {
        let h = 3i64.pow(n as u32);
        for i in -h..=h {
            out.push(CarrierPoint { id: format!("c{n}:{i}"), coords: pt(inv3(n), BigRational::new(BigInt::from(i), pow3(n))) });
        }
    }
    out
}

fn coords(p: &CarrierPoint) -> &Point2 {
    p.coords.as_ref().expect("sample points have coordinates")
}

fn cover_at(points: &[CarrierPoint], k: usize) -> Result<Cover> {
    let r = inv3(k);
    let balls: Vec<Ball> = points
        .iter()
        .filter(|p| (&coords(p).1 * pow3(k)).is_integer())
        .map(|p| Ball { label: format!("B{k}[{}]", p.id), center: coords(p).clone(), radius: r.clone() })
        .collect();
    Cover::from_balls(points.to_vec(), &balls)
}

fn compactum(points: &[CarrierPoint], j: usize) -> BTreeSet<usize> {
    let d = inv3(j - 1);
    (0..points.len()).filter(|&i| {
        let (x, y) = coords(&points[i]);
        !(x.abs() < d && y.abs() < d)
    }).collect()
}

/// Components of the 1-skeleton of the nerve, per element.
fn element_components(c: &Cover) -> Vec<usize> {
    nerve_skeleton(c, 1).components()
}

/// The classes of `a` and `b` in `H_0` of a nerve, as the components they lie in.
struct Span {
    components: Vec<usize>,
    /// Component of each generator: `[a]`, and `[b]` when it is a separate class.
    gens: Vec<usize>,
}

impl Span {
    fn new(c: &Cover) -> Span {
        let components = element_components(c);
        let comp_of = |id: &str| {
            let p = c.point_index(id).expect("a and b lie in every compactum");
            components[c.star(p)[0]]
        };
        let (ca, cb) = (comp_of("a"), comp_of("b"));
        let gens = if ca == cb { vec![ca] } else { vec![ca, cb] };
        Span { components, gens }
    }

    fn group(&self) -> FgAbGroup {
        FgAbGroup::free(self.gens.len())
    }

    fn separated(&self) -> bool {
        self.gens.len() == 2
    }

    /// Map induced on the span by an element map `src element ↦ tgt element`.
    fn map_to(&self, tgt: &Span, f: impl Fn(usize) -> usize) -> Result<GroupHom> {
        let mut m = IntMatrix::zeros(tgt.gens.len(), self.gens.len());
        for (g, &comp) in self.gens.iter().enumerate() {
            let e = self.components.iter().position(|&c| c == comp).expect("component is nonempty");
            let image = tgt.components[f(e)];
            let row = tgt.gens.iter().position(|&c| c == image).ok_or_else(|| Error::Invalid("a or b class leaves the span".into()))?;
            m[(row, g)] = BigInt::one();
        }
        GroupHom::new(self.group(), tgt.group(), m)
    }
}

pub fn alexandroff(scales: usize, columns: usize) -> Result<Alexandroff> {
    if scales < 2 || columns < 2 {
        return Err(Error::Invalid("scales and columns must be at least 2".into()));
    }
    if columns < scales {
        return Err(Error::Invalid("need at least as many columns as scales".into()));
    }
    let points = carrier(columns);
    let covers = (1..=scales).map(|k| cover_at(&points, k)).collect::<Result<Vec<_>>>()?;
    let compacta: Vec<BTreeSet<usize>> = (1..=scales).map(|j| compactum(&points, j)).collect();

    let mut joined = Vec::new();
    let mut nerve_sizes = Vec::new();
    for c in &covers {
        joined.push(!Span::new(c).separated());
        nerve_sizes.push(nerve(c)?.total_simplices());
    }

    // restricted[j][k] with the index of each ambient element in the restriction.
    let mut restricted = Vec::new();
    for y in &compacta {
        let mut row = Vec::new();
        for c in &covers {
            let r = c.restrict(y)?;
            let back: BTreeMap<usize, usize> = r.parent.iter().enumerate().map(|(i, &p)| (p, i)).collect();
            let span = Span::new(&r.cover);
            row.push((r, back, span));
        }
        restricted.push(row);
    }
    let separated = restricted.iter().map(|row| row.iter().map(|(_, _, s)| s.separated()).collect()).collect();

    let groups = restricted.iter().map(|row| row.iter().map(|(_, _, s)| s.group()).collect()).collect();
    let mut alpha_maps = Vec::new();
    for j in 0..scales - 1 {
        let mut row = Vec::new();
        for k in 0..scales {
            let (r, _, s) = &restricted[j][k];
            let (_, back, t) = &restricted[j + 1][k];
            row.push(s.map_to(t, |e| back[&r.parent[e]])?);
        }
        alpha_maps.push(row);
    }
    let mut beta_maps = Vec::new();
    for row in &restricted {
        let mut out = Vec::new();
        for k in 0..scales - 1 {
            let (fine, _, s) = &row[k + 1];
            let (coarse, _, t) = &row[k];
            let refine = refinement(&fine.cover, &coarse.cover)?;
            out.push(s.map_to(t, |e| refine.assignment[e])?);
        }
        beta_maps.push(out);
    }
    let grid = ExplicitGrid::new(groups, alpha_maps, beta_maps)?;
    let diagonal = ToeplitzGrid::from_explicit(&grid)?;
    let tau = tau(&BiSystem::Toeplitz(diagonal.clone()), Window::new(scales, scales))?;
    Ok(Alexandroff { scales, columns, covers, compacta, joined, separated, nerve_sizes, grid, diagonal, tau })
}

impl Alexandroff {
    pub fn report(&self) -> ScenarioReport {
        let s = self.scales;
        let mut checks = vec![Check::new(
            "whole_nerves_join",
            self.joined.iter().all(|&j| j),
            format!("[a] - [b] = 0 in H_0 of the scale-k nerve for k = 1..{s}: {:?}", self.joined),
        )];
        let finest: Vec<bool> = self.separated.iter().map(|row| row[s - 1]).collect();
        checks.push(Check::new(
            "compacta_separate",
            finest.iter().all(|&x| x),
            format!("[a] - [b] != 0 in H_0 of the scale-{s} nerve restricted to K_j, j = 1..{s}: {finest:?}"),
        ));
        let pattern = (0..s).all(|j| (0..s).all(|k| self.separated[j][k] == (k >= j)));
        checks.push(Check::new("separation_pattern", pattern, "restricted nerve at (K_j, scale k) separates a and b exactly when k >= j"));
        let witness = self.tau.kernel_witness.clone();
        let difference = witness.as_ref().is_some_and(|w| w.len() == 2 && !w[0].is_zero() && w[0] == -w[1].clone());
        checks.push(Check::new(
            "tau_injective_false",
            self.tau.injective.verdict == Verdict::CertifiedFalse && difference,
            format!(
                "{}; kernel witness {} in the basis ([a], [b])",
                self.tau.injective.certificate,
                witness.map_or("none".into(), |w| format!("({})", w.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            ),
        ));
        ScenarioReport {
            name: "alexandroff".into(),
            parameters: json!({"scales": s, "columns": self.columns}),
            checks,
            data: json!({
                "carrier_points": self.covers[0].carrier().len(),
                "cover_sizes": self.covers.iter().map(Cover::len).collect::<Vec<_>>(),
                "compactum_sizes": self.compacta.iter().map(BTreeSet::len).collect::<Vec<_>>(),
                "nerve_simplices": self.nerve_sizes,
                "separated": self.separated,
                "diagonal_range": [self.diagonal.low(), self.diagonal.high()],
                "tau": self.tau.to_json(),
                "note": "kernel certificates refer to this ball-cover schedule",
            }),
        }
    }
}
