use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::{ChainComplexData, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::fgab::{GroupHom, Subquotient};
use crate::linalg::IntMatrix;

/// Vertex map sending every simplex of `source` onto a simplex of `target`.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    vertex_map: BTreeMap<usize, usize>,
}

impl SimplicialMap {
    pub fn new(source: SimplicialComplex, target: SimplicialComplex, vertex_map: BTreeMap<usize, usize>) -> Result<Self> {
        for v in source.vertices() {
            match vertex_map.get(v) {
                None => return Err(Error::Invalid(format!("vertex {v} has no image"))),
                Some(w) if !target.contains(&[*w]) => {
                    return Err(Error::Invalid(format!("vertex {v} maps to {w}, which is not a target vertex")))
                }
                _ => {}
            }
        }
        let f = SimplicialMap { source, target, vertex_map };
        if let Some(s) = f.source.all_simplices().find(|s| !f.target.contains(&f.image_set(s))) {
            return Err(Error::NotSimplicial(s.clone()));
        }
        Ok(f)
    }

    pub fn from_fn(source: &SimplicialComplex, target: &SimplicialComplex, f: impl Fn(usize) -> usize) -> Result<Self> {
        let vm = source.vertices().iter().map(|&v| (v, f(v))).collect();
        Self::new(source.clone(), target.clone(), vm)
    }

    pub fn identity(k: &SimplicialComplex) -> Self {
        Self::from_fn(k, k, |v| v).expect("identity")
    }

    /// Inclusion of a subcomplex.
    pub fn inclusion(sub: &SimplicialComplex, sup: &SimplicialComplex) -> Result<Self> {
        sub.check_subcomplex_of(sup, "inclusion")?;
        Self::from_fn(sub, sup, |v| v)
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &BTreeMap<usize, usize> {
        &self.vertex_map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.vertex_map[&v]
    }

    /// Sorted, deduplicated image of a simplex.
    pub fn image_set(&self, s: &[usize]) -> Simplex {
        s.iter().map(|v| self.apply(*v)).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// `self` followed by `g`.
    pub fn then(&self, g: &SimplicialMap) -> Result<SimplicialMap> {
        if self.target != g.source {
            return Err(Error::NotComposable(0));
        }
        let vm = self.vertex_map.iter().map(|(&v, &w)| (v, g.apply(w))).collect();
        SimplicialMap::new(self.source.clone(), g.target.clone(), vm)
    }

    /// Chain map `C_n(source, b) → C_n(target, a)`; requires `f(b) ⊆ a`.
    pub fn chain_matrix(&self, src: &ChainComplexData, tgt: &ChainComplexData, n: usize) -> IntMatrix {
        let (sb, tb) = (src.basis.get(n).cloned().unwrap_or_default(), tgt.basis.get(n).cloned().unwrap_or_default());
        let pos: std::collections::HashMap<&Simplex, usize> = tb.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut m = IntMatrix::zeros(tb.len(), sb.len());
        for (j, s) in sb.iter().enumerate() {
            let img: Vec<usize> = s.iter().map(|v| self.apply(*v)).collect();
            if let Some((sorted, sign)) = sort_with_sign(&img) {
                if let Some(&r) = pos.get(&sorted) {
                    m[(r, j)] = BigInt::from(sign);
                }
            }
        }
        m
    }

    pub fn induced_homology(&self, n: usize) -> GroupHom {
        let (cs, ct) = (ChainComplexData::absolute(&self.source), ChainComplexData::absolute(&self.target));
        induced_homology_between(&cs.homology(n), &ct.homology(n), &self.chain_matrix(&cs, &ct, n))
    }

    /// Contravariant map `H^n(target) → H^n(source)`.
    pub fn induced_cohomology(&self, n: usize) -> GroupHom {
        let (cs, ct) = (ChainComplexData::absolute(&self.source), ChainComplexData::absolute(&self.target));
        induced_homology_between(&ct.cohomology(n), &cs.cohomology(n), &self.chain_matrix(&cs, &ct, n).transpose())
    }

    /// `H^n(target, a) → H^n(source, b)` for a map of pairs with `f(b) ⊆ a`.
    pub fn induced_relative_cohomology(&self, b: &SimplicialComplex, a: &SimplicialComplex, n: usize) -> Result<GroupHom> {
        let cs = ChainComplexData::relative(&self.source, b)?;
        let ct = ChainComplexData::relative(&self.target, a)?;
        if let Some(s) = b.all_simplices().find(|s| !a.contains(&self.image_set(s))) {
            return Err(Error::NotSubcomplex(format!("simplex {s:?} of the source pair does not land in the target pair")));
        }
        Ok(induced_homology_between(&ct.cohomology(n), &cs.cohomology(n), &self.chain_matrix(&cs, &ct, n).transpose()))
    }
}

/// Sorts distinct labels, returning the permutation sign; `None` on repeats.
pub(crate) fn sort_with_sign(v: &[usize]) -> Option<(Simplex, i64)> {
    let mut a = v.to_vec();
    let mut sign = 1;
    for i in 1..a.len() {
        let mut j = i;
        while j > 0 && a[j - 1] > a[j] {
            a.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if a.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((a, sign))
    }
}

/// Map of subquotients induced by a (co)chain map.
pub(crate) fn induced_homology_between(src: &Subquotient, tgt: &Subquotient, chain: &IntMatrix) -> GroupHom {
    let reps = src.representatives();
    let cols: Vec<Vec<BigInt>> = (0..reps.cols())
        .map(|j| tgt.class_of(&chain.mul_vec(&reps.column(j))).expect("chain maps send cycles to cycles"))
        .collect();
    let m = IntMatrix::from_columns(tgt.group.generators(), &cols);
    GroupHom::new(src.group.clone(), tgt.group.clone(), m).expect("chain maps send boundaries to boundaries")
}

/// Mapping cylinder with its two inclusions.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub complex: SimplicialComplex,
    pub source_inclusion: SimplicialMap,
    pub target_inclusion: SimplicialMap,
}

/// Labels of `k` shifted to `offset, offset + 1, ...` in vertex order.
fn relabel(k: &SimplicialComplex, offset: usize) -> BTreeMap<usize, usize> {
    k.vertices().iter().enumerate().map(|(i, &v)| (v, offset + i)).collect()
}

/// Simplices `{v_0..v_i} ∪ f{v_i..v_k}` of the ordered-join cylinder, in relabelled vertices.
fn cylinder_simplices(f: &SimplicialMap, src: &BTreeMap<usize, usize>, tgt: &BTreeMap<usize, usize>, out: &mut BTreeSet<Simplex>) {
    for s in f.source().facets() {
        for i in 0..s.len() {
            let mut t: BTreeSet<usize> = s[..=i].iter().map(|v| src[v]).collect();
            t.extend(s[i..].iter().map(|v| tgt[&f.apply(*v)]));
            out.insert(t.into_iter().collect());
        }
    }
    for s in f.target().facets() {
        out.insert(s.iter().map(|v| tgt[v]).collect());
    }
}

fn closure(tops: BTreeSet<Simplex>) -> SimplicialComplex {
    let facets: Vec<Simplex> = tops.into_iter().collect();
    SimplicialComplex::from_facet_list(&facets)
}

pub fn mapping_cylinder(f: &SimplicialMap) -> Cylinder {
    let src = relabel(f.source(), 0);
    let tgt = relabel(f.target(), f.source().vertices().len());
    let mut tops = BTreeSet::new();
    cylinder_simplices(f, &src, &tgt, &mut tops);
    let complex = closure(tops);
    Cylinder {
        source_inclusion: SimplicialMap::new(f.source().clone(), complex.clone(), src).expect("source sits in the cylinder"),
        target_inclusion: SimplicialMap::new(f.target().clone(), complex.clone(), tgt).expect("target sits in the cylinder"),
        complex,
    }
}

/// Finite telescope `T_[0,m]` of `P_0 → P_1 → ... → P_m` with all stage inclusions.
#[derive(Clone, Debug)]
pub struct Telescope {
    pub complex: SimplicialComplex,
    pub stages: Vec<SimplicialMap>,
}

pub fn mapping_telescope(maps: &[SimplicialMap], base: &SimplicialComplex) -> Result<Telescope> {
    let mut stages_cx = vec![base.clone()];
    for (i, f) in maps.iter().enumerate() {
        if f.source() != stages_cx.last().expect("nonempty") {
            return Err(Error::NotComposable(i));
        }
        stages_cx.push(f.target().clone());
    }
    let mut labels = Vec::new();
    let mut offset = 0;
    for p in &stages_cx {
        labels.push(relabel(p, offset));
        offset += p.vertices().len();
    }
    let mut tops = BTreeSet::new();
    for s in base.facets() {
        tops.insert(s.iter().map(|v| labels[0][v]).collect());
    }
    for (i, f) in maps.iter().enumerate() {
        cylinder_simplices(f, &labels[i], &labels[i + 1], &mut tops);
    }
    let complex = if maps.is_empty() { base.clone() } else { closure(tops) };
    let stages = stages_cx
        .iter()
        .zip(labels)
        .map(|(p, l)| {
            let l = if maps.is_empty() { p.vertices().iter().map(|&v| (v, v)).collect() } else { l };
            SimplicialMap::new(p.clone(), complex.clone(), l).expect("stage sits in the telescope")
        })
        .collect();
    Ok(Telescope { complex, stages })
}
