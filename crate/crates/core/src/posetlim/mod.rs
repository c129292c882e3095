//! Derived limits over finite posets through the order-complex cochain complex.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fgab::{direct_sum_all, subquotient, FgAbGroup, GroupHom};
use crate::linalg::IntMatrix;

/// A finite partial order on `0..n`, stored as its reflexive-transitive closure.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    ids: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    /// Order generated by the pairs `(x, y)` meaning `x ≤ y`.
    pub fn new(ids: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = ids.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::Invalid(format!("relation ({x}, {y}) names an unknown element")));
            }
            leq[x][y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Invalid(format!("relation is not antisymmetric: {} and {}", ids[i], ids[j])));
                }
            }
        }
        Ok(FinitePoset { ids, leq })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    /// Every pair has an upper bound.
    pub fn is_directed(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| (0..n).any(|c| self.leq(a, c) && self.leq(b, c))))
    }

    /// All strictly increasing chains with `k + 1` elements, grouped by `k`.
    pub fn chains(&self) -> Vec<Vec<Vec<usize>>> {
        let mut by_len: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..self.len()).map(|x| vec![x]).collect();
        while let Some(c) = stack.pop() {
            let k = c.len() - 1;
            if by_len.len() <= k {
                by_len.resize(k + 1, Vec::new());
            }
            let last = *c.last().expect("nonempty");
            for y in 0..self.len() {
                if self.lt(last, y) {
                    let mut d = c.clone();
                    d.push(y);
                    stack.push(d);
                }
            }
            by_len[k].push(c);
        }
        for v in &mut by_len {
            v.sort();
        }
        by_len
    }
}

/// Contravariant diagram: `G_y → G_x` for every `x < y`.
#[derive(Clone, Debug)]
pub struct FinitePosetDiagram {
    poset: FinitePoset,
    groups: Vec<FgAbGroup>,
    maps: HashMap<(usize, usize), GroupHom>,
}

impl FinitePosetDiagram {
    /// `maps[(x, y)]` is `G_y → G_x` for given pairs `x < y`; the rest are
    /// obtained by composition, and functoriality is checked on every triple.
    pub fn new(poset: FinitePoset, groups: Vec<FgAbGroup>, given: Vec<((usize, usize), GroupHom)>) -> Result<Self> {
        let n = poset.len();
        if groups.len() != n {
            return Err(Error::DimensionMismatch(format!("{n} elements but {} groups", groups.len())));
        }
        let mut maps: HashMap<(usize, usize), GroupHom> = HashMap::new();
        for ((x, y), f) in given {
            if !poset.lt(x, y) {
                return Err(Error::Invalid(format!("map given for non-relation {} < {}", poset.ids[x], poset.ids[y])));
            }
            if !f.source().same_presentation(&groups[y]) || !f.target().same_presentation(&groups[x]) {
                return Err(Error::NotComposable(x));
            }
            let f = GroupHom::new(groups[y].clone(), groups[x].clone(), f.matrix().clone())?;
            if let Some(old) = maps.get(&(x, y)) {
                if !old.equals(&f) {
                    return Err(Error::NotFunctorial { lower: poset.ids[x].clone(), upper: poset.ids[y].clone() });
                }
            }
            maps.insert((x, y), f);
        }
        loop {
            let mut added = Vec::new();
            for (&(x, z), f) in &maps {
                for y in 0..n {
                    if poset.lt(z, y) && !maps.contains_key(&(x, y)) {
                        if let Some(g) = maps.get(&(z, y)) {
                            added.push(((x, y), g.then(f)?));
                        }
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            for (k, f) in added {
                maps.entry(k).or_insert(f);
            }
        }
        for x in 0..n {
            for y in 0..n {
                if poset.lt(x, y) && !maps.contains_key(&(x, y)) {
                    return Err(Error::Invalid(format!("no map for {} < {}", poset.ids[x], poset.ids[y])));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if poset.lt(x, y) && poset.lt(y, z) {
                        let via = maps[&(y, z)].then(&maps[&(x, y)])?;
                        if !via.equals(&maps[&(x, z)]) {
                            return Err(Error::NotFunctorial { lower: poset.ids[x].clone(), upper: poset.ids[z].clone() });
                        }
                    }
                }
            }
        }
        Ok(FinitePosetDiagram { poset, groups, maps })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn group(&self, x: usize) -> &FgAbGroup {
        &self.groups[x]
    }

    /// `G_y → G_x` for `x ≤ y`.
    pub fn map(&self, x: usize, y: usize) -> GroupHom {
        if x == y {
            GroupHom::identity(&self.groups[x])
        } else {
            self.maps[&(x, y)].clone()
        }
    }
}

/// Cochain groups and differentials of the order complex.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub chains: Vec<Vec<Vec<usize>>>,
    pub groups: Vec<FgAbGroup>,
    /// `differentials[k] : C^k → C^{k+1}`.
    pub differentials: Vec<GroupHom>,
}

pub fn cochain_complex(d: &FinitePosetDiagram) -> Result<CochainComplex> {
    let chains = d.poset.chains();
    let mut groups = Vec::with_capacity(chains.len() + 1);
    let mut offsets = Vec::new();
    for level in &chains {
        let terms: Vec<FgAbGroup> = level.iter().map(|c| d.groups[c[0]].clone()).collect();
        let (g, offs) = direct_sum_all(&terms);
        groups.push(g);
        offsets.push(offs);
    }
    groups.push(FgAbGroup::trivial());
    let mut differentials = Vec::with_capacity(chains.len());
    for k in 0..chains.len() {
        let src = &groups[k];
        let tgt = &groups[k + 1];
        let mut m = IntMatrix::zeros(tgt.generators(), src.generators());
        if k + 1 < chains.len() {
            let index: HashMap<&[usize], usize> = chains[k].iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
            for (row_chain, c) in chains[k + 1].iter().enumerate() {
                let ro = offsets[k + 1][row_chain];
                // Face 0 drops x_0 and pulls back along G(x_1) → G(x_0).
                let f = d.map(c[0], c[1]);
                let co = offsets[k][index[&c[1..]]];
                add_block(&mut m, ro, co, f.matrix(), 1);
                for i in 1..c.len() {
                    let mut face = c.clone();
                    face.remove(i);
                    let co = offsets[k][index[face.as_slice()]];
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    add_block(&mut m, ro, co, &IntMatrix::identity(d.groups[c[0]].generators()), sign);
                }
            }
        }
        differentials.push(GroupHom::new(src.clone(), tgt.clone(), m)?);
    }
    Ok(CochainComplex { chains, groups, differentials })
}

fn add_block(m: &mut IntMatrix, r0: usize, c0: usize, b: &IntMatrix, sign: i64) {
    let s = BigInt::from(sign);
    for r in 0..b.rows() {
        for c in 0..b.cols() {
            m[(r0 + r, c0 + c)] += &b[(r, c)] * &s;
        }
    }
}

/// `lim^p` for `p = 0 ..= pmax`; degrees beyond the longest chain are zero.
pub fn derived_limits(d: &FinitePosetDiagram, pmax: usize) -> Result<Vec<FgAbGroup>> {
    let cx = cochain_complex(d)?;
    let mut out = Vec::with_capacity(pmax + 1);
    for p in 0..=pmax {
        if p >= cx.differentials.len() {
            out.push(FgAbGroup::trivial());
            continue;
        }
        let inc = if p == 0 {
            GroupHom::zero(&FgAbGroup::trivial(), &cx.groups[0])
        } else {
            cx.differentials[p - 1].clone()
        };
        out.push(subquotient(&inc, &cx.differentials[p])?.group);
    }
    Ok(out)
}

pub fn is_directed(p: &FinitePoset) -> bool {
    p.is_directed()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapEntry {
    pub lower: String,
    pub upper: String,
    pub matrix: IntMatrix,
}

/// `{"elements": [...], "relations": [[lower, upper], ...], "groups": {id: group}, "maps": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetDiagramJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
    pub groups: BTreeMap<String, FgAbGroup>,
    #[serde(default)]
    pub maps: Vec<MapEntry>,
}

impl TryFrom<PosetDiagramJson> for FinitePosetDiagram {
    type Error = Error;
    fn try_from(j: PosetDiagramJson) -> Result<Self> {
        let index: HashMap<&str, usize> = j.elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let look = |s: &str| index.get(s).copied().ok_or_else(|| Error::Invalid(format!("unknown element {s:?}")));
        let mut pairs = Vec::new();
        for (a, b) in &j.relations {
            pairs.push((look(a)?, look(b)?));
        }
        for e in &j.maps {
            pairs.push((look(&e.lower)?, look(&e.upper)?));
        }
        let groups: Vec<FgAbGroup> = j
            .elements
            .iter()
            .map(|e| j.groups.get(e).cloned().ok_or_else(|| Error::Invalid(format!("no group for {e:?}"))))
            .collect::<Result<_>>()?;
        let mut given = Vec::new();
        for e in j.maps {
            let (x, y) = (look(&e.lower)?, look(&e.upper)?);
            given.push(((x, y), GroupHom::new(groups[y].clone(), groups[x].clone(), e.matrix)?));
        }
        let poset = FinitePoset::new(j.elements.clone(), &pairs)?;
        FinitePosetDiagram::new(poset, groups, given)
    }
}

pub mod random;
