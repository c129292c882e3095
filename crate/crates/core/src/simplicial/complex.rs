use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Simplex as a strictly increasing list of vertex labels.
pub type Simplex = Vec<usize>;

/// Finite abstract simplicial complex, stored downward closed and graded by dimension.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<usize>,
    /// `simplices[d]` holds the `d`-simplices in lexicographic order.
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    /// Downward closure of `facets`; `vertices` may add isolated vertices.
    pub fn from_facets(vertices: &[usize], facets: &[Vec<usize>]) -> Result<Self> {
        let vset: BTreeSet<usize> = vertices.iter().copied().collect();
        let mut all: BTreeSet<Simplex> = vset.iter().map(|&v| vec![v]).collect();
        for f in facets {
            let s: BTreeSet<usize> = f.iter().copied().collect();
            if let Some(v) = s.iter().find(|v| !vset.contains(v)) {
                return Err(Error::Invalid(format!("facet {f:?} uses vertex {v} outside the vertex set")));
            }
            let s: Vec<usize> = s.into_iter().collect();
            let k = s.len();
            if k > 20 {
                return Err(Error::Unsupported(format!("facet of {k} vertices is too large")));
            }
            for mask in 1u32..(1u32 << k) {
                all.insert((0..k).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect());
            }
        }
        Ok(Self::from_closed(all))
    }

    /// Simplices of dimension at most `max_dim` spanned by subsets of `facets`.
    pub fn skeleton_of_facets(vertices: &[usize], facets: &[Vec<usize>], max_dim: usize) -> Result<Self> {
        let vset: BTreeSet<usize> = vertices.iter().copied().collect();
        let mut all: BTreeSet<Simplex> = vset.iter().map(|&v| vec![v]).collect();
        for f in facets {
            let s: Vec<usize> = f.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            if let Some(v) = s.iter().find(|v| !vset.contains(v)) {
                return Err(Error::Invalid(format!("facet {f:?} uses vertex {v} outside the vertex set")));
            }
            let mut cur = Vec::new();
            subsets_upto(&s, 0, max_dim + 1, &mut cur, &mut all);
        }
        Ok(Self::from_closed(all))
    }

    /// Complex from facets whose vertices are exactly those used.
    pub fn from_facet_list(facets: &[Vec<usize>]) -> Self {
        let vs: Vec<usize> = facets.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        Self::from_facets(&vs, facets).expect("vertices collected from the facets")
    }

    pub(crate) fn from_closed(all: BTreeSet<Simplex>) -> Self {
        let mut simplices: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.len() - 1;
            if simplices.len() <= d {
                simplices.resize(d + 1, Vec::new());
            }
            simplices[d].push(s);
        }
        let vertices = simplices.first().map(|v| v.iter().map(|s| s[0]).collect()).unwrap_or_default();
        let index = simplices.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        SimplicialComplex { vertices, simplices, index }
    }

    pub fn empty() -> Self {
        Self::from_closed(BTreeSet::new())
    }

    pub fn point() -> Self {
        Self::from_facet_list(&[vec![0]])
    }

    /// Boundary of an `n`-gon on vertices `0..n`.
    pub fn polygon(n: usize) -> Self {
        assert!(n >= 3, "a polygon needs at least three vertices");
        Self::from_facet_list(&(0..n).map(|i| vec![i, (i + 1) % n]).collect::<Vec<_>>())
    }

    /// Full simplex on vertices `0..=d`.
    pub fn simplex(d: usize) -> Self {
        Self::from_facet_list(&[(0..=d).collect()])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// `-1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.simplices.len() as isize - 1
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.simplices.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        !s.is_empty() && self.index.get(s.len() - 1).is_some_and(|m| m.contains_key(s))
    }

    pub fn position(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (d, level) in self.simplices.iter().enumerate() {
            for s in level {
                let covered = self.simplices.get(d + 1).is_some_and(|up| {
                    self.vertices.iter().any(|v| {
                        if s.contains(v) {
                            return false;
                        }
                        let mut t = s.clone();
                        t.push(*v);
                        t.sort_unstable();
                        up.binary_search(&t).is_ok()
                    })
                });
                if !covered {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().enumerate().map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    pub fn is_subcomplex_of(&self, k: &SimplicialComplex) -> bool {
        self.all_simplices().all(|s| k.contains(s))
    }

    pub fn check_subcomplex_of(&self, k: &SimplicialComplex, what: &str) -> Result<()> {
        match self.all_simplices().find(|s| !k.contains(s)) {
            Some(s) => Err(Error::NotSubcomplex(format!("{what}: simplex {s:?} is missing from the ambient complex"))),
            None => Ok(()),
        }
    }

    pub fn union(&self, other: &SimplicialComplex) -> SimplicialComplex {
        Self::from_closed(self.all_simplices().chain(other.all_simplices()).cloned().collect())
    }

    pub fn intersection(&self, other: &SimplicialComplex) -> SimplicialComplex {
        Self::from_closed(self.all_simplices().filter(|s| other.contains(s)).cloned().collect())
    }

    /// Full subcomplex on a vertex subset.
    pub fn induced_on(&self, vs: &BTreeSet<usize>) -> SimplicialComplex {
        Self::from_closed(self.all_simplices().filter(|s| s.iter().all(|v| vs.contains(v))).cloned().collect())
    }

    /// Simplices of dimension at most `d`.
    pub fn skeleton(&self, d: usize) -> SimplicialComplex {
        Self::from_closed(self.simplices.iter().take(d + 1).flatten().cloned().collect())
    }

    pub fn total_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    /// Component index of each vertex (in `vertices()` order), numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.simplices(1) {
            let (a, b) = (self.index[0][&vec![e[0]]], self.index[0][&vec![e[1]]]);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        (0..n)
            .map(|v| {
                let r = find(&mut parent, v);
                if label[r] == usize::MAX {
                    label[r] = next;
                    next += 1;
                }
                label[r]
            })
            .collect()
    }
}

fn subsets_upto(s: &[usize], start: usize, max_len: usize, cur: &mut Vec<usize>, out: &mut BTreeSet<Simplex>) {
    if !cur.is_empty() {
        out.insert(cur.clone());
    }
    if cur.len() == max_len {
        return;
    }
    for i in start..s.len() {
        cur.push(s[i]);
        subsets_upto(s, i + 1, max_len, cur, out);
        cur.pop();
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex{{vertices: {:?}, facets: {:?}}}", self.vertices, self.facets())
    }
}
