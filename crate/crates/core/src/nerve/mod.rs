//! Finite covers, their nerves, restriction and refinement.

mod json;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::simplicial::{SimplicialComplex, SimplicialMap};

pub use json::{CoverJson, ElementJson, PointJson, RationalJson};

/// Rational point of the plane.
pub type Point2 = (BigRational, BigRational);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarrierPoint {
    pub id: String,
    pub coords: Option<Point2>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverElement {
    pub label: String,
    /// Indices into the carrier.
    pub members: BTreeSet<usize>,
}

/// Finite cover of a finite carrier.
#[derive(Clone, Debug)]
pub struct Cover {
    carrier: Vec<CarrierPoint>,
    elements: Vec<CoverElement>,
}

/// Closed ball `{p : |p − center|² ≤ radius²}`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub label: String,
    pub center: Point2,
    pub radius: BigRational,
}

impl Ball {
    pub fn contains(&self, p: &Point2) -> bool {
        let dx = &p.0 - &self.center.0;
        let dy = &p.1 - &self.center.1;
        &dx * &dx + &dy * &dy <= &self.radius * &self.radius
    }
}

impl Cover {
    pub fn new(carrier: Vec<CarrierPoint>, elements: Vec<CoverElement>) -> Result<Cover> {
        let n = carrier.len();
        let mut covered = vec![false; n];
        for e in &elements {
            if e.members.is_empty() {
                return Err(Error::Invalid(format!("cover element {:?} is empty", e.label)));
            }
            for &m in &e.members {
                if m >= n {
                    return Err(Error::Invalid(format!("cover element {:?} names point {m} outside the carrier", e.label)));
                }
                covered[m] = true;
            }
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return Err(Error::Invalid(format!("point {:?} is not covered", carrier[i].id)));
        }
        Ok(Cover { carrier, elements })
    }

    /// Cover of an abstract carrier `0..n` (ids are the indices).
    pub fn from_sets(n: usize, sets: &[Vec<usize>]) -> Result<Cover> {
        let carrier = (0..n).map(|i| CarrierPoint { id: i.to_string(), coords: None }).collect();
        let elements = sets
            .iter()
            .enumerate()
            .map(|(i, s)| CoverElement { label: format!("U{i}"), members: s.iter().copied().collect() })
            .collect();
        Cover::new(carrier, elements)
    }

    /// Ball cover of a planar carrier; balls containing no carrier point are dropped.
    pub fn from_balls(carrier: Vec<CarrierPoint>, balls: &[Ball]) -> Result<Cover> {
        let mut elements = Vec::new();
        for b in balls {
            let mut members = BTreeSet::new();
            for (i, p) in carrier.iter().enumerate() {
                let c = p.coords.as_ref().ok_or_else(|| Error::Invalid(format!("point {:?} has no coordinates", p.id)))?;
                if b.contains(c) {
                    members.insert(i);
                }
            }
            if !members.is_empty() {
                elements.push(CoverElement { label: b.label.clone(), members });
            }
        }
        Cover::new(carrier, elements)
    }

    pub fn carrier(&self) -> &[CarrierPoint] {
        &self.carrier
    }

    pub fn elements(&self) -> &[CoverElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements containing carrier point `p`.
    pub fn star(&self, p: usize) -> Vec<usize> {
        (0..self.elements.len()).filter(|&e| self.elements[e].members.contains(&p)).collect()
    }

    fn stars(&self) -> Vec<Vec<usize>> {
        (0..self.carrier.len()).map(|p| self.star(p)).collect()
    }

    /// Index of the carrier point with this id.
    pub fn point_index(&self, id: &str) -> Option<usize> {
        self.carrier.iter().position(|p| p.id == id)
    }

    /// Cover of `Y` by the nonempty intersections, remembering parent elements.
    pub fn restrict(&self, y: &BTreeSet<usize>) -> Result<Restriction> {
        if y.is_empty() {
            return Err(Error::Invalid("cannot restrict to an empty subset".into()));
        }
        if let Some(&p) = y.iter().find(|&&p| p >= self.carrier.len()) {
            return Err(Error::Invalid(format!("point {p} is outside the carrier")));
        }
        let keep: Vec<usize> = y.iter().copied().collect();
        let new_index: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut elements = Vec::new();
        let mut parent = Vec::new();
        for (i, e) in self.elements.iter().enumerate() {
            let members: BTreeSet<usize> = e.members.iter().filter_map(|p| new_index.get(p).copied()).collect();
            if !members.is_empty() {
                elements.push(CoverElement { label: e.label.clone(), members });
                parent.push(i);
            }
        }
        let carrier = keep.iter().map(|&p| self.carrier[p].clone()).collect();
        Ok(Restriction { cover: Cover::new(carrier, elements)?, parent })
    }
}

/// Full nerve; vertices are element indices.
pub fn nerve(c: &Cover) -> Result<SimplicialComplex> {
    let stars = c.stars();
    if let Some(s) = stars.iter().find(|s| s.len() > 20) {
        return Err(Error::Unsupported(format!(
            "a point lies in {} elements; use nerve_skeleton for a bounded dimension",
            s.len()
        )));
    }
    let vs: Vec<usize> = (0..c.len()).collect();
    SimplicialComplex::from_facets(&vs, &stars)
}

/// Simplices of the nerve up to dimension `dim`.
pub fn nerve_skeleton(c: &Cover, dim: usize) -> SimplicialComplex {
    let vs: Vec<usize> = (0..c.len()).collect();
    SimplicialComplex::skeleton_of_facets(&vs, &c.stars(), dim).expect("stars use element indices")
}

#[derive(Clone, Debug)]
pub struct Restriction {
    pub cover: Cover,
    /// `parent[i]` is the ambient element that restricted element `i` came from.
    pub parent: Vec<usize>,
}

impl Restriction {
    /// Vertex map `restricted element ↦ parent` on nerve skeleta.
    pub fn nerve_map(&self, ambient: &Cover, dim: usize) -> Result<SimplicialMap> {
        let src = nerve_skeleton(&self.cover, dim);
        let tgt = nerve_skeleton(ambient, dim);
        SimplicialMap::from_fn(&src, &tgt, |v| self.parent[v])
    }
}

/// Assignment of each fine element to a containing coarse element.
#[derive(Clone, Debug)]
pub struct RefinementMap {
    pub assignment: Vec<usize>,
}

impl RefinementMap {
    pub fn nerve_map(&self, fine: &Cover, coarse: &Cover, dim: usize) -> Result<SimplicialMap> {
        let src = nerve_skeleton(fine, dim);
        let tgt = nerve_skeleton(coarse, dim);
        SimplicialMap::from_fn(&src, &tgt, |v| self.assignment[v])
    }

    /// `self` followed by `next` (fine → mid → coarse).
    pub fn then(&self, next: &RefinementMap) -> RefinementMap {
        RefinementMap { assignment: self.assignment.iter().map(|&m| next.assignment[m]).collect() }
    }
}

/// Each fine element goes to a containing coarse element: one with the same
/// label if there is one, otherwise the least label (ties by index).
pub fn refinement(fine: &Cover, coarse: &Cover) -> Result<RefinementMap> {
    let same_carrier = fine.carrier.len() == coarse.carrier.len()
        && fine.carrier.iter().zip(&coarse.carrier).all(|(a, b)| a.id == b.id);
    if !same_carrier {
        return Err(Error::Invalid("covers of different carriers".into()));
    }
    let mut assignment = Vec::with_capacity(fine.len());
    for e in &fine.elements {
        let best = coarse
            .elements
            .iter()
            .enumerate()
            .filter(|(_, c)| e.members.is_subset(&c.members))
            .min_by(|(i, a), (j, b)| {
                (a.label != e.label).cmp(&(b.label != e.label)).then(a.label.cmp(&b.label)).then(i.cmp(j))
            })
            .map(|(i, _)| i);
        match best {
            Some(i) => assignment.push(i),
            None => return Err(Error::NotRefinement { label: e.label.clone() }),
        }
    }
    Ok(RefinementMap { assignment })
}

#[cfg(test)]
mod tests;
