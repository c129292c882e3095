use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{mapping_telescope, SimplicialComplex, SimplicialMap, Telescope};
use crate::error::{Error, Result};

/// `{"vertices": [...], "facets": [[...], ...]}`; downward closure is taken on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexJson {
    #[serde(default)]
    pub vertices: Vec<usize>,
    pub facets: Vec<Vec<usize>>,
}

impl From<&SimplicialComplex> for ComplexJson {
    fn from(k: &SimplicialComplex) -> Self {
        ComplexJson { vertices: k.vertices().to_vec(), facets: k.facets() }
    }
}

impl TryFrom<ComplexJson> for SimplicialComplex {
    type Error = Error;
    fn try_from(j: ComplexJson) -> Result<Self> {
        let mut vs = j.vertices;
        if vs.is_empty() {
            vs = j.facets.iter().flatten().copied().collect();
        }
        SimplicialComplex::from_facets(&vs, &j.facets)
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ComplexJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

/// `{"source": complex, "target": complex, "vertex_map": [[v, w], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplicialMapJson {
    pub source: SimplicialComplex,
    pub target: SimplicialComplex,
    pub vertex_map: Vec<(usize, usize)>,
}

impl TryFrom<SimplicialMapJson> for SimplicialMap {
    type Error = Error;
    fn try_from(j: SimplicialMapJson) -> Result<Self> {
        SimplicialMap::new(j.source, j.target, j.vertex_map.into_iter().collect::<BTreeMap<_, _>>())
    }
}

impl From<&SimplicialMap> for SimplicialMapJson {
    fn from(f: &SimplicialMap) -> Self {
        SimplicialMapJson {
            source: f.source().clone(),
            target: f.target().clone(),
            vertex_map: f.vertex_map().iter().map(|(&a, &b)| (a, b)).collect(),
        }
    }
}

/// `{"complexes": [P_0, ..., P_m], "vertex_maps": [[[v, w], ...], ...]}` with `P_i → P_{i+1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TelescopeJson {
    pub complexes: Vec<SimplicialComplex>,
    #[serde(default)]
    pub vertex_maps: Vec<Vec<(usize, usize)>>,
}

impl TelescopeJson {
    pub fn build(self) -> Result<Telescope> {
        if self.complexes.len() != self.vertex_maps.len() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} complexes need {} vertex maps",
                self.complexes.len(),
                self.complexes.len().saturating_sub(1)
            )));
        }
        let maps: Vec<SimplicialMap> = self
            .vertex_maps
            .into_iter()
            .enumerate()
            .map(|(i, vm)| {
                SimplicialMap::new(self.complexes[i].clone(), self.complexes[i + 1].clone(), vm.into_iter().collect())
            })
            .collect::<Result<_>>()?;
        mapping_telescope(&maps, &self.complexes[0])
    }
}

/// Input of the pullback-lemma check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PullbackCheckJson {
    #[serde(rename = "K")]
    pub k: SimplicialComplex,
    #[serde(rename = "Y")]
    pub y: SimplicialComplex,
    #[serde(rename = "Z", default = "SimplicialComplex::empty")]
    pub z: SimplicialComplex,
    #[serde(rename = "W", default = "SimplicialComplex::empty")]
    pub w: SimplicialComplex,
    pub n: usize,
}
