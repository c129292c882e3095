use serde::{Deserialize, Serialize};

use super::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// `{"generators": n, "relations": <matrix>}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub generators: usize,
    #[serde(default)]
    pub relations: Option<IntMatrix>,
}

impl From<&FgAbGroup> for GroupJson {
    fn from(g: &FgAbGroup) -> Self {
        GroupJson { generators: g.generators(), relations: Some(g.relations().clone()) }
    }
}

impl TryFrom<GroupJson> for FgAbGroup {
    type Error = Error;
    fn try_from(j: GroupJson) -> Result<FgAbGroup> {
        let rel = j.relations.unwrap_or_else(|| IntMatrix::zeros(j.generators, 0));
        // A 0x0 matrix is accepted as "no relations" for any generator count.
        let rel = if rel.rows() == 0 && rel.cols() == 0 { IntMatrix::zeros(j.generators, 0) } else { rel };
        FgAbGroup::new(j.generators, rel)
    }
}

/// `{"source": <group>, "target": <group>, "matrix": <matrix>}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomJson {
    pub source: GroupJson,
    pub target: GroupJson,
    pub matrix: IntMatrix,
}

impl From<&GroupHom> for HomJson {
    fn from(f: &GroupHom) -> Self {
        HomJson { source: f.source().into(), target: f.target().into(), matrix: f.matrix().clone() }
    }
}

impl TryFrom<HomJson> for GroupHom {
    type Error = Error;
    fn try_from(j: HomJson) -> Result<GroupHom> {
        GroupHom::new(j.source.try_into()?, j.target.try_into()?, j.matrix)
    }
}

impl Serialize for FgAbGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgAbGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        GroupJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

impl Serialize for GroupHom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HomJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupHom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        HomJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}
