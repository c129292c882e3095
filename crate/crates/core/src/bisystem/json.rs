use serde::{Deserialize, Serialize};

use super::{BiSystem, ExplicitGrid, ToeplitzGrid};
use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, GroupHom};
use crate::linalg::IntMatrix;

/// Bisystem file format, tagged by `kind`.
///
/// Grid maps are matrices: `alpha_maps[α][β]` of `G_{α,β} → G_{α+1,β}`,
/// `beta_maps[α][β]` of `G_{α,β+1} → G_{α,β}`. Diagonal grids list
/// `H_low, ..., H_high` with `alpha_maps[i], beta_maps[i] : H_{low+i+1} → H_{low+i}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BiSystemJson {
    Grid { groups: Vec<Vec<FgAbGroup>>, alpha_maps: Vec<Vec<IntMatrix>>, beta_maps: Vec<Vec<IntMatrix>> },
    Periodic { group: FgAbGroup, u: IntMatrix, v: IntMatrix },
    Diagonal { low: i64, groups: Vec<FgAbGroup>, alpha_maps: Vec<IntMatrix>, beta_maps: Vec<IntMatrix> },
}

fn hom(src: Option<&FgAbGroup>, tgt: Option<&FgAbGroup>, m: IntMatrix) -> Result<GroupHom> {
    match (src, tgt) {
        (Some(s), Some(t)) => GroupHom::new(s.clone(), t.clone(), m),
        _ => Err(Error::DimensionMismatch("map outside the grid".into())),
    }
}

impl TryFrom<BiSystemJson> for BiSystem {
    type Error = Error;
    fn try_from(j: BiSystemJson) -> Result<BiSystem> {
        match j {
            BiSystemJson::Grid { groups, alpha_maps, beta_maps } => {
                let at = |a: usize, b: usize| groups.get(a).and_then(|r| r.get(b));
                let alpha = alpha_maps
                    .into_iter()
                    .enumerate()
                    .map(|(a, row)| row.into_iter().enumerate().map(|(b, m)| hom(at(a, b), at(a + 1, b), m)).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                let beta = beta_maps
                    .into_iter()
                    .enumerate()
                    .map(|(a, row)| row.into_iter().enumerate().map(|(b, m)| hom(at(a, b + 1), at(a, b), m)).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                Ok(BiSystem::Explicit(ExplicitGrid::new(groups, alpha, beta)?))
            }
            BiSystemJson::Periodic { group, u, v } => {
                let u = GroupHom::new(group.clone(), group.clone(), u)?;
                let v = GroupHom::new(group.clone(), group, v)?;
                BiSystem::bi_periodic(u, v)
            }
            BiSystemJson::Diagonal { low, groups, alpha_maps, beta_maps } => {
                let step = |maps: Vec<IntMatrix>| {
                    maps.into_iter().enumerate().map(|(i, m)| hom(groups.get(i + 1), groups.get(i), m)).collect::<Result<Vec<_>>>()
                };
                let alpha = step(alpha_maps)?;
                let beta = step(beta_maps)?;
                Ok(BiSystem::Toeplitz(ToeplitzGrid::new(low, groups, alpha, beta)?))
            }
        }
    }
}

impl From<&BiSystem> for BiSystemJson {
    fn from(s: &BiSystem) -> Self {
        let mats = |v: &[GroupHom]| v.iter().map(|f| f.matrix().clone()).collect::<Vec<_>>();
        match s {
            BiSystem::Explicit(g) => BiSystemJson::Grid {
                groups: g.groups.clone(),
                alpha_maps: g.alpha_maps.iter().map(|r| mats(r)).collect(),
                beta_maps: g.beta_maps.iter().map(|r| mats(r)).collect(),
            },
            BiSystem::BiPeriodic { group, u, v } => {
                BiSystemJson::Periodic { group: group.clone(), u: u.matrix().clone(), v: v.matrix().clone() }
            }
            BiSystem::Toeplitz(t) => BiSystemJson::Diagonal {
                low: t.low,
                groups: t.groups.clone(),
                alpha_maps: mats(&t.alpha),
                beta_maps: mats(&t.beta),
            },
        }
    }
}

impl Serialize for BiSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BiSystemJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        BiSystemJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}
