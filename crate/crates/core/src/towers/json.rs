use serde::{Deserialize, Serialize};

use super::{Affine, Tower, TowerKind};
use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, GroupHom};
use crate::linalg::IntMatrix;

/// Tower file format.
///
/// `prefix_maps[i]` and `maps[i]` are matrices of `G_{i+1} → G_i`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TowerJson {
    Explicit { groups: Vec<FgAbGroup>, maps: Vec<IntMatrix> },
    Periodic {
        #[serde(default)]
        prefix: Vec<FgAbGroup>,
        #[serde(default)]
        prefix_maps: Vec<IntMatrix>,
        period_group: FgAbGroup,
        period_map: IntMatrix,
    },
    FreeNested { offsets: String, width: usize },
}

fn homs(groups: &[FgAbGroup], next: Option<&FgAbGroup>, maps: Vec<IntMatrix>) -> Result<Vec<GroupHom>> {
    maps.into_iter()
        .enumerate()
        .map(|(i, m)| {
            let src = groups.get(i + 1).or(next).ok_or_else(|| Error::Invalid("more maps than groups".into()))?;
            let tgt = groups.get(i).ok_or_else(|| Error::Invalid("more maps than groups".into()))?;
            GroupHom::new(src.clone(), tgt.clone(), m)
        })
        .collect()
}

impl TryFrom<TowerJson> for Tower {
    type Error = Error;
    fn try_from(j: TowerJson) -> Result<Tower> {
        match j {
            TowerJson::Explicit { groups, maps } => {
                let maps = homs(&groups, None, maps)?;
                Tower::explicit(groups, maps)
            }
            TowerJson::Periodic { prefix, prefix_maps, period_group, period_map } => {
                let maps = homs(&prefix, Some(&period_group), prefix_maps)?;
                let phi = GroupHom::new(period_group.clone(), period_group.clone(), period_map)?;
                Tower::periodic(prefix, maps, period_group, phi)
            }
            TowerJson::FreeNested { offsets, width } => Tower::free_nested(offsets.parse::<Affine>()?, width),
        }
    }
}

impl From<&Tower> for TowerJson {
    fn from(t: &Tower) -> TowerJson {
        if let Some(f) = t.free_nested_data() {
            return TowerJson::FreeNested { offsets: f.offsets.to_string(), width: f.width };
        }
        let p = t.periodic_form();
        let maps = p.prefix_maps.iter().map(|f| f.matrix().clone()).collect();
        match t.kind() {
            TowerKind::ExplicitFinite => {
                let mut groups = p.prefix.clone();
                groups.push(p.period.clone());
                TowerJson::Explicit { groups, maps }
            }
            _ => TowerJson::Periodic {
                prefix: p.prefix.clone(),
                prefix_maps: maps,
                period_group: p.period.clone(),
                period_map: p.phi.matrix().clone(),
            },
        }
    }
}

impl Serialize for Tower {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TowerJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tower {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        TowerJson::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}
