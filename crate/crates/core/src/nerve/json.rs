use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Ball, CarrierPoint, Cover, CoverElement};
use crate::error::{Error, Result};
use crate::linalg::JsonInt;

/// Rational number as `[numerator, denominator]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalJson(pub JsonInt, pub JsonInt);

impl RationalJson {
    pub fn to_rational(&self) -> Result<BigRational> {
        if self.1 .0 == BigInt::from(0) {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(BigRational::new(self.0 .0.clone(), self.1 .0.clone()))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        RationalJson(JsonInt(q.numer().clone()), JsonInt(q.denom().clone()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointJson {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<(RationalJson, RationalJson)>,
}

/// Element given by member ids, or by a closed ball.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Members { label: String, members: Vec<String> },
    Ball { label: String, center: (RationalJson, RationalJson), radius: RationalJson },
}

/// `{"carrier": [{"id", "coords"?}], "elements": [{"label", "members"} | {"label", "center", "radius"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverJson {
    pub carrier: Vec<PointJson>,
    pub elements: Vec<ElementJson>,
}

impl TryFrom<CoverJson> for Cover {
    type Error = Error;
    fn try_from(j: CoverJson) -> Result<Cover> {
        let carrier: Vec<CarrierPoint> = j
            .carrier
            .iter()
            .map(|p| {
                let coords = match &p.coords {
                    Some((x, y)) => Some((x.to_rational()?, y.to_rational()?)),
                    None => None,
                };
                Ok(CarrierPoint { id: p.id.clone(), coords })
            })
            .collect::<Result<_>>()?;
        let mut elements = Vec::new();
        for e in j.elements {
            match e {
                ElementJson::Members { label, members } => {
                    let idx: BTreeSet<usize> = members
                        .iter()
                        .map(|m| {
                            carrier.iter().position(|p| &p.id == m).ok_or_else(|| Error::Invalid(format!("unknown point {m:?}")))
                        })
                        .collect::<Result<_>>()?;
                    elements.push(CoverElement { label, members: idx });
                }
                ElementJson::Ball { label, center, radius } => {
                    let b = Ball { label, center: (center.0.to_rational()?, center.1.to_rational()?), radius: radius.to_rational()? };
                    let mut idx = BTreeSet::new();
                    for (i, p) in carrier.iter().enumerate() {
                        let c = p.coords.as_ref().ok_or_else(|| Error::Invalid(format!("point {:?} has no coordinates", p.id)))?;
                        if b.contains(c) {
                            idx.insert(i);
                        }
                    }
                    if !idx.is_empty() {
                        elements.push(CoverElement { label: b.label, members: idx });
                    }
                }
            }
        }
        Cover::new(carrier, elements)
    }
}

impl From<&Cover> for CoverJson {
    fn from(c: &Cover) -> Self {
        CoverJson {
            carrier: c
                .carrier()
                .iter()
                .map(|p| PointJson {
                    id: p.id.clone(),
                    coords: p.coords.as_ref().map(|(x, y)| (RationalJson::from_rational(x), RationalJson::from_rational(y))),
                })
                .collect(),
            elements: c
                .elements()
                .iter()
                .map(|e| ElementJson::Members {
                    label: e.label.clone(),
                    members: e.members.iter().map(|&i| c.carrier()[i].id.clone()).collect(),
                })
                .collect(),
        }
    }
}
