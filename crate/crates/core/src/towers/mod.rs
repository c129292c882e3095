//! Inverse sequences of finitely generated abelian groups.
//!
//! A tower `... → G_2 → G_1 → G_0` is stored with `map(i) : G_{i+1} → G_i`.

mod analysis;
mod checks;
mod json;
mod lim;
pub mod random;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, GroupHom};
use crate::linalg::IntMatrix;

pub use analysis::{image_tower, MlAnalysis, MlDecision};
pub use checks::{lim_fg_check, roos_shift_check, LimFgReport, RoosReport, SampleReport};
pub use json::TowerJson;
pub use lim::{is_mittag_leffler, lim, lim1_class, lim1_fg, lim1_fg_with_seed, Lim1Certificate, Lim1Class, Lim1FgMethod, Lim1FgResult, Lim1Value, LimGroup, LimResult, PurifiedWitness};

/// Offsets `k_i = a·i + b` of a nested free tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub a: usize,
    pub b: usize,
}

impl Affine {
    pub fn at(&self, i: usize) -> usize {
        self.a * i + self.b
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (1, 0) => write!(f, "i"),
            (1, b) => write!(f, "i+{b}"),
            (a, 0) => write!(f, "{a}i"),
            (a, b) => write!(f, "{a}i+{b}"),
        }
    }
}

/// Parses `i`, `i+1`, `2i+3`, `2*i+3`.
impl FromStr for Affine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Affine> {
        let bad = || Error::Invalid(format!("offset schedule {s:?} is not of the form a*i+b"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (lin, cst) = match t.split_once('+') {
            Some((l, c)) => (l, c.parse::<usize>().map_err(|_| bad())?),
            None => (t.as_str(), 0),
        };
        let coef = lin.strip_suffix('i').ok_or_else(bad)?;
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let a = if coef.is_empty() { 1 } else { coef.parse::<usize>().map_err(|_| bad())? };
        Ok(Affine { a, b: cst })
    }
}

/// Nested free tower: term `i` is free on basis indices `k_i ..= width`
/// (1-based), bonding maps are the inclusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeNested {
    pub offsets: Affine,
    pub width: usize,
}

impl FreeNested {
    pub fn rank(&self, i: usize) -> usize {
        (self.width + 1).saturating_sub(self.offsets.at(i))
    }

    /// Number of levels with a nonzero term at this width.
    pub fn nonzero_levels(&self) -> usize {
        (0..).take_while(|&i| self.rank(i) > 0).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerKind {
    ExplicitFinite,
    EventuallyPeriodic,
    FreeNested,
}

/// Tower in eventually periodic form: `G_i = prefix[i]` for `i < k`, then
/// `G_i = period` with `map(i) = phi` for `i ≥ k`.
#[derive(Clone, Debug)]
pub(crate) struct Periodic {
    pub prefix: Vec<FgAbGroup>,
    /// `prefix_maps[i] : G_{i+1} → G_i`; the last one starts at the period group.
    pub prefix_maps: Vec<GroupHom>,
    pub period: FgAbGroup,
    pub phi: GroupHom,
}

impl Periodic {
    pub fn anchor(&self) -> usize {
        self.prefix.len()
    }

    pub fn term(&self, i: usize) -> &FgAbGroup {
        self.prefix.get(i).unwrap_or(&self.period)
    }

    pub fn map(&self, i: usize) -> &GroupHom {
        self.prefix_maps.get(i).unwrap_or(&self.phi)
    }

    /// `G_j → G_i` for `j ≥ i`.
    pub fn composite(&self, j: usize, i: usize) -> GroupHom {
        assert!(j >= i, "composite runs downward");
        let mut f = GroupHom::identity(self.term(j));
        for l in (i..j).rev() {
            f = f.then(self.map(l)).expect("tower maps compose");
        }
        f
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Periodic { explicit: bool, data: Periodic },
    FreeNested(FreeNested),
}

#[derive(Clone, Debug)]
pub struct Tower {
    repr: Repr,
}

impl Tower {
    /// `G_0 ← G_1 ← ... ← G_m`, continued by identities on `G_m`.
    pub fn explicit(groups: Vec<FgAbGroup>, maps: Vec<GroupHom>) -> Result<Tower> {
        if groups.is_empty() {
            return Err(Error::Invalid("an explicit tower needs at least one group".into()));
        }
        if maps.len() + 1 != groups.len() {
            return Err(Error::DimensionMismatch(format!("{} groups need {} maps, got {}", groups.len(), groups.len() - 1, maps.len())));
        }
        check_maps(&groups, &maps)?;
        let mut prefix = groups;
        let period = prefix.pop().expect("nonempty");
        let phi = GroupHom::identity(&period);
        let prefix_maps = fix_endpoints(&prefix, &period, maps);
        Ok(Tower { repr: Repr::Periodic { explicit: true, data: Periodic { prefix, prefix_maps, period, phi } } })
    }

    /// Finite prefix followed by the periodic tail `... → G → G` with map `phi`.
    pub fn periodic(prefix: Vec<FgAbGroup>, prefix_maps: Vec<GroupHom>, period: FgAbGroup, phi: GroupHom) -> Result<Tower> {
        if prefix_maps.len() != prefix.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} prefix groups need {} prefix maps, got {}",
                prefix.len(),
                prefix.len(),
                prefix_maps.len()
            )));
        }
        if !phi.source().same_presentation(&period) || !phi.target().same_presentation(&period) {
            return Err(Error::NotComposable(prefix.len()));
        }
        let mut all = prefix.clone();
        all.push(period.clone());
        check_maps(&all, &prefix_maps)?;
        let prefix_maps = fix_endpoints(&prefix, &period, prefix_maps);
        let phi = GroupHom::new(period.clone(), period.clone(), phi.matrix().clone())?;
        Ok(Tower { repr: Repr::Periodic { explicit: false, data: Periodic { prefix, prefix_maps, period, phi } } })
    }

    pub fn constant(g: &FgAbGroup) -> Tower {
        Tower::explicit(vec![g.clone()], vec![]).expect("single group")
    }

    /// `... → Z --×k--> Z --×k--> Z`.
    pub fn multiplication(k: impl Into<BigInt>) -> Tower {
        let z = FgAbGroup::free(1);
        Tower::periodic(vec![], vec![], z.clone(), GroupHom::scalar(&z, k)).expect("well formed")
    }

    /// `... → G --φ--> G`.
    pub fn self_map(phi: &GroupHom) -> Result<Tower> {
        Tower::periodic(vec![], vec![], phi.source().clone(), phi.clone())
    }

    pub fn free_nested(offsets: Affine, width: usize) -> Result<Tower> {
        if offsets.a == 0 {
            return Err(Error::Invalid("free nested offsets must strictly increase".into()));
        }
        if offsets.b == 0 {
            return Err(Error::Invalid("basis indices are 1-based; the first offset must be at least 1".into()));
        }
        Ok(Tower { repr: Repr::FreeNested(FreeNested { offsets, width }) })
    }

    pub fn kind(&self) -> TowerKind {
        match &self.repr {
            Repr::Periodic { explicit: true, .. } => TowerKind::ExplicitFinite,
            Repr::Periodic { .. } => TowerKind::EventuallyPeriodic,
            Repr::FreeNested(_) => TowerKind::FreeNested,
        }
    }

    /// All terms finitely generated (false for the symbolic nested free kind).
    pub fn is_finitely_generated(&self) -> bool {
        !matches!(self.repr, Repr::FreeNested(_))
    }

    pub fn free_nested_data(&self) -> Option<&FreeNested> {
        match &self.repr {
            Repr::FreeNested(f) => Some(f),
            _ => None,
        }
    }

    /// Eventually periodic form; nested free towers are truncated at their width.
    pub(crate) fn periodic_form(&self) -> Periodic {
        match &self.repr {
            Repr::Periodic { data, .. } => data.clone(),
            Repr::FreeNested(f) => truncate_free_nested(f),
        }
    }

    pub fn term(&self, i: usize) -> FgAbGroup {
        self.periodic_form().term(i).clone()
    }

    pub fn map(&self, i: usize) -> GroupHom {
        self.periodic_form().map(i).clone()
    }

    /// `G_j → G_i` for `j ≥ i`.
    pub fn composite(&self, j: usize, i: usize) -> GroupHom {
        self.periodic_form().composite(j, i)
    }

    /// Index from which the terms and maps repeat.
    pub fn anchor(&self) -> usize {
        self.periodic_form().anchor()
    }

    /// The finite truncation `G_0 ← ... ← G_{depth-1}` as an explicit tower.
    pub fn truncate(&self, depth: usize) -> Result<Tower> {
        if depth == 0 {
            return Err(Error::Invalid("truncation depth must be at least 1".into()));
        }
        let p = self.periodic_form();
        let groups = (0..depth).map(|i| p.term(i).clone()).collect();
        let maps = (0..depth - 1).map(|i| p.map(i).clone()).collect();
        Tower::explicit(groups, maps)
    }
}

fn check_maps(groups: &[FgAbGroup], maps: &[GroupHom]) -> Result<()> {
    for (i, f) in maps.iter().enumerate() {
        if !f.source().same_presentation(&groups[i + 1]) || !f.target().same_presentation(&groups[i]) {
            return Err(Error::NotComposable(i));
        }
    }
    Ok(())
}

/// Re-homes the maps on the stored group values so that endpoint identity is by pointer.
fn fix_endpoints(prefix: &[FgAbGroup], period: &FgAbGroup, maps: Vec<GroupHom>) -> Vec<GroupHom> {
    maps.into_iter()
        .enumerate()
        .map(|(i, f)| {
            let src = prefix.get(i + 1).unwrap_or(period);
            GroupHom::new(src.clone(), prefix[i].clone(), f.matrix().clone()).expect("checked above")
        })
        .collect()
}

fn truncate_free_nested(f: &FreeNested) -> Periodic {
    let levels = f.nonzero_levels();
    let groups: Vec<FgAbGroup> = (0..=levels).map(|i| FgAbGroup::free(f.rank(i))).collect();
    let maps: Vec<GroupHom> = (0..levels)
        .map(|i| {
            let shift = f.offsets.at(i + 1) - f.offsets.at(i);
            let (r_lo, r_hi) = (f.rank(i), f.rank(i + 1));
            let mut m = IntMatrix::zeros(r_lo, r_hi);
            for j in 0..r_hi {
                m[(j + shift, j)] = BigInt::from(1);
            }
            GroupHom::new(groups[i + 1].clone(), groups[i].clone(), m).expect("inclusion")
        })
        .collect();
    let mut prefix = groups;
    let period = prefix.pop().expect("nonempty");
    Periodic { phi: GroupHom::identity(&period), prefix, prefix_maps: maps, period }
}
