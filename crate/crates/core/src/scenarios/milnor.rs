use serde_json::{json, Map, Value};

use super::{describe_lim, Check, ScenarioReport};
use crate::error::{Error, Result};
use crate::fgab::{check_exact, lift, FgAbGroup, GroupHom, JunctionReport};
use crate::simplicial::{homology, SimplicialComplex, SimplicialMap};
use crate::towers::{lim, lim1_class, roos_shift_check, Lim1Class, LimResult, RoosReport, Tower};

/// How a finite tower of complexes continues past its last stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// The last stage repeats with identity maps.
    Constant,
    /// The last bonding map repeats forever.
    RepeatLast,
}

/// `K_0 ← K_1 ← ... ← K_m` with `maps[i] : K_{i+1} → K_i`.
#[derive(Clone, Debug)]
pub struct ComplexTower {
    pub stages: Vec<SimplicialComplex>,
    pub maps: Vec<SimplicialMap>,
    pub tail: Tail,
}

/// A (co)homology tower together with the finite data it was built from.
#[derive(Clone, Debug)]
pub struct HomologyTower {
    pub groups: Vec<FgAbGroup>,
    pub maps: Vec<GroupHom>,
    pub tower: Tower,
}

impl ComplexTower {
    pub fn new(stages: Vec<SimplicialComplex>, maps: Vec<SimplicialMap>, tail: Tail) -> Result<ComplexTower> {
        if stages.is_empty() || maps.len() + 1 != stages.len() {
            return Err(Error::DimensionMismatch(format!("{} stages need {} maps", stages.len(), stages.len().saturating_sub(1))));
        }
        for (i, f) in maps.iter().enumerate() {
            if f.source() != &stages[i + 1] || f.target() != &stages[i] {
                return Err(Error::NotComposable(i));
            }
        }
        Ok(ComplexTower { stages, maps, tail })
    }

    /// `len` copies of `k` joined by identities.
    pub fn constant(k: &SimplicialComplex, len: usize) -> ComplexTower {
        let len = len.max(1);
        ComplexTower {
            stages: vec![k.clone(); len],
            maps: vec![SimplicialMap::identity(k); len - 1],
            tail: Tail::Constant,
        }
    }

    pub fn homology_tower(&self, n: usize) -> Result<HomologyTower> {
        let groups: Vec<FgAbGroup> = self.stages.iter().map(|k| homology(k, n)).collect();
        let maps: Vec<GroupHom> = self.maps.iter().map(|f| f.induced_homology(n)).collect();
        let tower = assemble(groups.clone(), maps.clone(), self.tail)?;
        Ok(HomologyTower { groups, maps, tower })
    }

    /// The limit is realized by a finite complex: the last stage, when the
    /// tail is constant or repeats an identity map.
    pub fn finite_limit(&self) -> Option<&SimplicialComplex> {
        let last = self.stages.last()?;
        match (self.tail, self.maps.last()) {
            (Tail::Constant, _) | (Tail::RepeatLast, None) => Some(last),
            (Tail::RepeatLast, Some(f)) => (f.source() == f.target() && f.vertex_map().iter().all(|(a, b)| a == b)).then_some(last),
        }
    }
}

/// Tower from `groups[i]` and `maps[i] : groups[i+1] → groups[i]`, continued by `tail`.
pub(crate) fn assemble(groups: Vec<FgAbGroup>, maps: Vec<GroupHom>, tail: Tail) -> Result<Tower> {
    match (tail, maps.last()) {
        (Tail::Constant, _) | (Tail::RepeatLast, None) => Tower::explicit(groups, maps),
        (Tail::RepeatLast, Some(last)) => {
            if !last.source().same_presentation(last.target()) {
                return Err(Error::Invalid(format!(
                    "cannot repeat the last map: {} and {} are presented differently",
                    last.source(),
                    last.target()
                )));
            }
            let mut prefix = groups;
            let period = prefix.pop().expect("one more group than maps");
            let phi = GroupHom::new(period.clone(), period.clone(), last.matrix().clone())?;
            Tower::periodic(prefix, maps, period, phi)
        }
    }
}

/// Slots of `0 → lim¹ H_{n+1} → H_n(lim) → lim H_n → 0` for a tower of complexes.
#[derive(Clone, Debug)]
pub struct MilnorReport {
    pub n: usize,
    pub upper: HomologyTower,
    pub lower: HomologyTower,
    pub lim1_upper: Lim1Class,
    pub lim_lower: LimResult,
    /// Exactness at each interior term, when every term is a finitely generated group.
    pub sequence: Option<Vec<JunctionReport>>,
    pub roos: RoosReport,
}

pub fn verify_milnor(t: &ComplexTower, n: usize) -> Result<MilnorReport> {
    let upper = t.homology_tower(n + 1)?;
    let lower = t.homology_tower(n)?;
    let lim1_upper = lim1_class(&upper.tower);
    let lim_lower = lim(&lower.tower);
    let mut sequence = None;
    if let (true, LimResult::Group(lg), Some(k)) = (lim1_upper.vanishes(), &lim_lower, t.finite_limit()) {
        // H_n of the limit is H_n of the last stage; it projects onto lim H_n.
        let m = t.stages.len() - 1;
        let hn = homology(k, n);
        let to_anchor = if m >= lg.anchor {
            lower.tower.composite(m, lg.anchor)
        } else {
            return Err(Error::Invalid("limit anchored past the last stage".into()));
        };
        let to_anchor = GroupHom::new(hn.clone(), lg.inclusion.target().clone(), to_anchor.matrix().clone())?;
        let proj = lift(&lg.inclusion, &to_anchor)?.ok_or_else(|| Error::Invalid("last stage does not map into the limit".into()))?;
        let zero = FgAbGroup::trivial();
        let maps = [
            GroupHom::zero(&zero, &zero),
            GroupHom::zero(&zero, &hn),
            proj,
            GroupHom::zero(&lg.group, &zero),
        ];
        sequence = Some(check_exact(&maps)?);
    }
    let roos = roos_shift_check(&lower.tower, t.stages.len().max(2))?;
    Ok(MilnorReport { n, upper, lower, lim1_upper, lim_lower, sequence, roos })
}

impl MilnorReport {
    pub fn sequence_exact(&self) -> Option<bool> {
        self.sequence.as_ref().map(|s| s.iter().all(|j| j.exact))
    }

    pub fn report(&self) -> ScenarioReport {
        let n = self.n;
        let mut checks = Vec::new();
        if let LimResult::Group(g) = &self.lim_lower {
            checks.push(Check::new("lim_threads", g.verify_threads(self.lower.groups.len() + 2), format!("threads of lim H_{n} are compatible")));
        }
        if let Some(seq) = &self.sequence {
            let ok = seq.iter().all(|j| j.exact);
            checks.push(Check::new("sequence_exact", ok, format!("0 -> lim^1 H_{} -> H_{n}(lim) -> lim H_{n} -> 0 checked at {} junctions", n + 1, seq.len())));
        }
        checks.push(Check::new(
            "shift_kernel",
            self.roos.kernel_matches_lim && self.roos.cokernel_vanishes,
            format!("depth {}: ker {} (lim of truncation {}), coker {}", self.roos.depth, self.roos.kernel, self.roos.truncated_lim, self.roos.cokernel),
        ));
        let seq_note = match &self.sequence {
            Some(_) => "all terms finitely generated; exactness checked".to_string(),
            None => "middle term has no finite model; slots reported with certificates".to_string(),
        };
        let strs = |gs: &[FgAbGroup]| gs.iter().map(ToString::to_string).collect::<Vec<_>>();
        let mut data = Map::new();
        data.insert(format!("H_{}", n + 1), json!(strs(&self.upper.groups)));
        data.insert(format!("H_{n}"), json!(strs(&self.lower.groups)));
        data.insert(format!("lim1_H_{}", n + 1), json!({"vanishes": self.lim1_upper.vanishes(), "certificate": self.lim1_upper.summary()}));
        data.insert(format!("lim_H_{n}"), json!({"value": describe_lim(&self.lim_lower), "zero": super::lim_is_zero(&self.lim_lower)}));
        data.insert("sequence".into(), json!(seq_note));
        data.insert("shift".into(), json!(self.roos));
        ScenarioReport {
            name: "verify_milnor".into(),
            parameters: json!({"n": n, "stages": self.lower.groups.len()}),
            checks,
            data: Value::Object(data),
        }
    }
}
