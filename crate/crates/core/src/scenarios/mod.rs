//! Built-in worked examples and the verification driver for the Milnor sequence.
//!
//! Every scenario recomputes its group values from complexes or covers and
//! reports a list of named checks.

mod alexandroff;
mod milnor;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bisystem::{tau, BiSystem, TauReport, Verdict, Window};
use crate::error::{Error, Result};
use crate::fgab::{FgAbGroup, GroupHom, Subgroup};
use crate::simplicial::{mapping_telescope, polygon_wrap, SimplicialComplex, SimplicialMap, Telescope};
use crate::towers::{lim, lim1_class, lim1_fg, Affine, Lim1Class, Lim1FgResult, LimResult, Tower};

pub use alexandroff::{alexandroff, Alexandroff};
pub use milnor::{verify_milnor, ComplexTower, HomologyTower, MilnorReport, Tail};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Check {
        Check { name: name.to_string(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioReport {
    pub name: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "scenario": self.name,
            "parameters": self.parameters,
            "certificates": self.checks,
            "data": self.data,
            "passed": self.passed(),
            "narrative": self.narrative(),
        })
    }

    /// Plain-text account, one line per check.
    pub fn narrative(&self) -> String {
        let mut s = format!("{} {}\n", self.name, self.parameters);
        for c in &self.checks {
            let _ = writeln!(s, "  [{}] {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail);
        }
        s
    }
}

pub(crate) fn describe_lim(l: &LimResult) -> String {
    match l {
        LimResult::Group(g) => format!("{} ({})", g.group, g.certificate),
        LimResult::ProNormalForm { reason, .. } => format!("not certified finitely generated: {reason}"),
    }
}

pub(crate) fn lim_is_zero(l: &LimResult) -> bool {
    l.group().is_some_and(FgAbGroup::is_trivial)
}

/// `Some(k)` when `f` is multiplication by `k` on `Z`.
fn scalar_on_z(f: &GroupHom) -> Option<BigInt> {
    let z = FgAbGroup::free(1);
    (f.source().is_isomorphic(&z) && f.target().is_isomorphic(&z) && f.source().generators() == 1 && f.target().generators() == 1)
        .then(|| f.matrix().entries()[0].clone())
}

/// Checks that every map is `×(±p)` on `Z` and that all of them agree.
fn all_times_p(maps: &[GroupHom], p: u64) -> Check {
    let ks: Vec<Option<BigInt>> = maps.iter().map(scalar_on_z).collect();
    let ok = !ks.is_empty()
        && ks.iter().all(|k| k.as_ref().is_some_and(|k| k.abs() == BigInt::from(p)))
        && ks.windows(2).all(|w| w[0] == w[1]);
    let shown: Vec<String> = ks.iter().map(|k| k.as_ref().map_or("not Z -> Z".into(), |k| format!("x{k}"))).collect();
    Check::new("bonding_maps", ok, format!("induced maps {}", shown.join(", ")))
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invalid(msg.into()))
    }
}

fn tower_checks(t: &Tower, checks: &mut Vec<Check>) -> (LimResult, Lim1Class) {
    let l = lim(t);
    let c = lim1_class(t);
    checks.push(Check::new("lim_zero", lim_is_zero(&l), describe_lim(&l)));
    checks.push(Check::new("lim1_nonvanishing", !c.vanishes(), c.summary()));
    (l, c)
}

/// Circles `P_i` (a `3p^i`-gon) with degree-`p` wraps `P_{i+1} → P_i`, and their `H_1` tower.
pub struct Solenoid {
    pub p: u64,
    pub complexes: ComplexTower,
    pub h1: HomologyTower,
}

pub fn solenoid_tower(p: u64, depth: usize) -> Result<ComplexTower> {
    require(p >= 2, "p must be at least 2")?;
    require(depth >= 1, "depth must be at least 1")?;
    let m = |i: usize| 3 * (p as usize).pow(i as u32);
    let stages = (0..=depth).map(|i| SimplicialComplex::polygon(m(i))).collect();
    let maps = (0..depth).map(|i| polygon_wrap(p as usize, m(i))).collect();
    ComplexTower::new(stages, maps, Tail::RepeatLast)
}

pub fn solenoid(p: u64, depth: usize) -> Result<Solenoid> {
    let complexes = solenoid_tower(p, depth)?;
    let h1 = complexes.homology_tower(1)?;
    Ok(Solenoid { p, complexes, h1 })
}

impl Solenoid {
    pub fn report(&self) -> ScenarioReport {
        let mut checks = Vec::new();
        let sizes: Vec<usize> = self.complexes.stages.iter().map(|k| k.vertices().len()).collect();
        let want: Vec<usize> = (0..sizes.len()).map(|i| 3 * (self.p as usize).pow(i as u32)).collect();
        checks.push(Check::new("stage_sizes", sizes == want, format!("polygon vertex counts {sizes:?}")));
        let z = FgAbGroup::free(1);
        let groups_ok = self.h1.groups.iter().all(|g| g.is_isomorphic(&z));
        checks.push(Check::new("h1_groups", groups_ok, format!("H_1 of the stages: {}", join(&self.h1.groups))));
        checks.push(all_times_p(&self.h1.maps, self.p));
        let (l, c) = tower_checks(&self.h1.tower, &mut checks);
        ScenarioReport {
            name: "solenoid".into(),
            parameters: json!({"p": self.p, "depth": self.complexes.maps.len()}),
            checks,
            data: json!({
                "stage_vertices": sizes,
                "h1_maps": self.h1.maps.iter().map(|f| f.matrix().to_string()).collect::<Vec<_>>(),
                "lim_h1": describe_lim(&l),
                "lim1_h1": c.summary(),
            }),
        }
    }
}

fn join(gs: &[FgAbGroup]) -> String {
    gs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Telescopes `T_[0,k]` of `P_0 → P_1 → ...` with `P_i` a `3p^(m−i)`-gon and
/// degree-`p` wraps, and the `H^1` tower of the inclusions `T_[0,k] ⊂ T_[0,k+1]`.
pub struct TelescopeScenario {
    pub p: u64,
    pub telescopes: Vec<Telescope>,
    pub groups: Vec<FgAbGroup>,
    pub maps: Vec<GroupHom>,
    pub tower: Tower,
}

pub fn telescope(p: u64, m: usize) -> Result<TelescopeScenario> {
    require(p >= 2, "p must be at least 2")?;
    require(m >= 1, "m must be at least 1")?;
    let size = |i: usize| 3 * (p as usize).pow((m - i) as u32);
    let base = SimplicialComplex::polygon(size(0));
    let wraps: Vec<SimplicialMap> = (0..m).map(|i| polygon_wrap(p as usize, size(i + 1))).collect();
    let telescopes = (1..=m).map(|k| mapping_telescope(&wraps[..k], &base)).collect::<Result<Vec<_>>>()?;
    let groups: Vec<FgAbGroup> = telescopes.iter().map(|t| crate::simplicial::cohomology(&t.complex, 1)).collect();
    let mut maps = Vec::new();
    for w in telescopes.windows(2) {
        let inc = SimplicialMap::inclusion(&w[0].complex, &w[1].complex)?;
        maps.push(inc.induced_cohomology(1));
    }
    let tower = milnor::assemble(groups.clone(), maps.clone(), Tail::RepeatLast)?;
    Ok(TelescopeScenario { p, telescopes, groups, maps, tower })
}

impl TelescopeScenario {
    pub fn report(&self) -> ScenarioReport {
        let mut checks = Vec::new();
        let z = FgAbGroup::free(1);
        let ok = self.groups.iter().all(|g| g.is_isomorphic(&z));
        checks.push(Check::new("h1_groups", ok, format!("H^1 of T_[0,k], k = 1..{}: {}", self.groups.len(), join(&self.groups))));
        if self.maps.is_empty() {
            checks.push(Check::new("bonding_maps", false, "a single telescope has no bonding map; use m >= 2"));
        } else {
            checks.push(all_times_p(&self.maps, self.p));
        }
        let (l, c) = tower_checks(&self.tower, &mut checks);
        ScenarioReport {
            name: "telescope".into(),
            parameters: json!({"p": self.p, "m": self.telescopes.len()}),
            checks,
            data: json!({
                "telescope_simplices": self.telescopes.iter().map(|t| t.complex.total_simplices()).collect::<Vec<_>>(),
                "h1_groups": self.groups.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "h1_maps": self.maps.iter().map(|f| f.matrix().to_string()).collect::<Vec<_>>(),
                "lim_h1": describe_lim(&l),
                "lim1_h1": c.summary(),
            }),
        }
    }
}

/// `... ⊂ ⊕_{i≥3} Z ⊂ ⊕_{i≥2} Z ⊂ ⊕_{i≥1} Z`, truncated at `width` basis vectors.
pub struct NestedFree {
    pub width: usize,
    pub tower: Tower,
    pub lim: LimResult,
    pub lim1: Lim1Class,
    pub lim1_fg: Lim1FgResult,
}

pub fn nested_free(width: usize) -> Result<NestedFree> {
    require(width >= 2, "width must be at least 2")?;
    let tower = Tower::free_nested(Affine { a: 1, b: 1 }, width)?;
    Ok(NestedFree { width, lim: lim(&tower), lim1: lim1_class(&tower), lim1_fg: lim1_fg(&tower)?, tower })
}

impl NestedFree {
    pub fn report(&self) -> ScenarioReport {
        let checks = vec![
            Check::new("lim_zero", lim_is_zero(&self.lim), format!("H_1 slot: {}", describe_lim(&self.lim))),
            Check::new("lim1_nonvanishing", !self.lim1.vanishes(), self.lim1.summary()),
            Check::new("lim1_fg_vanishes", self.lim1_fg.class.vanishes(), format!("{:?}: {}", self.lim1_fg.method, self.lim1_fg.class.summary())),
            Check::new(
                "quotient_nonzero",
                !self.lim1.vanishes() && self.lim1_fg.class.vanishes(),
                "lim^1 is nonzero while lim^1_fg is zero, so lim^1 / lim^1_fg is nonzero",
            ),
        ];
        ScenarioReport {
            name: "nested_free".into(),
            parameters: json!({"width": self.width, "offsets": "i+1"}),
            checks,
            data: json!({
                "ranks": (0..=self.width).map(|i| self.tower.term(i).free_rank()).collect::<Vec<_>>(),
                "lim": describe_lim(&self.lim),
                "lim1": self.lim1.summary(),
                "lim1_fg": self.lim1_fg.class.summary(),
            }),
        }
    }
}

/// `G_{αβ} = Z` with both families of maps multiplication by `p`.
pub struct PPower {
    pub p: u64,
    pub system: BiSystem,
    pub tau: TauReport,
}

pub fn p_power_bisystem(p: u64, window: Window) -> Result<PPower> {
    require(p >= 2, "p must be at least 2")?;
    let z = FgAbGroup::free(1);
    let system = BiSystem::bi_periodic(GroupHom::scalar(&z, p), GroupHom::scalar(&z, p))?;
    let tau = tau(&system, window)?;
    Ok(PPower { p, system, tau })
}

impl PPower {
    pub fn report(&self) -> ScenarioReport {
        let mut checks = vec![
            Check::new("colim_lim_zero", self.tau.colim_lim.is_zero() == Some(true), self.tau.colim_lim.describe()),
            Check::new("lim_colim_nonzero", self.tau.lim_colim.is_zero() == Some(false), self.tau.lim_colim.describe()),
            Check::new(
                "tau_surjective_false",
                self.tau.surjective.verdict == Verdict::CertifiedFalse,
                self.tau.surjective.certificate.clone(),
            ),
        ];
        checks.push(self.thread_check());
        ScenarioReport {
            name: "p_power_bisystem".into(),
            parameters: json!({"p": self.p, "window": self.tau.window.to_string()}),
            checks,
            data: self.tau.to_json(),
        }
    }

    /// Rechecks the thread certificate algebraically and on every cell of the window.
    fn thread_check(&self) -> Check {
        let Some(t) = &self.tau.thread else {
            return Check::new("thread_certificate", false, "no periodic thread was produced");
        };
        let BiSystem::BiPeriodic { group, u, v } = &self.system else { unreachable!("built bi-periodic") };
        let image = match lim(&Tower::self_map(v).expect("endomorphism")) {
            LimResult::Group(g) => Subgroup::image_of(&g.inclusion),
            LimResult::ProNormalForm { .. } => return Check::new("thread_certificate", false, "column limit not finitely generated"),
        };
        let algebraic = t.verify(u, v, &image).unwrap_or(false);
        let w = self.tau.window;
        let mut cells = 0;
        let mut chase = true;
        for b in 0..w.beta.saturating_sub(1) {
            let a = t.step * b;
            if a + t.step >= w.alpha {
                break;
            }
            let mut across = t.element.clone();
            for i in 0..t.step {
                across = self.system.alpha_map(a + i, b).apply(&across);
            }
            let down = self.system.beta_map(a + t.step, b).apply(&t.element);
            let mut diff: Vec<BigInt> = across.iter().zip(&down).map(|(x, y)| x - y).collect();
            for _ in 0..t.kernel_power {
                diff = u.apply(&diff);
            }
            chase &= group.is_zero(&diff);
            cells += 1;
        }
        Check::new(
            "thread_certificate",
            algebraic && chase,
            format!("thread x = {:?} with step {} verified against u, v and on {cells} window cells", t.element.iter().map(|e| e.to_string()).collect::<Vec<_>>(), t.step),
        )
    }
}
