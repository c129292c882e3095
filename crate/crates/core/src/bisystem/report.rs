use serde::Serialize;
use serde_json::{json, Value};

use super::periodic::{endo_colim, power, preimage, saturate_under, PeriodicThread};
use super::{BiSystem, Window};
use crate::error::Result;
use crate::fgab::{check_exact, cokernel, is_isomorphism, kernel, lift, simplify, subgroup_group, FgAbGroup, GroupHom, JunctionReport, Subgroup};
use crate::linalg::IntVector;
use crate::towers::{lim, lim1_class, LimResult, Tower};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CertifiedTrue,
    CertifiedFalse,
    Undetermined,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certified {
    pub verdict: Verdict,
    pub certificate: String,
}

impl Certified {
    fn new(verdict: Verdict, certificate: impl Into<String>) -> Self {
        Certified { verdict, certificate: certificate.into() }
    }
}

/// A side of the comparison: an exact group, or a described infinite object.
#[derive(Clone, Debug)]
pub enum BiValue {
    /// `stable`: enlarging the window cannot change the value.
    Group { group: FgAbGroup, stable: bool },
    Symbolic { description: String, nonzero: Option<bool> },
}

impl BiValue {
    pub fn group(&self) -> Option<&FgAbGroup> {
        match self {
            BiValue::Group { group, .. } => Some(group),
            BiValue::Symbolic { .. } => None,
        }
    }

    pub fn is_zero(&self) -> Option<bool> {
        match self {
            BiValue::Group { group, .. } => Some(group.is_trivial()),
            BiValue::Symbolic { nonzero, .. } => nonzero.map(|n| !n),
        }
    }

    pub fn stable(&self) -> bool {
        match self {
            BiValue::Group { stable, .. } => *stable,
            BiValue::Symbolic { nonzero, .. } => nonzero.is_some(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BiValue::Group { group, .. } => simplify(group).group.to_string(),
            BiValue::Symbolic { description, .. } => description.clone(),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "value": self.describe(),
            "finitely_generated": self.group().is_some(),
            "zero": self.is_zero(),
            "stable": self.stable(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotValue {
    Vanishes,
    NonVanishing,
    Undetermined,
}

/// A `lim¹` term of the four-term sequence, taken from the next-degree grid.
#[derive(Clone, Debug, Serialize)]
pub struct Slot {
    pub value: SlotValue,
    pub description: String,
}

#[derive(Clone, Debug)]
pub struct TauReport {
    pub window: Window,
    pub colim_lim: BiValue,
    pub lim_colim: BiValue,
    /// `τ` on generators, when both sides are finitely generated.
    pub tau: Option<GroupHom>,
    pub injective: Certified,
    pub surjective: Certified,
    pub kernel: Option<FgAbGroup>,
    pub cokernel: Option<FgAbGroup>,
    /// Nonzero element of `colim lim` (in its generators) killed by `τ`.
    pub kernel_witness: Option<IntVector>,
    /// Element of `lim colim` (in its generators) outside the image.
    pub cokernel_witness: Option<IntVector>,
    pub thread: Option<PeriodicThread>,
    /// `colim_α lim¹_β` of the next-degree grid.
    pub p1: Option<Slot>,
    /// `lim¹_β colim_α` of the next-degree grid.
    pub q1: Option<Slot>,
    /// `0 → p¹ → q¹ → colim lim → lim colim → 0`, checked when every term is finitely generated.
    pub sequence: Option<Vec<JunctionReport>>,
}

impl TauReport {
    pub fn is_isomorphism(&self) -> bool {
        self.injective.verdict == Verdict::CertifiedTrue && self.surjective.verdict == Verdict::CertifiedTrue
    }

    pub fn sequence_exact(&self) -> Option<bool> {
        self.sequence.as_ref().map(|s| s.iter().all(|j| j.exact))
    }

    pub fn to_json(&self) -> Value {
        let vec = |v: &Option<IntVector>| v.as_ref().map(|x| x.iter().map(|e| e.to_string()).collect::<Vec<_>>());
        json!({
            "window": self.window.to_string(),
            "colim_lim": self.colim_lim.to_json(),
            "lim_colim": self.lim_colim.to_json(),
            "tau_matrix": self.tau.as_ref().map(|t| t.matrix().to_string()),
            "tau_injective": self.injective,
            "tau_surjective": self.surjective,
            "kernel": self.kernel.as_ref().map(|k| k.to_string()),
            "cokernel": self.cokernel.as_ref().map(|k| k.to_string()),
            "kernel_witness": vec(&self.kernel_witness),
            "cokernel_witness": vec(&self.cokernel_witness),
            "thread": self.thread,
            "p1": self.p1,
            "q1": self.q1,
            "sequence_exact": self.sequence_exact(),
        })
    }
}

struct HomVerdicts {
    injective: Certified,
    surjective: Certified,
    kernel: FgAbGroup,
    cokernel: FgAbGroup,
    kernel_witness: Option<IntVector>,
    cokernel_witness: Option<IntVector>,
}

fn from_hom(t: &GroupHom, why: &str) -> HomVerdicts {
    let (k, incl) = kernel(t);
    let kernel_witness = incl.matrix().columns().into_iter().find(|c| !t.source().is_zero(c));
    let (c, _) = cokernel(t);
    let cokernel_witness = (0..t.target().generators()).map(|j| t.target().generator(j)).find(|e| !c.is_zero(e));
    let injective = match &kernel_witness {
        None => Certified::new(Verdict::CertifiedTrue, format!("{why}; the kernel of τ is trivial")),
        Some(x) => Certified::new(Verdict::CertifiedFalse, format!("{why}; τ kills {}", fmt_vec(x))),
    };
    let surjective = match &cokernel_witness {
        None => Certified::new(Verdict::CertifiedTrue, format!("{why}; the cokernel of τ is trivial")),
        Some(y) => Certified::new(Verdict::CertifiedFalse, format!("{why}; {} is not in the image of τ", fmt_vec(y))),
    };
    HomVerdicts { injective, surjective, kernel: simplify(&k).group, cokernel: simplify(&c).group, kernel_witness, cokernel_witness }
}

fn fmt_vec(x: &[num_bigint::BigInt]) -> String {
    let parts: Vec<String> = x.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn hom_report(w: Window, t: GroupHom, why: &str) -> TauReport {
    let h = from_hom(&t, why);
    TauReport {
        window: w,
        colim_lim: BiValue::Group { group: t.source().clone(), stable: true },
        lim_colim: BiValue::Group { group: t.target().clone(), stable: true },
        tau: Some(t),
        injective: h.injective,
        surjective: h.surjective,
        kernel: Some(h.kernel),
        cokernel: Some(h.cokernel),
        kernel_witness: h.kernel_witness,
        cokernel_witness: h.cokernel_witness,
        thread: None,
        p1: None,
        q1: None,
        sequence: None,
    }
}

/// Computes `colim lim`, `lim colim` and the verdicts on `τ`.
pub fn tau(s: &BiSystem, w: Window) -> Result<TauReport> {
    match s {
        BiSystem::Explicit(g) => {
            let size = g.size();
            let corner = g.group(size.alpha - 1, size.beta - 1).clone();
            Ok(hom_report(w, GroupHom::identity(&corner), "identity tails: both sides are the corner group"))
        }
        BiSystem::Toeplitz(t) => {
            let mut m = GroupHom::identity(t.diagonal(t.high()));
            for d in (t.low() + 1..=t.high()).rev() {
                m = m.then(&t.amap(d))?;
            }
            Ok(hom_report(w, m, "diagonal grid: τ is the composite of α-maps from the top diagonal to the bottom one"))
        }
        BiSystem::BiPeriodic { group, u, v } => tau_periodic(group, u, v, w),
    }
}

/// As [`tau`], filling the `lim¹` slots from the grid one degree up and
/// checking exactness when every term is finitely generated.
pub fn tau_with_upper(lower: &BiSystem, upper: &BiSystem, w: Window) -> Result<TauReport> {
    let mut r = tau(lower, w)?;
    let (p1, q1) = slots(upper, w)?;
    if p1.value == SlotValue::Vanishes && q1.value == SlotValue::Vanishes {
        if let Some(t) = &r.tau {
            let zero_in = GroupHom::zero(&FgAbGroup::trivial(), t.source());
            let zero_out = GroupHom::zero(t.target(), &FgAbGroup::trivial());
            r.sequence = Some(check_exact(&[zero_in, t.clone(), zero_out])?);
        }
    }
    r.p1 = Some(p1);
    r.q1 = Some(q1);
    Ok(r)
}

fn slots(s: &BiSystem, w: Window) -> Result<(Slot, Slot)> {
    let constant = |what: &str| Slot { value: SlotValue::Vanishes, description: format!("{what} are eventually constant") };
    match s {
        BiSystem::Explicit(_) | BiSystem::Toeplitz(_) => Ok((constant("column towers"), constant("row colimits"))),
        BiSystem::BiPeriodic { group, u, v } => {
            let c = lim1_class(&Tower::self_map(v)?);
            let p1 = if c.vanishes() {
                Slot { value: SlotValue::Vanishes, description: c.summary() }
            } else if is_isomorphism(u) {
                Slot { value: SlotValue::NonVanishing, description: format!("{}; u acts invertibly", c.summary()) }
            } else {
                Slot { value: SlotValue::Undetermined, description: format!("{}; u is not invertible", c.summary()) }
            };
            let ec = endo_colim(u);
            let q1 = if ec.invertible {
                let vbar = GroupHom::new(ec.quotient.clone(), ec.quotient.clone(), v.matrix().clone())?;
                let c = lim1_class(&Tower::self_map(&vbar)?);
                let value = if c.vanishes() { SlotValue::Vanishes } else { SlotValue::NonVanishing };
                Slot { value, description: format!("row colimit is {}; {}", simplify(&ec.quotient).group, c.summary()) }
            } else if is_isomorphism(v) {
                Slot { value: SlotValue::Vanishes, description: "v is invertible on every row colimit".into() }
            } else if let Some(k) = (0..w.alpha.max(1)).find(|&k| acts_as_power(group, u, v, k, &ec.kernel)) {
                Slot { value: SlotValue::Vanishes, description: format!("v agrees with u^{k} modulo the eventual kernel, so it is invertible on the row colimit") }
            } else {
                Slot { value: SlotValue::Undetermined, description: "row colimit is not finitely generated and v is not invertible on it".into() }
            };
            Ok((p1, q1))
        }
    }
}

fn acts_as_power(g: &FgAbGroup, u: &GroupHom, v: &GroupHom, k: usize, ker: &Subgroup) -> bool {
    let diff = v.sub(&power(u, k)).expect("endomorphisms of one group");
    preimage(&diff, ker).same_as(&Subgroup::whole(g))
}

fn tau_periodic(g: &FgAbGroup, u: &GroupHom, v: &GroupHom, w: Window) -> Result<TauReport> {
    let column = lim(&Tower::self_map(v)?);
    let ec = endo_colim(u);
    let injective = Certified::new(
        Verdict::CertifiedTrue,
        format!(
            "ker u^k stabilizes at k = {}; a column thread killed by τ lies in ker u^{} at every level, so it is zero in the colimit",
            ec.power, ec.power
        ),
    );
    let lim_group = match &column {
        LimResult::Group(lg) => Some(lg),
        LimResult::ProNormalForm { .. } => None,
    };

    if ec.invertible {
        let vbar = GroupHom::new(ec.quotient.clone(), ec.quotient.clone(), v.matrix().clone())?;
        if let (Some(lg), LimResult::Group(lg2)) = (lim_group, lim(&Tower::self_map(&vbar)?)) {
            let into_quotient = lg.inclusion.then(&ec.projection)?;
            let (_, cl_incl) = subgroup_group(&ec.quotient, into_quotient.matrix());
            if let Some(t) = lift(&lg2.inclusion, &cl_incl)? {
                let mut r = hom_report(w, t, "u is invertible modulo its eventual kernel, so every row colimit is G/K∞");
                r.injective = Certified::new(r.injective.verdict, format!("{}; {}", injective.certificate, r.injective.certificate));
                return Ok(r);
            }
        }
    }

    let colim_lim = match lim_group {
        Some(lg) => {
            let restricted = lift(&lg.inclusion, &lg.inclusion.then(u)?)?.expect("u preserves the column limit");
            let cl = endo_colim(&restricted);
            if cl.invertible {
                BiValue::Group { group: simplify(&cl.quotient).group, stable: true }
            } else {
                BiValue::Symbolic {
                    description: format!("ascending union of {} under u", simplify(&cl.quotient).group),
                    nonzero: Some(!cl.quotient.is_trivial()),
                }
            }
        }
        None => BiValue::Symbolic { description: "column limit has no finitely generated normal form".into(), nonzero: None },
    };

    let image = lim_group.map(|lg| Subgroup::image_of(&lg.inclusion));
    let mut thread = None;
    if let Some(image) = &image {
        let closure = saturate_under(u, image.sum(&ec.kernel)?);
        for step in 0..w.alpha {
            let diff = v.sub(&power(u, step))?;
            let fixed = preimage(&diff, &ec.kernel);
            if let Some(x) = closure.missing_from(&fixed) {
                thread = Some(PeriodicThread { element: x, step, kernel_power: ec.power });
                break;
            }
        }
    }

    let v_auto = is_isomorphism(v);
    let lim_colim = if v_auto {
        match &colim_lim {
            BiValue::Group { group, .. } => BiValue::Group { group: group.clone(), stable: true },
            _ => BiValue::Symbolic { description: "colimit of (G, u); v acts invertibly".into(), nonzero: colim_lim.is_zero().map(|z| !z) },
        }
    } else {
        let nonzero = if thread.is_some() { Some(true) } else { None };
        BiValue::Symbolic { description: "limit under v of the localization (G/K∞)[u^-1]".into(), nonzero }
    };

    let surjective = if v_auto {
        Certified::new(Verdict::CertifiedTrue, "v is an automorphism: both sides are the colimit of (G, u) and τ is the identity")
    } else if let Some(t) = &thread {
        Certified::new(
            Verdict::CertifiedFalse,
            format!(
                "x = {} placed at α = {}·β is a thread of row colimits ((v − u^{}) x ∈ ker u^{}), and no u-preimage of x lies in lim + ker u^{}",
                fmt_vec(&t.element),
                t.step,
                t.step,
                t.kernel_power,
                t.kernel_power
            ),
        )
    } else {
        Certified::new(Verdict::Undetermined, format!("no periodic thread with step below {} and no finite normal form", w.alpha))
    };
    let _ = g;
    Ok(TauReport {
        window: w,
        colim_lim,
        lim_colim,
        tau: None,
        injective,
        surjective,
        kernel: Some(FgAbGroup::trivial()),
        cokernel: None,
        kernel_witness: None,
        cokernel_witness: thread.as_ref().map(|t| t.element.clone()),
        thread,
        p1: None,
        q1: None,
        sequence: None,
    })
}
