use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::analysis::{chain_bound, decide, iterate_images, nilpotent_mod_some_prime};
use super::{FreeNested, MlAnalysis, MlDecision, Periodic, Tower};
use crate::error::{Error, Result};
use crate::fgab::{lift, simplify, FgAbGroup, GroupHom, Subgroup};
use crate::linalg::{kernel_basis, snf, solve_with, IntMatrix, IntVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lim1Value {
    Vanishes,
    NonVanishing,
}

#[derive(Clone, Debug)]
pub enum Lim1Certificate {
    /// Image chains are constant from `stabilization_index` on; `stable_subgroup`
    /// is the stable image in the periodic group `G_anchor`.
    MittagLeffler { anchor: usize, stabilization_index: usize, stable_subgroup: Subgroup },
    /// The induced map on the saturated stable rational image has `|det| > 1`,
    /// so `Im φ^n` has index at least `|det|^(n - k)` there and never stabilizes.
    NonMittagLeffler {
        anchor: usize,
        determinant: BigInt,
        stable_lattice: IntMatrix,
        induced: IntMatrix,
        description: String,
    },
    /// Nested free towers: `Im(F_{i+n} → F_i) = F_{i+n}` descends strictly at every width.
    StrictDescent { description: String },
    Purification(Box<PurifiedWitness>),
}

#[derive(Clone, Debug)]
pub struct Lim1Class {
    pub value: Lim1Value,
    pub certificate: Lim1Certificate,
}

impl Lim1Class {
    pub fn vanishes(&self) -> bool {
        self.value == Lim1Value::Vanishes
    }

    /// One-line description of the certificate.
    pub fn summary(&self) -> String {
        match &self.certificate {
            Lim1Certificate::MittagLeffler { stabilization_index, stable_subgroup, .. } => {
                let (g, _) = stable_subgroup.as_group();
                format!("Mittag-Leffler: images stabilize from index {stabilization_index} at {g}")
            }
            Lim1Certificate::NonMittagLeffler { determinant, description, .. } => {
                format!("not Mittag-Leffler: det {determinant} on the stable image; {description}")
            }
            Lim1Certificate::StrictDescent { description } => description.clone(),
            Lim1Certificate::Purification(w) => format!(
                "purified subtower with ranks {:?} has pure inclusions and is Mittag-Leffler",
                w.purified_ranks
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lim1FgMethod {
    ComputedAsLim1,
    ViaPurification,
}

#[derive(Clone, Debug)]
pub struct Lim1FgResult {
    pub class: Lim1Class,
    pub method: Lim1FgMethod,
}

/// A generic finitely generated subtower `H_i = A ∩ F_i` of a nested free
/// tower, together with its purification.
#[derive(Clone, Debug)]
pub struct PurifiedWitness {
    /// Generators of `A`, in coordinates of `F_0` at the truncation width.
    pub generators: IntMatrix,
    pub subtower_ranks: Vec<usize>,
    pub purified_ranks: Vec<usize>,
    pub purified: Tower,
    pub pure_inclusions: bool,
    pub contains_subtower: bool,
    pub ml: Lim1Certificate,
}

/// The limit as a group, with explicit threads.
#[derive(Clone, Debug)]
pub struct LimGroup {
    pub group: FgAbGroup,
    /// Level at which the limit embeds.
    pub anchor: usize,
    /// `lim → G_anchor`, injective.
    pub inclusion: GroupHom,
    pub certificate: String,
    psi_inv: GroupHom,
    tower: Periodic,
}

impl LimGroup {
    /// Coordinates `x_0, ..., x_{depth-1}` of the thread through generator `gen`.
    pub fn thread(&self, gen: usize, depth: usize) -> Vec<IntVector> {
        let e = self.group.generator(gen);
        self.thread_of(&e, depth)
    }

    pub fn thread_of(&self, e: &[BigInt], depth: usize) -> Vec<IntVector> {
        let k = self.anchor;
        let mut out = Vec::with_capacity(depth);
        let base = self.inclusion.apply(e);
        for j in 0..depth.min(k) {
            out.push(self.tower.composite(k, j).apply(&base));
        }
        let mut cur = e.to_vec();
        for _ in depth.min(k)..depth {
            out.push(self.inclusion.apply(&cur));
            cur = self.psi_inv.apply(&cur);
        }
        out
    }

    /// Checks that every generator thread is compatible with the bonding maps up to `depth`.
    pub fn verify_threads(&self, depth: usize) -> bool {
        (0..self.group.generators()).all(|g| {
            let th = self.thread(g, depth);
            (0..depth.saturating_sub(1)).all(|j| self.tower.term(j).elements_equal(&self.tower.map(j).apply(&th[j + 1]), &th[j]))
        })
    }
}

#[derive(Clone, Debug)]
pub enum LimResult {
    Group(LimGroup),
    /// The limit is not certified to be finitely generated; carries the tail analysis.
    ProNormalForm { analysis: MlAnalysis, reason: String },
}

impl LimResult {
    pub fn group(&self) -> Option<&FgAbGroup> {
        match self {
            LimResult::Group(g) => Some(&g.group),
            LimResult::ProNormalForm { .. } => None,
        }
    }
}

pub fn is_mittag_leffler(t: &Tower) -> (bool, Lim1Certificate) {
    if t.free_nested_data().is_some() {
        return (false, strict_descent());
    }
    let p = t.periodic_form();
    let d = decide(&p);
    (d.holds(), certificate_of(&d))
}

fn strict_descent() -> Lim1Certificate {
    Lim1Certificate::StrictDescent {
        description: "Im(F_{i+n} -> F_i) = F_{i+n} is a proper subgroup of F_{i+n-1} for every n; lim^1 is Prod Z / Sum Z".into(),
    }
}

fn certificate_of(d: &MlDecision) -> Lim1Certificate {
    match d {
        MlDecision::Holds { analysis, power, stable } => Lim1Certificate::MittagLeffler {
            anchor: analysis.anchor,
            stabilization_index: analysis.anchor + power,
            stable_subgroup: stable.clone(),
        },
        MlDecision::Fails { analysis } => {
            let det = analysis.determinant.abs();
            let description = if analysis.induced.rows() == 1 {
                format!("stable part is (Z, x{det}); lim^1 is the {det}-adic integers modulo Z")
            } else {
                format!("index of Im phi^n in the stable lattice grows like {det}^n")
            };
            Lim1Certificate::NonMittagLeffler {
                anchor: analysis.anchor,
                determinant: analysis.determinant.clone(),
                stable_lattice: analysis.stable_lattice.clone(),
                induced: analysis.induced.clone(),
                description,
            }
        }
    }
}

/// `lim^1` vanishes exactly when the tower is Mittag-Leffler (towers of countable groups).
pub fn lim1_class(t: &Tower) -> Lim1Class {
    let (ml, certificate) = is_mittag_leffler(t);
    Lim1Class { value: if ml { Lim1Value::Vanishes } else { Lim1Value::NonVanishing }, certificate }
}

pub fn lim(t: &Tower) -> LimResult {
    let p = t.periodic_form();
    if let Some(f) = t.free_nested_data() {
        return LimResult::Group(build_lim(
            &p,
            Subgroup::zero(&p.period),
            format!("basis index j lies in no term with k_i > j (offsets {}), so every thread is zero", f.offsets),
        ));
    }
    match decide(&p) {
        MlDecision::Holds { stable, power, .. } => {
            LimResult::Group(build_lim(&p, stable, format!("Mittag-Leffler; phi is an automorphism of Im phi^{power}")))
        }
        MlDecision::Fails { analysis } => {
            if nilpotent_mod_some_prime(&analysis.induced) {
                let torsion = Subgroup::new(p.period.clone(), p.period.torsion_generators()).expect("shape");
                let (_, stable) = iterate_images(&p.phi, torsion, chain_bound(&p.period) + 1)
                    .expect("descending chain in a finite group stabilizes");
                LimResult::Group(build_lim(
                    &p,
                    stable,
                    "the stable part is nilpotent mod a prime, so torsion-free threads vanish; lim is the stable torsion image".into(),
                ))
            } else {
                LimResult::ProNormalForm {
                    reason: format!(
                        "phi has |det| = {} on the stable rational image without being nilpotent mod any prime; the limit is not certified finitely generated",
                        analysis.determinant.abs()
                    ),
                    analysis,
                }
            }
        }
    }
}

/// Limit realized by a subgroup `s` of the period group on which `φ` is an automorphism.
fn build_lim(p: &Periodic, s: Subgroup, certificate: String) -> LimGroup {
    let (sg, incl) = s.as_group();
    let simp = simplify(&sg);
    let inclusion = simp.from_canonical.then(&incl).expect("composable");
    let group = simp.group;
    let image = inclusion.then(&p.phi).expect("composable");
    let psi = lift(&inclusion, &image).expect("injective").expect("phi preserves the stable subgroup");
    let psi_inv = lift(&psi, &GroupHom::identity(&group))
        .expect("injective")
        .expect("phi is onto the stable subgroup");
    LimGroup { group, anchor: p.anchor(), inclusion, certificate, psi_inv, tower: p.clone() }
}

const GENERIC_SEED: u64 = 0x5eed;

/// `lim^1_fg`: for finitely generated towers it is `lim^1` itself; for nested
/// free towers it is certified zero by purifying a generic subtower.
pub fn lim1_fg(t: &Tower) -> Result<Lim1FgResult> {
    lim1_fg_with_seed(t, GENERIC_SEED)
}

pub fn lim1_fg_with_seed(t: &Tower, seed: u64) -> Result<Lim1FgResult> {
    match t.free_nested_data() {
        None => Ok(Lim1FgResult { class: lim1_class(t), method: Lim1FgMethod::ComputedAsLim1 }),
        Some(f) => {
            let w = purify_generic(f, seed)?;
            if !(w.pure_inclusions && w.contains_subtower && matches!(w.ml, Lim1Certificate::MittagLeffler { .. })) {
                return Err(Error::Invalid("purified subtower failed its own checks".into()));
            }
            Ok(Lim1FgResult {
                class: Lim1Class { value: Lim1Value::Vanishes, certificate: Lim1Certificate::Purification(Box::new(w)) },
                method: Lim1FgMethod::ViaPurification,
            })
        }
    }
}

/// Columns of `b` expressed in the basis `basis` (which must contain them).
fn coords(basis: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let s = snf(basis);
    let cols: Option<Vec<IntVector>> = b.columns().iter().map(|c| solve_with(&s, c)).collect();
    Some(IntMatrix::from_columns(basis.cols(), &cols?))
}

fn purify_generic(f: &FreeNested, seed: u64) -> Result<PurifiedWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels = f.nonzero_levels();
    let m = levels.min(3);
    let k0 = f.offsets.at(0);
    // a_j is supported on basis indices >= k_j, with a nonzero leading entry.
    let cols: Vec<IntVector> = (0..m)
        .map(|j| {
            let start = f.offsets.at(j) - k0;
            (0..f.rank(0))
                .map(|pos| match pos.cmp(&start) {
                    std::cmp::Ordering::Less => BigInt::from(0),
                    std::cmp::Ordering::Equal => BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=4)),
                    std::cmp::Ordering::Greater => BigInt::from(rng.gen_range(-4..=4)),
                })
                .collect()
        })
        .collect();
    let a = IntMatrix::from_columns(f.rank(0), &cols);
    let mut subtower = Vec::new();
    let mut purified = Vec::new();
    let mut contains = true;
    for i in 0..=levels {
        let cut = (f.offsets.at(i) - k0).min(f.rank(0));
        let top: Vec<usize> = (0..cut).collect();
        let rest: Vec<usize> = (cut..f.rank(0)).collect();
        let k = kernel_basis(&a.select_rows(&top));
        let h = (&a * &k).select_rows(&rest);
        let amb = FgAbGroup::free(f.rank(i));
        let hs = Subgroup::new(amb, h)?;
        let hb = hs.purify()?;
        contains &= hb.contains_subgroup(&hs);
        subtower.push(hs);
        purified.push(hb);
    }
    let groups: Vec<FgAbGroup> = purified.iter().map(|h| FgAbGroup::free(h.generators().cols())).collect();
    let mut maps = Vec::new();
    let mut pure = true;
    for i in 0..levels {
        let shift = f.offsets.at(i + 1) - f.offsets.at(i);
        let upper = purified[i + 1].generators();
        let mut embedded = IntMatrix::zeros(f.rank(i), upper.cols());
        for r in 0..upper.rows() {
            for c in 0..upper.cols() {
                embedded[(r + shift, c)] = upper[(r, c)].clone();
            }
        }
        let m = coords(purified[i].generators(), &embedded)
            .ok_or_else(|| Error::Invalid("purified terms are not nested".into()))?;
        pure &= Subgroup::new(groups[i].clone(), m.clone())?.is_pure();
        maps.push(GroupHom::new(groups[i + 1].clone(), groups[i].clone(), m)?);
    }
    let tower = Tower::explicit(groups, maps)?;
    let (_, ml) = is_mittag_leffler(&tower);
    Ok(PurifiedWitness {
        generators: a,
        subtower_ranks: subtower.iter().map(|h| h.lattice().cols()).collect(),
        purified_ranks: purified.iter().map(|h| h.generators().cols()).collect(),
        purified: tower,
        pure_inclusions: pure,
        contains_subtower: contains,
        ml,
    })
}
