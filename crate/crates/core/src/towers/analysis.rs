use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Periodic, Tower};
use crate::fgab::{FgAbGroup, GroupHom, Subgroup};
use crate::linalg::{rank, saturate, snf, solve_with, IntMatrix};

/// `Im(G_{i+k} → G_i)` for `k = 0 .. depth`.
pub fn image_tower(t: &Tower, i: usize, depth: usize) -> Vec<Subgroup> {
    let p = t.periodic_form();
    let mut out = Vec::with_capacity(depth);
    let mut f = GroupHom::identity(p.term(i));
    for k in 0..depth {
        if k > 0 {
            f = p.map(i + k - 1).clone().then(&f).expect("tower maps compose");
        }
        out.push(Subgroup::image_of(&f));
    }
    out
}

/// Structure of the periodic tail `(G, φ)` relevant to the ML condition.
#[derive(Clone, Debug)]
pub struct MlAnalysis {
    /// Level from which the tower is periodic.
    pub anchor: usize,
    /// Rank of the torsion-free quotient of `G`.
    pub free_rank: usize,
    /// First power at which the rank of the induced map on `G/T` stabilizes.
    pub rank_stable_from: usize,
    /// Saturated stable rational image `W` in free-quotient coordinates.
    pub stable_lattice: IntMatrix,
    /// Matrix `C` of the induced map on `W` (`A·W = W·C`).
    pub induced: IntMatrix,
    pub determinant: BigInt,
    /// Upper bound on the stabilization power when ML holds.
    pub bound: usize,
}

#[derive(Clone, Debug)]
pub enum MlDecision {
    /// `Im φ^n` is constant from `power` on; `stable` is that image in `G`.
    Holds { analysis: MlAnalysis, power: usize, stable: Subgroup },
    /// `|det C| > 1`: the index of `Im φ^n` in the saturated stable image grows without bound.
    Fails { analysis: MlAnalysis },
}

impl MlDecision {
    pub fn holds(&self) -> bool {
        matches!(self, MlDecision::Holds { .. })
    }

    pub fn analysis(&self) -> &MlAnalysis {
        match self {
            MlDecision::Holds { analysis, .. } | MlDecision::Fails { analysis } => analysis,
        }
    }
}

/// Number of bits of `|T|`, an upper bound for the length of any strictly
/// descending chain of subgroups of `T`.
pub(crate) fn chain_bound(g: &FgAbGroup) -> usize {
    let order: BigInt = g.torsion().iter().product();
    order.bits() as usize
}

pub(crate) fn analyse(p: &Periodic) -> MlAnalysis {
    let g = &p.period;
    let proj = g.free_quotient_projection();
    let sect = g.free_quotient_section();
    let r = g.free_rank();
    let a = &(&proj * p.phi.matrix()) * &sect;
    let mut power = IntMatrix::identity(r);
    let mut prev_rank = r;
    let mut k0 = 0;
    loop {
        let next = &a * &power;
        let nr = rank(&next);
        if nr == prev_rank {
            break;
        }
        power = next;
        prev_rank = nr;
        k0 += 1;
    }
    let w = saturate(&power);
    let aw = &a * &w;
    let s = snf(&w);
    let cols: Vec<_> = (0..aw.cols())
        .map(|j| solve_with(&s, &aw.column(j)).expect("stable image is invariant"))
        .collect();
    let c = IntMatrix::from_columns(w.cols(), &cols);
    let determinant = if c.rows() == 0 { BigInt::one() } else { c.determinant() };
    MlAnalysis {
        anchor: p.anchor(),
        free_rank: r,
        rank_stable_from: k0,
        bound: k0 + chain_bound(g) + 1,
        stable_lattice: w,
        induced: c,
        determinant,
    }
}

/// Iterates `S ↦ φ(S)` from `start` until it repeats, for at most `limit` steps.
pub(crate) fn iterate_images(phi: &GroupHom, start: Subgroup, limit: usize) -> Option<(usize, Subgroup)> {
    let mut cur = start;
    for n in 0..=limit {
        let next = cur.map(phi).expect("endomorphism");
        if next.same_as(&cur) {
            return Some((n, cur));
        }
        cur = next;
    }
    None
}

pub(crate) fn decide(p: &Periodic) -> MlDecision {
    let analysis = analyse(p);
    if !analysis.determinant.abs().is_one() {
        return MlDecision::Fails { analysis };
    }
    let (power, stable) = iterate_images(&p.phi, Subgroup::whole(&p.period), analysis.bound)
        .expect("image chain stabilizes within the bound when |det| = 1");
    MlDecision::Holds { analysis, power, stable }
}

/// Whether all entries of `c^s` share a prime factor (`c` nilpotent mod some `p`).
pub(crate) fn nilpotent_mod_some_prime(c: &IntMatrix) -> bool {
    if c.rows() == 0 {
        return false;
    }
    let cs = c.pow(c.rows() as u32);
    let g = cs.entries().iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    g != BigInt::one()
}
