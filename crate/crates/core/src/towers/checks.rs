use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{lim, lim1_class, Lim1Value, LimResult, Periodic, Tower};
use crate::error::{Error, Result};
use crate::fgab::{cokernel, direct_sum_all, is_injective, kernel, lift, pullback, FgAbGroup, GroupHom, Subgroup};
use crate::linalg::{IntMatrix, IntVector};

#[derive(Clone, Debug, Serialize)]
pub struct RoosReport {
    pub depth: usize,
    pub kernel: String,
    pub cokernel: String,
    /// Limit of the truncation, computed by iterated pullbacks.
    pub truncated_lim: String,
    pub kernel_matches_lim: bool,
    pub cokernel_vanishes: bool,
}

/// Builds `⊕_{i<d} G_i → ⊕_{i<d-1} G_i`, `(g_i) ↦ (g_i − f_i g_{i+1})`, and
/// compares its kernel with the limit of the truncated tower.
pub fn roos_shift_check(t: &Tower, depth: usize) -> Result<RoosReport> {
    if depth < 2 {
        return Err(Error::Invalid("the shift map needs depth at least 2".into()));
    }
    let p = t.periodic_form();
    let terms: Vec<FgAbGroup> = (0..depth).map(|i| p.term(i).clone()).collect();
    let (src, offs) = direct_sum_all(&terms);
    let (tgt, _) = direct_sum_all(&terms[..depth - 1]);
    let mut m = IntMatrix::zeros(tgt.generators(), src.generators());
    for i in 0..depth - 1 {
        let (oi, oj) = (offs[i], offs[i + 1]);
        for r in 0..terms[i].generators() {
            m[(oi + r, oi + r)] = BigInt::from(1);
        }
        let f = p.map(i).matrix();
        for r in 0..f.rows() {
            for c in 0..f.cols() {
                m[(oi + r, oj + c)] = -&f[(r, c)];
            }
        }
    }
    let shift = GroupHom::new(src, tgt, m)?;
    let (ker, _) = kernel(&shift);
    let (coker, _) = cokernel(&shift);
    let truncated = iterated_pullback(&p, depth)?;
    Ok(RoosReport {
        depth,
        kernel_matches_lim: ker.is_isomorphic(&truncated),
        cokernel_vanishes: coker.is_trivial(),
        kernel: ker.to_string(),
        cokernel: coker.to_string(),
        truncated_lim: truncated.to_string(),
    })
}

/// `lim(G_0 ← ... ← G_{d-1})` as a chain of pullbacks.
fn iterated_pullback(p: &Periodic, depth: usize) -> Result<FgAbGroup> {
    let mut q = GroupHom::identity(p.term(0));
    for j in 0..depth - 1 {
        let pb = pullback(&q, p.map(j))?;
        q = pb.to_right;
    }
    Ok(q.source().clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    /// Generator counts of the sampled subgroups `H_0, ..., H_anchor`.
    pub generators: Vec<usize>,
    pub lim: Option<String>,
    /// Whether `lim H → lim G` is injective with image inside `lim G` at the anchor.
    pub lim_embeds: bool,
    pub threads_verified: bool,
    pub lim1: Lim1Value,
    pub terminal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimFgReport {
    pub lim: Option<String>,
    pub lim1: Lim1Value,
    pub samples: Vec<SampleReport>,
    /// The terminal subtower (all generators) has limit image equal to `lim G`.
    pub colim_matches: bool,
    /// `lim^1` of the terminal subtower agrees with `lim^1 G`, so no element of
    /// the colimit dies.
    pub lim1_consistent: bool,
    pub pass: bool,
}

/// Samples finitely generated subtowers and compares their limits with `lim T`.
pub fn lim_fg_check(t: &Tower, samples: usize, depth: usize, seed: u64) -> Result<LimFgReport> {
    if !t.is_finitely_generated() {
        return Err(Error::Unsupported("sampling subtowers needs finitely generated terms".into()));
    }
    let p = t.periodic_form();
    let k = p.anchor();
    let whole = lim(t);
    let whole_image = match &whole {
        LimResult::Group(g) => Some(Subgroup::image_of(&g.inclusion)),
        LimResult::ProNormalForm { .. } => None,
    };
    let lim1 = lim1_class(t).value;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    let mut colim_matches = false;
    let mut lim1_consistent = false;
    for s in 0..=samples {
        let terminal = s == samples;
        let levels: Vec<Subgroup> = if terminal {
            (0..=k).map(|i| Subgroup::whole(p.term(i))).collect()
        } else {
            sample_levels(&p, &mut rng)
        };
        let sub = subtower(&p, &levels)?;
        let (sub_tower, incl_k) = sub;
        let sub_lim = lim(&sub_tower);
        let sub_lim1 = lim1_class(&sub_tower).value;
        let (lim_str, embeds, threads, image) = match &sub_lim {
            LimResult::Group(g) => {
                let into_g = g.inclusion.then(&incl_k)?;
                let image = Subgroup::image_of(&into_g);
                let inside = whole_image.as_ref().is_some_and(|w| w.contains_subgroup(&image));
                (Some(g.group.to_string()), is_injective(&into_g) && inside, g.verify_threads(depth), Some(image))
            }
            LimResult::ProNormalForm { .. } => (None, false, true, None),
        };
        if terminal {
            colim_matches = match (&whole_image, &image) {
                (Some(w), Some(i)) => w.same_as(i),
                (None, None) => true,
                _ => false,
            };
            lim1_consistent = sub_lim1 == lim1;
        }
        reports.push(SampleReport {
            generators: levels.iter().map(|h| h.generators().cols()).collect(),
            lim: lim_str,
            lim_embeds: embeds || (whole_image.is_none() && image.is_none()),
            threads_verified: threads,
            lim1: sub_lim1,
            terminal,
        });
    }
    let pass = colim_matches && lim1_consistent && reports.iter().all(|r| r.lim_embeds && r.threads_verified);
    Ok(LimFgReport { lim: whole.group().map(|g| g.to_string()), lim1, samples: reports, colim_matches, lim1_consistent, pass })
}

fn random_element(g: &FgAbGroup, rng: &mut ChaCha8Rng) -> IntVector {
    (0..g.generators()).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect()
}

/// Up to two random elements per level, closed under the bonding maps; the
/// periodic level is closed under `φ`.
fn sample_levels(p: &Periodic, rng: &mut ChaCha8Rng) -> Vec<Subgroup> {
    let k = p.anchor();
    let g = &p.period;
    let count = rng.gen_range(1..=2);
    let seeds: Vec<IntVector> = (0..count).map(|_| random_element(g, rng)).collect();
    let mut h = Subgroup::from_vectors(g.clone(), &seeds).expect("shape");
    for _ in 0..64 {
        let next = h.sum(&h.map(&p.phi).expect("endomorphism")).expect("same ambient");
        if next.same_as(&h) {
            break;
        }
        h = next.reduced();
    }
    let mut levels = vec![h];
    for i in (0..k).rev() {
        let pushed = levels.last().expect("nonempty").map(p.map(i)).expect("composable");
        let count = rng.gen_range(0..=2);
        let own: Vec<IntVector> = (0..count).map(|_| random_element(p.term(i), rng)).collect();
        let own = Subgroup::from_vectors(p.term(i).clone(), &own).expect("shape");
        levels.push(pushed.sum(&own).expect("same ambient").reduced());
    }
    levels.reverse();
    levels
}

/// The subtower on `levels` (indices `0..=anchor`) as a tower, with the
/// inclusion of its periodic group.
fn subtower(p: &Periodic, levels: &[Subgroup]) -> Result<(Tower, GroupHom)> {
    let k = p.anchor();
    let parts: Vec<(FgAbGroup, GroupHom)> = levels.iter().map(|h| h.as_group()).collect();
    let mut maps = Vec::with_capacity(k);
    for i in 0..k {
        let down = parts[i + 1].1.then(p.map(i))?;
        let m = lift(&parts[i].1, &down)?.ok_or_else(|| Error::Invalid("subtower is not closed under the bonding map".into()))?;
        maps.push(m);
    }
    let (hk, incl_k) = parts[k].clone();
    let phi = lift(&incl_k, &incl_k.then(&p.phi)?)?.ok_or_else(|| Error::Invalid("periodic level is not invariant".into()))?;
    let prefix = parts[..k].iter().map(|(g, _)| g.clone()).collect();
    Ok((Tower::periodic(prefix, maps, hk, phi)?, incl_k))
}
