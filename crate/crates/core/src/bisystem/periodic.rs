use serde::Serialize;

use crate::error::Result;
use crate::fgab::{cokernel, is_isomorphism, kernel, FgAbGroup, GroupHom, Subgroup};
use crate::linalg::IntVector;

/// Colimit data of `G --w--> G --w--> ...`.
#[derive(Clone, Debug)]
pub struct EndoColim {
    /// `K∞ = ker w^power`, the union of all `ker w^k`.
    pub kernel: Subgroup,
    pub power: usize,
    /// `G / K∞`, on the generators of `G`.
    pub quotient: FgAbGroup,
    pub projection: GroupHom,
    /// `w` on the quotient, injective.
    pub induced: GroupHom,
    /// When the induced map is onto, the colimit is the quotient itself;
    /// otherwise it is a strictly ascending union and not finitely generated.
    pub invertible: bool,
}

pub fn endo_colim(w: &GroupHom) -> EndoColim {
    let g = w.source();
    let mut cur = Subgroup::zero(g);
    let mut incl = GroupHom::zero(&FgAbGroup::free(0), g);
    let mut pw = GroupHom::identity(g);
    let mut power = 0;
    loop {
        pw = pw.then(w).expect("endomorphism");
        let (_, next_incl) = kernel(&pw);
        let next = Subgroup::image_of(&next_incl);
        if next.same_as(&cur) {
            break;
        }
        cur = next;
        incl = next_incl;
        power += 1;
    }
    let (quotient, projection) = cokernel(&incl);
    let induced = GroupHom::new(quotient.clone(), quotient.clone(), w.matrix().clone()).expect("w preserves its eventual kernel");
    let invertible = is_isomorphism(&induced);
    EndoColim { kernel: cur, power, quotient, projection, induced, invertible }
}

/// `f^{-1}(M)` as a subgroup of the source.
pub fn preimage(f: &GroupHom, m: &Subgroup) -> Subgroup {
    let gens = GroupHom::new(FgAbGroup::free(m.generators().cols()), m.ambient().clone(), m.generators().clone())
        .expect("maps out of free groups are well defined");
    let (_, q) = cokernel(&gens);
    let (_, incl) = kernel(&f.then(&q).expect("target is the ambient group"));
    Subgroup::image_of(&incl)
}

/// Smallest `M ⊇ start` with `u^{-1}(M) = M`, for `u`-stable `start`.
pub(crate) fn saturate_under(u: &GroupHom, start: Subgroup) -> Subgroup {
    let mut m = start;
    loop {
        let next = preimage(u, &m);
        if next.same_as(&m) {
            return m;
        }
        m = next;
    }
}

pub(crate) fn power(u: &GroupHom, k: usize) -> GroupHom {
    let mut p = GroupHom::identity(u.source());
    for _ in 0..k {
        p = p.then(u).expect("endomorphism");
    }
    p
}

/// `x_β = x` placed at `α = s·β`: a thread of row colimits when
/// `(v − u^s) x` lies in the eventual kernel of `u`.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodicThread {
    pub element: IntVector,
    pub step: usize,
    pub kernel_power: usize,
}

impl PeriodicThread {
    /// Rechecks the thread against `u`, `v` and the image of the limit
    /// (`image` is `ι(lim)` in `G`).
    pub fn verify(&self, u: &GroupHom, v: &GroupHom, image: &Subgroup) -> Result<bool> {
        let g = u.source();
        let ker = Subgroup::image_of(&kernel(&power(u, self.kernel_power)).1);
        let ec = endo_colim(u);
        if !ec.kernel.same_as(&ker) {
            return Ok(false);
        }
        let diff = v.sub(&power(u, self.step))?;
        let moved = diff.apply(&self.element);
        let closure = saturate_under(u, image.sum(&ker)?);
        Ok(ker.contains(&moved) && !closure.contains(&self.element) && self.element.len() == g.generators())
    }
}
