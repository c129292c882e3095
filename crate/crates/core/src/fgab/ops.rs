use num_bigint::BigInt;
use num_traits::One;

use super::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::linalg::{kernel_basis, lattice_basis, snf, solve_with, IntMatrix, IntVector};

/// Lattice `{x ∈ Z^n : m·x ∈ L}` for the relation lattice `L` of `target`,
/// as a Hermite basis in `Z^n`.
fn preimage_of_relations(m: &IntMatrix, target: &FgAbGroup) -> IntMatrix {
    let n = m.cols();
    let joint = m.hconcat(target.relations());
    let k = kernel_basis(&joint);
    let top: Vec<usize> = (0..n).collect();
    lattice_basis(&k.select_rows(&top))
}

/// Re-expresses each column of `vectors` in the basis `basis` (full column rank).
fn coordinates_in(basis: &IntMatrix, vectors: &IntMatrix) -> IntMatrix {
    let s = snf(basis);
    let cols: Vec<IntVector> = (0..vectors.cols())
        .map(|j| solve_with(&s, &vectors.column(j)).expect("vector lies in the lattice"))
        .collect();
    IntMatrix::from_columns(basis.cols(), &cols)
}

/// Kernel of `f` with its inclusion into the source.
pub fn kernel(f: &GroupHom) -> (FgAbGroup, GroupHom) {
    let basis = preimage_of_relations(f.matrix(), f.target());
    let rel = coordinates_in(&basis, f.source().relations());
    let k = FgAbGroup::new(basis.cols(), rel).expect("shape is consistent");
    let incl = GroupHom::from_parts_unchecked(k.clone(), f.source().clone(), basis);
    (k, incl)
}

/// Subgroup of `g` generated by the columns of `gens`, as a group with its inclusion.
pub fn subgroup_group(g: &FgAbGroup, gens: &IntMatrix) -> (FgAbGroup, GroupHom) {
    assert_eq!(gens.rows(), g.generators(), "generator vectors have the wrong length");
    let rel = preimage_of_relations(gens, g);
    let h = FgAbGroup::new(gens.cols(), rel).expect("shape is consistent");
    let incl = GroupHom::from_parts_unchecked(h.clone(), g.clone(), gens.clone());
    (h, incl)
}

pub fn image(f: &GroupHom) -> (FgAbGroup, GroupHom) {
    subgroup_group(f.target(), f.matrix())
}

/// Cokernel of `f` with the projection from the target.
pub fn cokernel(f: &GroupHom) -> (FgAbGroup, GroupHom) {
    let t = f.target();
    let q = FgAbGroup::new(t.generators(), t.relations().hconcat(f.matrix())).expect("shape is consistent");
    let proj = GroupHom::from_parts_unchecked(t.clone(), q.clone(), IntMatrix::identity(t.generators()));
    (q, proj)
}

pub fn is_injective(f: &GroupHom) -> bool {
    kernel(f).0.is_trivial()
}

pub fn is_surjective(f: &GroupHom) -> bool {
    cokernel(f).0.is_trivial()
}

pub fn is_isomorphism(f: &GroupHom) -> bool {
    is_injective(f) && is_surjective(f)
}

/// `A ⊕ B` with its two injections and two projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FgAbGroup,
    pub inject: [GroupHom; 2],
    pub project: [GroupHom; 2],
}

pub fn direct_sum(a: &FgAbGroup, b: &FgAbGroup) -> DirectSum {
    let (na, nb) = (a.generators(), b.generators());
    let s = FgAbGroup::new(na + nb, a.relations().block_diag(b.relations())).expect("shape is consistent");
    let ia = IntMatrix::identity(na).vconcat(&IntMatrix::zeros(nb, na));
    let ib = IntMatrix::zeros(na, nb).vconcat(&IntMatrix::identity(nb));
    let pa = IntMatrix::identity(na).hconcat(&IntMatrix::zeros(na, nb));
    let pb = IntMatrix::zeros(nb, na).hconcat(&IntMatrix::identity(nb));
    DirectSum {
        inject: [
            GroupHom::from_parts_unchecked(a.clone(), s.clone(), ia),
            GroupHom::from_parts_unchecked(b.clone(), s.clone(), ib),
        ],
        project: [
            GroupHom::from_parts_unchecked(s.clone(), a.clone(), pa),
            GroupHom::from_parts_unchecked(s.clone(), b.clone(), pb),
        ],
        group: s,
    }
}

/// Direct sum of many groups; returns the sum and the generator offset of each summand.
pub fn direct_sum_all(groups: &[FgAbGroup]) -> (FgAbGroup, Vec<usize>) {
    let mut rel = IntMatrix::zeros(0, 0);
    let mut offsets = Vec::with_capacity(groups.len());
    let mut n = 0;
    for g in groups {
        offsets.push(n);
        n += g.generators();
        rel = rel.block_diag(g.relations());
    }
    (FgAbGroup::new(n, rel).expect("shape is consistent"), offsets)
}

/// Factor `h : T → X` through `i : P → X`, i.e. find `k` with `i ∘ k = h`.
///
/// `Ok(None)` when some generator image of `h` is outside the image of `i`.
/// Fails when the resulting matrix is not a well-defined map into `P`, which
/// can only happen when `i` is not injective.
pub fn lift(i: &GroupHom, h: &GroupHom) -> Result<Option<GroupHom>> {
    if !i.target().same_presentation(h.target()) {
        return Err(Error::NotComposable(0));
    }
    let x = i.target();
    let p = i.source().generators();
    let s = snf(&i.matrix().hconcat(x.relations()));
    let mut cols = Vec::with_capacity(h.source().generators());
    for j in 0..h.source().generators() {
        match solve_with(&s, &h.matrix().column(j)) {
            Some(z) => cols.push(z[..p].to_vec()),
            None => return Ok(None),
        }
    }
    let m = IntMatrix::from_columns(p, &cols);
    GroupHom::new(h.source().clone(), i.source().clone(), m).map(Some)
}

/// Pullback `P = A ×_C B` of `f : A → C` and `g : B → C`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub group: FgAbGroup,
    pub to_left: GroupHom,
    pub to_right: GroupHom,
    /// `P → A ⊕ B`, injective.
    pub inclusion: GroupHom,
    left: GroupHom,
    right: GroupHom,
}

pub fn pullback(f: &GroupHom, g: &GroupHom) -> Result<Pullback> {
    if !f.target().same_presentation(g.target()) {
        return Err(Error::DimensionMismatch("pullback legs have different targets".into()));
    }
    let sum = direct_sum(f.source(), g.source());
    let diff = GroupHom::new(sum.group.clone(), f.target().clone(), f.matrix().hconcat(&g.matrix().scale(&BigInt::from(-1))))?;
    let (p, incl) = kernel(&diff);
    Ok(Pullback {
        to_left: incl.then(&sum.project[0])?,
        to_right: incl.then(&sum.project[1])?,
        group: p,
        inclusion: incl,
        left: f.clone(),
        right: g.clone(),
    })
}

impl Pullback {
    /// The unique map from a commuting cone `(h1 : T → A, h2 : T → B)`, or
    /// `None` if the cone does not commute.
    pub fn factor(&self, h1: &GroupHom, h2: &GroupHom) -> Result<Option<GroupHom>> {
        let c1 = h1.then(&self.left)?;
        let c2 = h2.then(&self.right)?;
        if !c1.equals(&c2) {
            return Ok(None);
        }
        let sum_target = self.inclusion.target().clone();
        let h = GroupHom::new(h1.source().clone(), sum_target, h1.matrix().vconcat(h2.matrix()))?;
        lift(&self.inclusion, &h)
    }
}

/// Pushout `A ⊔_C B` of `f : C → A` and `g : C → B`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub group: FgAbGroup,
    pub from_left: GroupHom,
    pub from_right: GroupHom,
}

pub fn pushout(f: &GroupHom, g: &GroupHom) -> Result<Pushout> {
    if !f.source().same_presentation(g.source()) {
        return Err(Error::DimensionMismatch("pushout legs have different sources".into()));
    }
    let sum = direct_sum(f.target(), g.target());
    let diff = GroupHom::new(f.source().clone(), sum.group.clone(), f.matrix().vconcat(&g.matrix().scale(&BigInt::from(-1))))?;
    let (q, proj) = cokernel(&diff);
    Ok(Pushout { from_left: sum.inject[0].then(&proj)?, from_right: sum.inject[1].then(&proj)?, group: q })
}

/// `ker(out) / im(inc)`, presented canonically, for composable `inc : A → B`, `out : B → C` with `out ∘ inc = 0`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub group: FgAbGroup,
    /// Inclusion of `ker(out)` into `B`.
    pub cycles: GroupHom,
    /// Projection `ker(out) → group`.
    pub projection: GroupHom,
    representatives: IntMatrix,
    solver: std::sync::Arc<crate::linalg::SnfDecomposition>,
}

impl Subquotient {
    /// Class of an element of `B` lying in `ker(out)`; `None` otherwise.
    pub fn class_of(&self, b: &[BigInt]) -> Option<IntVector> {
        let k = self.cycles.source().generators();
        solve_with(&self.solver, b).map(|z| self.projection.apply(&z[..k]))
    }

    /// Representatives in `B` of the generators of the subquotient.
    pub fn representatives(&self) -> IntMatrix {
        self.representatives.clone()
    }
}

pub fn subquotient(inc: &GroupHom, out: &GroupHom) -> Result<Subquotient> {
    if !inc.target().same_presentation(out.source()) {
        return Err(Error::NotComposable(0));
    }
    let (_, cycles) = kernel(out);
    let a = lift(&cycles, inc)?.ok_or_else(|| Error::Invalid("image is not contained in the kernel".into()))?;
    let (_, projection) = cokernel(&a);
    // Present the result in canonical form `Z^r ⊕ Z/t_1 ⊕ ...`.
    let canon = simplify(projection.target());
    let projection = projection.then(&canon.to_canonical)?;
    let representatives = cycles.matrix() * canon.from_canonical.matrix();
    let solver = std::sync::Arc::new(snf(&cycles.matrix().hconcat(cycles.target().relations())));
    Ok(Subquotient { group: canon.group, cycles, projection, representatives, solver })
}

/// Canonical form `Z^r ⊕ Z/t_1 ⊕ ...` of `g` with mutually inverse isomorphisms.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub group: FgAbGroup,
    pub to_canonical: GroupHom,
    pub from_canonical: GroupHom,
}

pub fn simplify(g: &FgAbGroup) -> Simplified {
    let (u, u_inv, diag) = g.smith();
    let keep: Vec<usize> = (0..g.generators()).filter(|&i| !diag[i].is_one()).collect();
    // Torsion coordinates precede free ones in Smith order.
    let canon = FgAbGroup::from_invariants(g.free_rank(), g.torsion());
    let to = GroupHom::from_parts_unchecked(g.clone(), canon.clone(), u.select_rows(&keep));
    let from = GroupHom::from_parts_unchecked(canon.clone(), g.clone(), u_inv.select_columns(&keep));
    Simplified { group: canon, to_canonical: to, from_canonical: from }
}

/// `Hom(G, Z) ≅ Z^r`.
pub fn hom_to_z(g: &FgAbGroup) -> FgAbGroup {
    FgAbGroup::free(g.free_rank())
}

/// `Ext(G, Z) ≅` torsion subgroup of `G`.
pub fn ext_to_z(g: &FgAbGroup) -> FgAbGroup {
    FgAbGroup::from_invariants(0, g.torsion())
}
