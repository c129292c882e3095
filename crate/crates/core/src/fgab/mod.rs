//! Finitely generated abelian groups and their homomorphisms.

mod exact;
mod group;
mod hom;
mod json;
mod ops;
mod subgroup;

pub use exact::{check_exact, is_exact, JunctionReport};
pub use group::FgAbGroup;
pub use hom::GroupHom;
pub use json::{GroupJson, HomJson};
pub use ops::{
    cokernel, direct_sum, direct_sum_all, ext_to_z, hom_to_z, image, is_injective, is_isomorphism, is_surjective,
    kernel, lift, pullback, pushout, simplify, subgroup_group, subquotient, DirectSum, Pullback, Pushout, Simplified,
    Subquotient,
};
pub use subgroup::Subgroup;

#[cfg(test)]
mod tests;
