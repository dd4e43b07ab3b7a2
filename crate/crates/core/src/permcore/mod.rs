//! Permutation group engine: permutations, materialized groups, subgroup
//! lattices, Sylow and Frattini subgroups, automorphisms.

pub mod arith;
mod group;
mod hom;
mod perm;
mod stabchain;
mod subgroup;

pub use group::{group_closure, ElemId, Limits, PermGroup};
pub use hom::{automorphism_group, GroupHom};
pub use perm::Permutation;
pub use stabchain::StabilizerChain;
pub use subgroup::{
    all_subgroups, center, centralizer, centralizer_of, derived_subgroup, frattini,
    frattini_by_generators, is_strongly_closed_group, maximal_subgroups, normalizer,
    strong_closure_violation_group, sylow, Subgroup,
};
