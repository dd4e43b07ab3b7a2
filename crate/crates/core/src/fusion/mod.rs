//! Fusion systems over a `p`-group with fully materialized hom sets.

mod lattice;
mod saturation;
mod subsystem;
mod system;

pub use lattice::{SubgroupId, SubgroupLattice};
pub use saturation::SaturationFailure;
pub use subsystem::{generated_subsystem, AutSetK};
pub use system::{
    frobenius_criterion, fusion_of_group, inner_fusion, FusionMorphism, FusionSystem, Provenance,
};
