//! Materialized fusion systems of small permutation groups, with exhaustive
//! checks of nilpotency criteria for saturated fusion systems.

pub mod charsub;
pub mod error;
pub mod fusion;
pub mod harness;
pub mod permcore;

pub use error::{Error, Result};
