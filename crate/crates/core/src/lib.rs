//! Exact nonsymmetric and parasymmetric Macdonald polynomials, Cherednik
//! pairings, and graded characters of the parahoric modules D_λ and U_λ.

pub mod error;
pub mod root_system;
pub mod weyl_group;
pub mod affine_weyl;
pub mod group_ring;
pub mod daha_ops;
pub mod macdonald_engine;
pub mod cherednik_pairing;
pub mod module_characters;
pub mod cli;

pub use error::{Error, Result};
