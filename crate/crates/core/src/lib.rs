//! Exact sector partitions, local cohomology of affine semigroup rings as
//! graded D-modules, and exponent data of the associated graded ring.

pub mod cli;
pub mod cohomology;
pub mod cone;
pub mod error;
pub mod grdmod;
pub mod lattice;
pub mod sector;
pub mod semigroup;

pub use error::{Error, Result};
