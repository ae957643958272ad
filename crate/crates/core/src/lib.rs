//! Exact computations with integral quadratic lattices and hyperbolic reflection groups.

// Matrix code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod cohomring;
pub mod cubic4;
pub mod dynkin;
pub mod enumerate;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod reproduce;
pub mod roots;
pub mod rootsys;
pub mod strata;
pub mod vinberg;

pub use error::{Error, Result};
pub use lattice::{make_standard, GramLattice, Sublattice};
