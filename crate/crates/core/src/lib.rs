//! Heisenberg homology of configuration spaces of ribbon graphs.
//!
//! The crate builds Borel–Moore cellular chain complexes of unordered
//! configurations in (relative) ribbon graphs, with local coefficients in the
//! group ring of the discrete Heisenberg group of the thickened surface, and
//! computes the twisted mapping class group action on the genus-one,
//! two-point relative homology.

pub mod error;
pub mod heisenberg;
pub mod ribbon_graph;
pub mod config_complex;
pub mod homology;
pub mod mcg_action;

pub use error::{Error, Result};
