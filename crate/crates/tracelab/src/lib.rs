//! Exact homological algebra over prime fields.
//!
//! The modules build on each other in the order listed: sparse elimination,
//! chain complexes, functor homology over finite categories, simplicial and
//! cyclic modules, Tate constructions, power functors, the cube construction,
//! and the Hochschild/cyclic suite.

pub mod budget;
pub mod chains;
pub mod cube;
pub mod cyc;
pub mod error;
pub mod fincat;
pub mod hoch;
pub mod linalg;
pub mod powfun;
pub mod selfcheck;
pub mod tate;

pub use error::{Error, Result};
pub use linalg::{Field, SparseMatrix};
