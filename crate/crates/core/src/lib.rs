//! Nets of causal loops over Minkowski space.
//!
//! The crate is layered bottom-up:
//!
//! * [`geometry`]: metric, Poincaré group, double cones and causal predicates.
//! * [`simplex`]: affine smearing simplices, chains, the cone construction.
//! * [`loopgroup`]: words over 1-simplices, paths, loops and path-frame systems.
//! * [`holonomy`]: unitary values and the cochain / representation / connection
//!   correspondences, plus a matrix-valued lattice cochain.
//! * [`emfield`]: classical closed 2-forms, their potentials, and the phase-valued
//!   cochain and connection built from them.

pub mod emfield;
pub mod error;
pub mod geometry;
pub mod holonomy;
pub mod loopgroup;
pub mod quadrature;
pub mod simplex;

pub use error::{Error, Result};
