//! Exact-arithmetic engine for Minkowski-decomposed reflexive 4-polytopes.
//!
//! Given a reflexive lattice 4-polytope together with a choice of Minkowski
//! decompositions of its scaled 2-faces, this crate decides whether the choice is
//! *regular* (admits a strictly consistent convex piecewise-linear structure), and
//! computes the invariants of the predicted smooth total space: the Euler number χ,
//! the deformation-space dimension γ, the second Betti number b₂ = γ − 3, and the
//! normalized volume of the polar dual. It also enumerates decomposition choices,
//! groups them into symmetry orbits, and reproduces the reference tables bundled
//! with the test suite.
//!
//! All arithmetic is exact (arbitrary-precision integers and rationals). No
//! floating point is used anywhere.

pub mod catalog;
pub mod error;
pub mod invariants;
pub mod io;
pub mod lattice;
pub mod minkowski;
pub mod period;
pub mod reference;
pub mod tables;
pub mod polytope;
pub mod regularity;
pub mod symmetry;

pub use error::{Error, Result};
