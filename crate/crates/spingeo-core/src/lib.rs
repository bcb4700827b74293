//! Exact-arithmetic toolkit for Riemannian spin geometry with totally
//! skew-symmetric torsion.
//!
//! The crate computes, over multi-quadratic extensions of the rationals,
//! the standard objects attached to a metric connection with skew torsion
//! on a naturally reductive homogeneous space: the Clifford/exterior
//! algebra of an orthonormal frame, spin representations and their
//! Lie-algebra lifts, Nomizu maps and curvature from structure constants,
//! the one-parameter family of Dirac and twistor operators, and the
//! scalar-level eigenvalue estimates for the cubic Dirac operator.
//!
//! Everything is verified exactly (no floating point in the deciding
//! path); floats appear only as a cross-check oracle and as a report
//! output format.

// Index loops mirror the frame/matrix notation throughout.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod clifford;
pub mod estimates;
pub mod exactfield;
pub mod homspace;
pub mod linalg;
pub mod report;
pub mod spinops;
pub mod spinrep;
#[cfg(test)]
pub(crate) mod testutil;
pub mod torsion;

pub use clifford::Multivector;
pub use exactfield::{Scalar, ScalarPoly};
pub use homspace::ReductiveSpace;
pub use spinrep::{GammaRep, SpinorVec};
pub use torsion::TorsionContext;
