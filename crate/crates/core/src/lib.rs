//! Exact residue calculus for the family of degree-`d` hypersurfaces in
//! projective `n`-space.
//!
//! Everything is computed over the rational numbers with exact arithmetic:
//! pole-order Hodge filtrations of smooth hypersurfaces, the graded
//! global-section model of the filtered D-module on the dual projective
//! space, its characteristic module (checked against an independent
//! universal-Jacobian-ring computation), and jet-separation / stratum
//! codimension bounds for the singular members of the family.

pub mod error;
pub mod forms;
pub mod griffiths;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod strata;
pub mod universal;

pub use error::{Error, Result};
pub use matrix::{ExactMatrix, Rational, SubspaceBasis};
pub use poly::{BigradedPoly, HomogPoly, ProblemSpec};
