//! Minimal free resolutions of monomial ideals, bases with minimal support,
//! incidence posets and conic chain complexes, and the cavity-filling
//! construction of a homology CW-poset supporting the minimal resolution.
//!
//! All arithmetic is exact, over `Q` or a prime field `GF(p)`.

pub mod conic;
pub mod error;
pub mod exactla;
pub mod gradedcomplex;
pub mod hcw;
pub mod incidence;
pub mod minsupport;
pub mod monomials;
pub mod posets;
pub mod rigidity;

pub use error::{Error, Result};
