//! Exact-rational engine for the polyhedral side of tropical geometry over
//! toric varieties.
//!
//! The crate builds tropicalizations of hypersurfaces, extends tropical
//! complexes across torus-orbit strata, and decides polyhedral criteria for
//! proper orbit intersection, closedness of the tropical skeleton, and
//! continuity of the section of tropicalization, plus validation of
//! Helm-Katz parameterizing complexes.
//!
//! All arithmetic is exact over arbitrary-precision rationals; every verdict
//! is reproducible and carries explicit witnesses.


pub mod criteria;
pub mod detrand;
pub mod tropical;
pub mod error;
pub mod exact;
pub mod hk;
pub mod json;


pub mod polyhedron;
pub mod toric;


pub use error::{Error, Result};
