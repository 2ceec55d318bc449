//! Arbitrary-precision rational arithmetic, integer lattice normal forms, and
//! exact linear feasibility. Everything downstream is built on this module;
//! there is no floating point anywhere in the crate.

mod feasibility;
mod mat;
mod rat;
mod snf;

pub use feasibility::{fm_project, solve_feasibility, Constraint, Feasibility, LinearSystem, Rel};
pub use mat::{primitive_integer, rank_of_rows, rref_of_rows, solve_in_row_span, Mat};
pub use rat::{dot, Rat};
pub use snf::{hnf, integer_kernel, lattice_index, right_inverse, snf, IMat, Snf};
