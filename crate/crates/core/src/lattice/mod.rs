//! Exact lattice and cone machinery: Hermite normal forms, sublattices of
//! `Q^d` with their indices, and rational polyhedral cones with duality.

mod cone;
mod hnf;
pub(crate) mod linalg;
pub(crate) mod lp;
mod sublattice;
mod vector;

pub use cone::{cone_contains, dual_cone, is_strictly_convex, pairing, Cone};
pub use hnf::{hermite_normal_form, hnf_basis, mat_mul};
pub use linalg::det_int;
pub use sublattice::{lattice_index, lattice_member, Sublattice};
pub use vector::{format_rational, int_dot, parse_rational, primitive, RationalVector};
