//! Exact invariants of toric and quasi-ordinary singularities.
//!
//! The crate computes, with exact rational and cyclotomic arithmetic:
//!
//! * lattices, Hermite normal forms, lattice indices and rational polyhedral
//!   cones with their duals ([`lattice`]);
//! * integral polyhedra, their faces, dual Newton diagrams and the exceptional
//!   edges of the normalized blow-up ([`newton`]);
//! * truncated fractional power series with cyclotomic coefficients
//!   ([`series`]);
//! * affine semigroups, their saturations, graded dimensions and an
//!   isomorphism decision procedure ([`semigroup`]);
//! * quasi-ordinary polynomials and branches: discriminants, characteristic
//!   exponents, the lattice tower and the semigroup `Γ` ([`qo`]);
//! * divisorial valuations, leading forms and executable checks of the
//!   graded-ring isomorphisms attached to toric and quasi-ordinary germs
//!   ([`grading`]).

pub mod error;
pub mod grading;
pub mod json;
pub mod lattice;
pub mod newton;
pub mod qo;
pub mod semigroup;
pub mod series;

pub use error::{Error, Result};
pub use lattice::{Cone, RationalVector, Sublattice};
pub use newton::{Fan, IntegralPolyhedron};
pub use qo::{CharacteristicData, QuasiOrdinaryBranch, WeierstrassPolynomial};
pub use semigroup::AffineSemigroup;
pub use series::{CyclotomicNumber, FractionalSeries};


/// Exact rational scalar used for exponents, weights and lattice vectors.
pub type Q = num_rational::Rational64;
/// Exact rational scalar used for series coefficients.
pub type BigQ = num_rational::BigRational;
/// Integer vector (a row of an integer matrix).
pub type IntVector = Vec<i64>;
/// Dense integer matrix stored by rows.
pub type IntMatrix = Vec<IntVector>;
