//! Colored simple polytopes, quasitoric cohomology rings, covering-theorem
//! checkers and the colorful Voronoi-Hex game.
//!
//! Geometry is generic over [`scalar::Scalar`] (`f32`, `f64`, exact
//! rationals); ring arithmetic over [`scalar::Coefficient`] (`i64`, `i128`,
//! `BigInt`). The aliases below fix the common choices.

pub mod algebra;
pub mod cover;
pub mod error;
pub mod hex;
pub mod polytope;
pub mod scalar;

pub use error::{AlgebraError, CoverError, HexError, PolytopeError};
pub use polytope::{BuiltPolytope as GenericBuiltPolytope, Coloring, CombinatorialPolytope, Face};

/// Realization with `f64` coordinates.
pub type Realization = polytope::Realization<f64>;
/// Builder output with `f64` coordinates.
pub type BuiltPolytope = polytope::BuiltPolytope<f64>;
/// Exact rational coordinates.
pub type Rational = num_rational::BigRational;
/// Ring elements with machine-integer coefficients.
pub type RingElement = algebra::RingElement<i64>;
/// Cohomology ring with machine-integer coefficients.
pub type CohomologyRing = algebra::CohomologyRing<i64>;
/// Grid complex over an `f64` realization.
pub type CellComplex = cover::CellComplex<f64>;
/// Voronoi-Hex board with `f64` sites.
pub type Board = hex::Board<f64>;
