//! Characteristic matrices and the integral cohomology ring of the
//! associated quasitoric manifold, computed as a graded quotient of the
//! face ring.

pub mod characteristic;
pub mod element;
pub mod hnf;
pub mod identities;
pub mod literal;
pub mod ring;

pub use characteristic::{
    canonical_characteristic, special_characteristic, special_facets, validate_characteristic, CharacteristicMatrix,
    CharacteristicReport, SignVector,
};
pub use element::{Monomial, RingElement};
pub use identities::{canonical_identities, special_identities, IdentityCheck};
pub use literal::VariableNames;
pub use ring::{simplicial_class, vertex_class, CohomologyRing, GradedBasis};
