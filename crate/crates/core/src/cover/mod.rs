//! Discretized closed covers of a realized polytope and witness search for
//! the covering theorems.

pub mod checkers;
pub mod complex;
pub mod fuzz;
pub mod instance;
pub mod witness;

pub use checkers::{touched_facets, Verifier};
pub use complex::{default_resolution, Cell, CellComplex};
pub use fuzz::{FuzzConfig, FuzzReport, Profile, Theorem};
pub use instance::{CoverFile, CoverInstance, LabeledSet, PolytopeSource};
pub use witness::{verify_witness, Witness, WitnessContext};
