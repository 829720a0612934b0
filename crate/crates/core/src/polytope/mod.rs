//! Simple polytopes: incidence, faces, colorings and builders.

pub mod bitset;
pub mod builders;
pub mod coloring;
pub mod combinatorial;
pub mod descriptor;
pub mod geometry;
pub mod io;

pub use builders::BuiltPolytope;
pub use coloring::{chromatic_number, find_coloring, i_color_class, joswig_colorable, Coloring, JoswigReport};
pub use combinatorial::{CombinatorialPolytope, Face, FacetAdjacency, SimplicityReport};
pub use geometry::{Halfspace, Realization};
pub use io::PolytopeFile;
