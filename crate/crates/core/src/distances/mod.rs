//! Path lengths in the three categories, bottleneck distance, and the
//! interpolation relating the two on embedded chains.

pub mod embedding;
pub mod interpolate;
pub mod matching;
pub mod path;

pub use embedding::{coord_name, parse_coord, RealEmbedding};
pub use interpolate::{critical_points, edit_bounds, interpolate, witness_path, EditBounds, Interpolant};
pub use matching::{bottleneck, displacement, matching_norm, morphism_to_matching, sup_distance, Diagram, Matching};
pub use path::{bd_path, mobius_path, path_length, Category, CategoryMorphism, Direction, MorphismPath, Step};
