//! Canonical cell decompositions, tiling isometries and commensurability
//! of cusped hyperbolic 3-manifolds.

pub mod assets;
pub mod cell_enum;
pub mod cusp_shapes;
pub mod dt_codes;
pub mod epstein_penner;
pub mod perm;
pub mod ptb;
pub mod tiling_isometry;
pub mod triangulation;

pub use perm::Perm4;
pub use triangulation::{parse_triangulation, IdealTriangulation, ShapeAssignment, SolveOptions};
