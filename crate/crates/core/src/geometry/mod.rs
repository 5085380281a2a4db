//! Exact rational geometry: constraints, polyhedra, linear spaces, face
//! lattices and cones.

pub mod cone;
pub mod constraint;
pub mod fm;
pub mod lattice;
pub mod lp;
pub mod polyhedron;
pub mod space;

use thiserror::Error;

pub type Rat = num_rational::BigRational;

pub use cone::{dual_generators, project_cone, Cone, Generators};
pub use constraint::{Constraint, ConstraintKind};
pub use lattice::{Face, ThickFaceLattice};
pub use polyhedron::{translate_intersect_diff, Polyhedron, TranslationSplit};
pub use space::{intersect_spaces, kernel, LinearSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("constraint has {found} coefficients, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polyhedron is empty")]
    Empty,
    #[error("dimension {0} is unbounded; cannot enumerate points")]
    Unbounded(usize),
    #[error("reuse vector must be nonzero")]
    ZeroVector,
    #[error("vector does not lie in the lineality space of the face")]
    OutsideLineality,
}
