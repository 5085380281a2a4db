//! Equational intermediate representation: declarations, piecewise
//! equations, affine accesses and reductions.

pub mod affine;
pub mod analysis;
pub mod system;
pub mod validate;
pub mod value;

pub use affine::AffineMap;
pub use analysis::{nominal_complexity, reuse_space, share_space};
pub use system::{image, Case, Equation, EquationSystem, Expr, Param, Reduction, Role, VarDecl};
pub use validate::{validate, ValidationError};
pub use value::{ArithError, BinOp, FuncKind, ReduceOp, Value};
