//! Simplification of polyhedral reductions.

pub mod geometry;
pub mod ir;
pub mod oracle;
pub mod schedule;
pub mod simplify;
pub mod dsl;
