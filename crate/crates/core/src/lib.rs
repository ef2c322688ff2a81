//! Zariski closures of finitely generated groups of rational matrices:
//! exact arithmetic, polynomial ideals, the degree-bounded fixed-point
//! engine, structural subroutines and the closed-form bounds around them.

pub mod arith;
pub mod bounds;
pub mod closure;
pub mod error;
pub mod frontend;
pub mod par;
pub mod polynomials;
pub mod relations;
pub mod structure;

pub use error::{Error, Result};
