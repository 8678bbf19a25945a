//! Decision procedures for extending partial data to semigroup
//! homomorphisms into concrete targets, and for integer-valued projective
//! rank functions, with checkable certificates both ways.

pub mod cli;
pub mod document;
pub mod lab;
pub mod numeric;
pub mod presentation;
pub mod rank;
pub mod solver;
pub mod target;
