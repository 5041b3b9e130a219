//! Exact computations with perfect complexes over finite-dimensional algebras
//! over prime fields, their sequential completions, and the morphic
//! enhancement.

pub mod algebra;
pub mod catalog;
pub mod completion;
pub mod complexes;
pub mod derived;
pub mod exactla;
pub mod morphic;
pub mod pgroup;
pub mod sample;
pub mod singularity;
