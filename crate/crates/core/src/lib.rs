//! Exact solvers for four binary matrix approximation problems:
//! clustering around `r` binary means, low GF(2)-rank approximation,
//! approximation by a fixed block pattern, and low Boolean-rank
//! approximation. Each problem ships with a brute-force oracle so the
//! parameterized algorithms can be cross-checked on small inputs.

pub mod boolean;
mod budget;
pub mod combinatorics;
mod error;
pub mod gf2;
pub mod matrix;
pub mod means;
pub mod planted;
pub mod pmatrix;
pub mod reductions;
pub mod selection;

pub use budget::Budget;
pub use error::{Error, Result};
pub use matrix::{BinaryMatrix, BitVector, IndexPartition};
