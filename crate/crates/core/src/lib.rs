//! Exact computations for the gl(1|1) XXX spin chain: monodromy and transfer
//! matrices, algebraic Bethe ansatz, the Bethe algebra, Shapovalov norms,
//! fusion and difference operators, and the polynomial Weyl-module model.

// index loops read more naturally than iterator chains in the matrix code
#![allow(clippy::needless_range_loop)]

pub mod bethe;
pub mod bethealg;
pub mod error;
pub mod exactnum;
pub mod fusion;
pub mod monodromy;
pub mod report;
pub mod shapoform;
pub mod superlin;
pub mod weylspace;

pub use error::{Error, Result};
