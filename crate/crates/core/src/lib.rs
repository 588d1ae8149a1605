//! Exact determinants of square matrices whose entries are sparse
//! multivariate polynomials with arbitrary-precision integer coefficients.
//!
//! The crate provides minor expansion and fraction-free (Bareiss) elimination
//! with integer-operation metering, closed-form cost models for both, row
//! reordering heuristics for minor expansion, and a benchmark harness that
//! compares them.

pub mod bench;
pub mod cli;
pub mod costmodel;
pub mod det;
pub mod error;
pub mod matrix;
pub mod poly;
pub mod rowsort;

pub use det::{bareiss, determinant, minor_expansion, naive_laplace, Algorithm, CostMeter};
pub use error::{Error, Result};
pub use matrix::{ExperimentConfig, SymMatrix};
pub use poly::{Monomial, Polynomial};
