//! Deterministic dense/sparse linear algebra, seeded randomness, and a
//! finite-difference harness.
//!
//! Everything here is 64-bit floating point and single-threaded, with fixed
//! summation orders, so that repeated runs of the same computation are
//! bit-identical.

mod dense;
mod fd;
mod rng;
mod sparse;

pub use dense::{dropout_mask, glorot_init, DenseMatrix};
pub use fd::finite_difference_grad;
pub use rng::Rng;
pub use sparse::SparseMatrix;

use thiserror::Error;

/// Errors raised by the linear-algebra layer.
#[derive(Debug, Error)]
pub enum MathError {
    #[error("{op}: dimension mismatch ({detail})")]
    DimensionMismatch { op: String, detail: String },
    #[error("{op}: dimensions must be at least 1")]
    EmptyDimension { op: String },
    #[error("{op}: produced or received a non-finite value")]
    NonFinite { op: String },
    #[error("probability {value} outside [0, 1)")]
    InvalidProbability { value: f64 },
    #[error("entry ({row}, {col}) out of bounds for {rows}x{cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("finite-difference step must be positive, got {step}")]
    InvalidStep { step: f64 },
}
