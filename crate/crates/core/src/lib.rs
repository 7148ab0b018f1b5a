//! Infinite-dimensional QR iteration for bounded operators on ℓ²(ℕ).
//!
//! Operators are supplied as [`operator::ColumnOracle`]s. [`iqr::iqr_truncation`] runs the
//! exact windowed iteration on quasi-banded operators, [`iqr::iqr_invertible`] the
//! error-controlled variant for column-decay data. [`spectra`] holds the finite-dimensional
//! kernels and metrics, [`towers`] the limit algorithms with error control, and
//! [`experiments`] the reproducible numerical studies.

pub mod dense;
pub mod error;
pub mod experiments;
pub mod iqr;
pub mod operator;
pub mod scalar;
pub mod spectra;
pub mod towers;

pub use dense::{CMatrix, Matrix};
pub use error::{Error, Result};
pub use scalar::{c64, Scalar, C64};
