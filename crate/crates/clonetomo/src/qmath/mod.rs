//! Exact complex linear algebra over small Hilbert spaces: construction,
//! composition, tensor products, partial traces, and spectral decomposition.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here is safe to share across threads.

mod matrix;
pub mod random;
mod spectral;
mod state;

pub use matrix::{dft_matrix, partial_trace, tensor_product, ComplexMatrix, Mode};
pub use spectral::{eig_hermitian, reconstruct, sqrt_psd};
pub use state::{DensityMatrix, Ket};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QmathError {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("data length {got} does not match rows*cols = {expected}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("matrix contains a NaN or infinite entry")]
    NonFiniteEntry,
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension {dim} is not a perfect square")]
    NotPerfectSquare { dim: usize },
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("state is not normalized (norm^2 = {norm_sq})")]
    NotNormalized { norm_sq: f64 },
    #[error("operator trace {trace} is not 1")]
    NotUnitTrace { trace: f64 },
    #[error("operator is not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
}
