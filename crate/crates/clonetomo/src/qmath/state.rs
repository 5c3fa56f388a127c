//! Kets and density matrices with validated invariants.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::spectral::eig_hermitian;
use super::QmathError;

const NORM_TOL: f64 = 1e-12;
const HERM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-12;
const EIG_TOL: f64 = 1e-10;

/// Pure state: a unit-norm complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
}

impl Ket {
    /// Build from amplitudes that are already normalized to within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, QmathError> {
        if amplitudes.is_empty() {
            return Err(QmathError::EmptyMatrix);
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(QmathError::NonFiniteEntry);
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(QmathError::NotNormalized { norm_sq });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize arbitrary (nonzero) amplitudes into a ket.
    pub fn from_unnormalized(amplitudes: Vec<Complex64>) -> Result<Self, QmathError> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(QmathError::NotNormalized { norm_sq });
        }
        let norm = norm_sq.sqrt();
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// Computational basis state |k> in dimension d.
    pub fn basis_state(d: usize, k: usize) -> Self {
        assert!(k < d, "basis index out of range");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); d];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amplitudes[k]
    }

    /// <self|other>.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Rank-one projector |self><self|.
    pub fn projector(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj())
    }

    /// |self> (x) |other>, mode-a slow.
    pub fn tensor(&self, other: &Ket) -> Ket {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ket { amplitudes }
    }

    /// <self| M |self>.
    pub fn expectation(&self, m: &ComplexMatrix) -> Complex64 {
        assert_eq!(self.dim(), m.rows(), "dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += self.amplitudes[i].conj() * m.get(i, j) * self.amplitudes[j];
            }
        }
        acc
    }
}

/// Validated density operator: Hermitian, unit trace, positive semi-definite.
///
/// The stored matrix is exactly Hermitian (hermitized on construction once the
/// input passes the tolerance checks), so downstream algebra never has to
/// re-symmetrize.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QmathError> {
        if !matrix.is_square() {
            return Err(QmathError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERM_TOL {
            return Err(QmathError::NotHermitian { defect });
        }
        let matrix = matrix.hermitize();
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(QmathError::NotUnitTrace { trace: trace.re });
        }
        let (eigenvalues, _) = eig_hermitian(&matrix)?;
        if let Some(&min) = eigenvalues.last() {
            if min < -EIG_TOL {
                return Err(QmathError::NotPositive { min_eigenvalue: min });
            }
        }
        Ok(Self { matrix })
    }

    /// |psi><psi| for a pure state.
    pub fn pure(psi: &Ket) -> Self {
        Self {
            matrix: psi.projector(),
        }
    }

    /// I/d.
    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Tr(rho^2); 1 for pure states.
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// <x>_rho = Tr(P rho) for a Hermitian observable or projector P.
    pub fn expectation(&self, p: &ComplexMatrix) -> f64 {
        p.trace_product(&self.matrix).re
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn dominant_eigenvector(&self) -> Ket {
        let (_, vectors) = eig_hermitian(&self.matrix).expect("stored matrix is Hermitian");
        vectors.into_iter().next().expect("d >= 1")
    }
}
