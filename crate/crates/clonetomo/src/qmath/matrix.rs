//! Dense complex matrices over small Hilbert spaces.
//!
//! Everything is row-major `Vec<Complex64>` with f64 precision. The crate
//! works in the regime d <= 32, so no sparsity or blocking is attempted.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::QmathError;

/// Which mode of a two-mode (d^2 x d^2) operator to keep in a partial trace.
///
/// Mode `A` is the slow (block) index everywhere in this crate: a product
/// operator `M = P (x) Q` has `M[(ia*d+ib), (ja*d+jb)] = P[ia,ja] * Q[ib,jb]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Build from row-major data. Errors on shape mismatch or non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, QmathError> {
        if rows == 0 || cols == 0 {
            return Err(QmathError::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(QmathError::ShapeMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QmathError::NonFiniteEntry);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be >= 1");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build a matrix entry by entry. The closure receives (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.data[row * self.cols + col] = value;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Complex64 {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        assert_eq!(self.rows, other.cols, "product must be square for a trace");
        let mut t = Complex64::new(0.0, 0.0);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t += self.get(r, c) * other.get(c, r);
            }
        }
        t
    }

    /// (M + M^dagger) / 2.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square(), "hermitize requires a square matrix");
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        })
    }

    /// Largest |M_ij - conj(M_ji)| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        assert!(self.is_square(), "hermiticity check requires a square matrix");
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..=i {
                let diff = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(diff);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_defect() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of (self - other).
    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch"
        );
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "dimension mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, other: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(other)
    }
}

/// Kronecker product with mode-a as the block (slow) index.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let factor = a.get(ia, ja);
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out.set(ia * b.rows() + ib, ja * b.cols() + jb, factor * b.get(ib, jb));
                }
            }
        }
    }
    out
}

/// Reduced operator of a two-mode (d^2 x d^2) operator, tracing out the other mode.
pub fn partial_trace(m: &ComplexMatrix, keep: Mode) -> Result<ComplexMatrix, QmathError> {
    if !m.is_square() {
        return Err(QmathError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(QmathError::NotPerfectSquare { dim: n });
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..d {
                let (row, col) = match keep {
                    Mode::A => (i * d + k, j * d + k),
                    Mode::B => (k * d + i, k * d + j),
                };
                sum += m.get(row, col);
            }
            out.set(i, j, sum);
        }
    }
    Ok(out)
}

/// Unitary discrete Fourier matrix, F[i][j] = exp(i 2 pi i j / d) / sqrt(d).
///
/// Its entries are the inner products between the two mutually unbiased bases
/// used throughout the crate.
pub fn dft_matrix(d: usize) -> ComplexMatrix {
    assert!(d >= 2, "dft_matrix requires d >= 2");
    let norm = 1.0 / (d as f64).sqrt();
    ComplexMatrix::from_fn(d, d, |i, j| {
        let phase = 2.0 * std::f64::consts::PI * (i as f64) * (j as f64) / (d as f64);
        Complex64::from_polar(norm, phase)
    })
}
