//! Hermitian spectral decomposition, backed by nalgebra's solver.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::state::Ket;
use super::QmathError;

const HERM_TOL: f64 = 1e-10;

/// Full spectral decomposition of a Hermitian matrix.
///
/// Returns eigenvalues sorted in descending order with matching unit-norm
/// eigenvectors. The input must be Hermitian to within 1e-10; the solver then
/// sees the exactly hermitized matrix so the decomposition reconstructs the
/// input to solver precision.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<(Vec<f64>, Vec<Ket>), QmathError> {
    if !m.is_square() {
        return Err(QmathError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let defect = m.hermiticity_defect();
    if defect > HERM_TOL {
        return Err(QmathError::NotHermitian { defect });
    }
    let h = m.hermitize();
    let n = h.rows();
    let na = DMatrix::from_fn(n, n, |i, j| h.get(i, j));
    let decomp = na.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomp.eigenvalues[b]
            .partial_cmp(&decomp.eigenvalues[a])
            .expect("eigenvalues of a Hermitian matrix are finite reals")
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for &k in &order {
        eigenvalues.push(decomp.eigenvalues[k]);
        let column: Vec<Complex64> = decomp.eigenvectors.column(k).iter().copied().collect();
        eigenvectors.push(Ket::from_unnormalized(column)?);
    }
    Ok((eigenvalues, eigenvectors))
}

/// Rebuild sum_k lambda_k |v_k><v_k| from a decomposition.
pub fn reconstruct(eigenvalues: &[f64], eigenvectors: &[Ket]) -> ComplexMatrix {
    assert_eq!(eigenvalues.len(), eigenvectors.len());
    let d = eigenvectors[0].dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for (lambda, v) in eigenvalues.iter().zip(eigenvectors.iter()) {
        let p = v.projector().scale(Complex64::new(*lambda, 0.0));
        out = &out + &p;
    }
    out
}

/// Principal square root of a positive semi-definite Hermitian matrix.
///
/// Eigenvalues within solver noise below zero are clamped to zero.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix, QmathError> {
    let (eigenvalues, eigenvectors) = eig_hermitian(m)?;
    let roots: Vec<f64> = eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    Ok(reconstruct(&roots, &eigenvectors))
}
