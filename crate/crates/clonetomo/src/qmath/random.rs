//! Seeded random states and matrices, used by the fidelity benchmark and tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use super::state::{DensityMatrix, Ket};

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. complex Gaussian entries.
pub fn random_matrix(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| gaussian_complex(rng))
}

/// Hermitian matrix built as (G + G^dagger)/2 from a Gaussian G.
pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    random_matrix(d, rng).hermitize()
}

/// Haar-ish random pure state: normalized complex Gaussian vector.
pub fn random_ket(d: usize, rng: &mut impl Rng) -> Ket {
    loop {
        let amplitudes: Vec<Complex64> = (0..d).map(|_| gaussian_complex(rng)).collect();
        if let Ok(ket) = Ket::from_unnormalized(amplitudes) {
            return ket;
        }
    }
}

/// Random mixed state from the Ginibre ensemble: G G^dagger / Tr.
pub fn random_density(d: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = random_matrix(d, rng);
    let gg = g.matmul(&g.adjoint());
    let trace = gg.trace().re;
    let rho = gg.scale(Complex64::new(1.0 / trace, 0.0));
    DensityMatrix::new(rho).expect("Ginibre construction is PSD with unit trace")
}
