//! SWAP operator, generalized symmetry operations, and the trivial, optimal,
//! twins, and partially-distinguishable cloning maps.
//!
//! Conventions, fixed once for the whole crate:
//! - mode a is the slow (block) index of every two-mode operator;
//! - the optimal-cloner output is `(2/(d+1)) P^j (rho (x) I) P^j!` with the
//!   un-normalized ancilla written as the bare identity, so its trace is the
//!   post-selection probability `(d + Re j)/(d+1)` rather than 1. Nothing is
//!   silently renormalized; the phase-cycling prefactors assume exactly this.

use num_complex::Complex64;

use crate::qmath::{partial_trace, tensor_product, ComplexMatrix, DensityMatrix, Ket, Mode};

/// Phase j of the symmetry operation, restricted to the fourth roots of unity.
///
/// Only these four values enter the phase-cycling sum, so arbitrary phases are
/// not exposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryPhase {
    PlusOne,
    MinusOne,
    PlusI,
    MinusI,
}

impl SymmetryPhase {
    /// Cycling order used everywhere counts are recorded or summed.
    pub const ALL: [SymmetryPhase; 4] = [
        SymmetryPhase::PlusOne,
        SymmetryPhase::MinusOne,
        SymmetryPhase::PlusI,
        SymmetryPhase::MinusI,
    ];

    pub fn value(self) -> Complex64 {
        match self {
            SymmetryPhase::PlusOne => Complex64::new(1.0, 0.0),
            SymmetryPhase::MinusOne => Complex64::new(-1.0, 0.0),
            SymmetryPhase::PlusI => Complex64::new(0.0, 1.0),
            SymmetryPhase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Complex64 {
        self.value().conj()
    }

    pub fn label(self) -> &'static str {
        match self {
            SymmetryPhase::PlusOne => "+1",
            SymmetryPhase::MinusOne => "-1",
            SymmetryPhase::PlusI => "+i",
            SymmetryPhase::MinusI => "-i",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "+1" => Some(SymmetryPhase::PlusOne),
            "-1" => Some(SymmetryPhase::MinusOne),
            "+i" => Some(SymmetryPhase::PlusI),
            "-i" => Some(SymmetryPhase::MinusI),
            _ => None,
        }
    }
}

/// Operator on mode a (x) mode b, stored as a d^2 x d^2 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeOperator {
    dim_per_mode: usize,
    matrix: ComplexMatrix,
}

impl TwoModeOperator {
    pub fn new(dim_per_mode: usize, matrix: ComplexMatrix) -> Self {
        assert!(dim_per_mode >= 2, "per-mode dimension must be >= 2");
        assert_eq!(matrix.rows(), dim_per_mode * dim_per_mode, "matrix must be d^2 x d^2");
        assert!(matrix.is_square(), "matrix must be square");
        Self { dim_per_mode, matrix }
    }

    pub fn dim_per_mode(&self) -> usize {
        self.dim_per_mode
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Reduced operator on the kept mode.
    pub fn reduced(&self, keep: Mode) -> ComplexMatrix {
        partial_trace(&self.matrix, keep).expect("two-mode operators are d^2 x d^2 by construction")
    }
}

/// Temporal overlap probability |alpha|^2 of the two photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishabilityFactor {
    alpha_sq: f64,
}

impl DistinguishabilityFactor {
    pub fn new(alpha_sq: f64) -> Result<Self, ClonerError> {
        if !(0.0..=1.0).contains(&alpha_sq) || !alpha_sq.is_finite() {
            return Err(ClonerError::AlphaOutOfRange { alpha_sq });
        }
        Ok(Self { alpha_sq })
    }

    pub fn alpha_sq(self) -> f64 {
        self.alpha_sq
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClonerError {
    #[error("distinguishability |alpha|^2 = {alpha_sq} is outside [0, 1]")]
    AlphaOutOfRange { alpha_sq: f64 },
}

/// SWAP on two d-dimensional modes: S |u,w> = |w,u>.
pub fn swap_operator(d: usize) -> TwoModeOperator {
    assert!(d >= 2, "swap_operator requires d >= 2");
    let mut m = ComplexMatrix::zeros(d * d, d * d);
    for u in 0..d {
        for w in 0..d {
            m.set(w * d + u, u * d + w, Complex64::new(1.0, 0.0));
        }
    }
    TwoModeOperator::new(d, m)
}

/// Generalized symmetry operation P^j = (I + j S)/2.
///
/// A projector for j = +-1; for j = +-i a non-idempotent coherent combination
/// of the symmetric and anti-symmetric projectors,
/// P^{+-i} = (e^{+-i pi/4} P^{+1} + e^{-+i pi/4} P^{-1}) / sqrt(2).
pub fn symmetry_op(j: SymmetryPhase, d: usize) -> TwoModeOperator {
    let swap = swap_operator(d);
    let identity = ComplexMatrix::identity(d * d);
    let m = (&identity + &swap.matrix().scale(j.value())).scale(Complex64::new(0.5, 0.0));
    TwoModeOperator::new(d, m)
}

/// Trivial cloner output t = (rho (x) I + I (x) rho) / (2d).
///
/// Unit trace; both reduced states equal rho/2 + I/(2d).
pub fn trivial_clone(rho: &DensityMatrix) -> TwoModeOperator {
    let d = rho.dim();
    let identity = ComplexMatrix::identity(d);
    let sum = &tensor_product(rho.matrix(), &identity) + &tensor_product(&identity, rho.matrix());
    TwoModeOperator::new(d, sum.scale(Complex64::new(1.0 / (2.0 * d as f64), 0.0)))
}

/// Optimal cloner output o^j = (2/(d+1)) P^j (rho (x) I) P^j!.
///
/// For j = +1 this has unit trace; for j = +-i the trace is the post-selection
/// probability d/(d+1), kept as-is.
pub fn optimal_clone(rho: &DensityMatrix, j: SymmetryPhase) -> TwoModeOperator {
    let d = rho.dim();
    let pi = symmetry_op(j, d);
    let rho_i = tensor_product(rho.matrix(), &ComplexMatrix::identity(d));
    let sandwich = pi.matrix().matmul(&rho_i).matmul(&pi.matrix().adjoint());
    let scale = Complex64::new(2.0 / (d as f64 + 1.0), 0.0);
    TwoModeOperator::new(d, sandwich.scale(scale))
}

/// Twins term c = S (rho (x) I): the coherent portion of the optimal clones.
///
/// Non-Hermitian in general and not a physical state; it is exposed for
/// analysis and tests but never fed to channels. Joint projections on it
/// reproduce simultaneous measurements on rho:
/// Tr[(x (x) y) (j c + j* c!)/2] = Re(j <xy>_rho).
pub fn twins_operator(rho: &DensityMatrix) -> TwoModeOperator {
    let d = rho.dim();
    let swap = swap_operator(d);
    let rho_i = tensor_product(rho.matrix(), &ComplexMatrix::identity(d));
    TwoModeOperator::new(d, swap.matrix().matmul(&rho_i))
}

/// Partially distinguishable cloner output
/// sigma^j = |alpha|^2 o^j + (1 - |alpha|^2) t.
pub fn partial_clone(
    rho: &DensityMatrix,
    j: SymmetryPhase,
    alpha_sq: DistinguishabilityFactor,
) -> TwoModeOperator {
    let a = alpha_sq.alpha_sq();
    let optimal = optimal_clone(rho, j);
    let trivial = trivial_clone(rho);
    let m = &optimal.matrix().scale(Complex64::new(a, 0.0))
        + &trivial.matrix().scale(Complex64::new(1.0 - a, 0.0));
    TwoModeOperator::new(rho.dim(), m)
}

/// Fidelity of either reduced clone of the j = +1 optimal cloner to the pure
/// input, computed through the channel. Equals 1/2 + 1/(d+1) for every input.
pub fn clone_fidelity(psi: &Ket) -> f64 {
    let rho = DensityMatrix::pure(psi);
    let output = optimal_clone(&rho, SymmetryPhase::PlusOne);
    let reduced = output.reduced(Mode::A);
    psi.expectation(&reduced).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::random::{random_density, random_ket};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn h() -> DensityMatrix {
        DensityMatrix::pure(&Ket::basis_state(2, 0))
    }

    #[test]
    fn swap_exchanges_basis_kets() {
        let s = swap_operator(2);
        let hv = Ket::basis_state(2, 0).tensor(&Ket::basis_state(2, 1));
        let vh = Ket::basis_state(2, 1).tensor(&Ket::basis_state(2, 0));
        // S|h,v> = |v,h>: column of S at index hv equals vh.
        for r in 0..4 {
            let applied: Complex64 = (0..4).map(|k| s.matrix().get(r, k) * hv.amplitude(k)).sum();
            assert!((applied - vh.amplitude(r)).norm() < 1e-15);
        }
    }

    #[test]
    fn swap_is_an_involution() {
        let s = swap_operator(2);
        let s2 = s.matrix().matmul(s.matrix());
        assert!(s2.distance(&ComplexMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn swap_trace_is_d() {
        assert!((swap_operator(3).trace() - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn symmetric_subspace_dimensions() {
        // Tr P^{+1} = d(d+1)/2 and Tr P^{-1} = d(d-1)/2.
        assert!((symmetry_op(SymmetryPhase::PlusOne, 2).trace() - c(3.0, 0.0)).norm() < 1e-14);
        assert!((symmetry_op(SymmetryPhase::MinusOne, 2).trace() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn plus_i_times_minus_i_is_half_identity() {
        for d in [2, 3] {
            let prod = symmetry_op(SymmetryPhase::PlusI, d)
                .matrix()
                .matmul(symmetry_op(SymmetryPhase::MinusI, d).matrix());
            let expected = ComplexMatrix::identity(d * d).scale(c(0.5, 0.0));
            assert!(prod.distance(&expected) < 1e-12);
        }
    }

    #[test]
    fn real_phases_are_orthogonal_projectors() {
        for d in 2..=8 {
            let p_plus = symmetry_op(SymmetryPhase::PlusOne, d);
            let p_minus = symmetry_op(SymmetryPhase::MinusOne, d);
            let sum = p_plus.matrix() + p_minus.matrix();
            assert!(sum.distance(&ComplexMatrix::identity(d * d)) < 1e-12);
            let prod = p_plus.matrix().matmul(p_minus.matrix());
            assert!(prod.max_abs_entry() < 1e-12);
            for p in [&p_plus, &p_minus] {
                let sq = p.matrix().matmul(p.matrix());
                assert!(sq.distance(p.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn imaginary_phases_square_to_scaled_swap() {
        // (P^{+i})^2 = i S / 2, so the +-i operations are not projectors.
        for d in [2, 3] {
            let p = symmetry_op(SymmetryPhase::PlusI, d);
            let sq = p.matrix().matmul(p.matrix());
            let expected = swap_operator(d).matrix().scale(c(0.0, 0.5));
            assert!(sq.distance(&expected) < 1e-12);
        }
    }

    #[test]
    fn interferometric_decomposition() {
        // P^{+-i} = (e^{+-i pi/4} P^{+1} + e^{-+i pi/4} P^{-1}) / sqrt(2).
        let quarter = std::f64::consts::FRAC_PI_4;
        for d in [2, 3, 5] {
            let p_sym = symmetry_op(SymmetryPhase::PlusOne, d);
            let p_anti = symmetry_op(SymmetryPhase::MinusOne, d);
            for (j, sign) in [(SymmetryPhase::PlusI, 1.0), (SymmetryPhase::MinusI, -1.0)] {
                let combo = (&p_sym.matrix().scale(Complex64::from_polar(1.0, sign * quarter))
                    + &p_anti.matrix().scale(Complex64::from_polar(1.0, -sign * quarter)))
                    .scale(c(1.0 / 2.0_f64.sqrt(), 0.0));
                assert!(combo.distance(symmetry_op(j, d).matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn trivial_clone_of_maximally_mixed() {
        let t = trivial_clone(&DensityMatrix::maximally_mixed(2));
        let expected = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        assert!(t.matrix().distance(&expected) < 1e-14);
    }

    #[test]
    fn trivial_clone_reduced_state() {
        let t = trivial_clone(&h());
        let reduced = t.reduced(Mode::A);
        assert!((reduced.get(0, 0) - c(0.75, 0.0)).norm() < 1e-14);
        assert!((reduced.get(1, 1) - c(0.25, 0.0)).norm() < 1e-14);
        assert!(reduced.get(0, 1).norm() < 1e-14);
    }

    #[test]
    fn trivial_clone_properties_random() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let rho = random_density(3, &mut rng);
        let t = trivial_clone(&rho);
        assert!((t.trace() - c(1.0, 0.0)).norm() < 1e-12);
        // Both reduced states equal rho/2 + I/(2d).
        let expected = &rho.matrix().scale(c(0.5, 0.0))
            + &ComplexMatrix::identity(3).scale(c(1.0 / 6.0, 0.0));
        assert!(t.reduced(Mode::A).distance(&expected) < 1e-12);
        assert!(t.reduced(Mode::B).distance(&expected) < 1e-12);
    }

    #[test]
    fn optimal_clone_reduced_state_hits_the_bound() {
        let o = optimal_clone(&h(), SymmetryPhase::PlusOne);
        let reduced = o.reduced(Mode::A);
        assert!((reduced.get(0, 0) - c(5.0 / 6.0, 0.0)).norm() < 1e-13);
        assert!((reduced.get(1, 1) - c(1.0 / 6.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn optimal_clone_traces() {
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        // Unit trace for j = +1 is the normalization-consistency anchor.
        let o = optimal_clone(&h(), SymmetryPhase::PlusOne);
        assert!((o.trace() - c(1.0, 0.0)).norm() < 1e-13);
        // Trace 2/3 for j = +-i at d = 2, and (d + Re j)/(d+1) in general.
        let oi = optimal_clone(&random_density(2, &mut rng), SymmetryPhase::PlusI);
        assert!((oi.trace() - c(2.0 / 3.0, 0.0)).norm() < 1e-12);
        for d in [2, 3, 5] {
            let rho = random_density(d, &mut rng);
            for j in SymmetryPhase::ALL {
                let expected = (d as f64 + j.value().re) / (d as f64 + 1.0);
                let tr = optimal_clone(&rho, j).trace();
                assert!((tr - c(expected, 0.0)).norm() < 1e-12, "d={d} j={}", j.label());
            }
        }
    }

    #[test]
    fn optimal_clone_of_maximally_mixed_brute_force() {
        // o = (2/3) P^{+1} (I/2 (x) I) P^{+1} has unit trace.
        let o = optimal_clone(&DensityMatrix::maximally_mixed(2), SymmetryPhase::PlusOne);
        let p = symmetry_op(SymmetryPhase::PlusOne, 2);
        let expected = p
            .matrix()
            .matmul(&ComplexMatrix::identity(4).scale(c(0.5, 0.0)))
            .matmul(p.matrix())
            .scale(c(2.0 / 3.0, 0.0));
        assert!(o.matrix().distance(&expected) < 1e-14);
        assert!((o.trace() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn clone_decomposition_into_trivial_and_twins() {
        // o^j = (2/3) t + (1/3)(j c + j* c!)/2 for qubits, all four phases.
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        for _ in 0..10 {
            let rho = random_density(2, &mut rng);
            let t = trivial_clone(&rho);
            let twins = twins_operator(&rho);
            for j in SymmetryPhase::ALL {
                let o = optimal_clone(&rho, j);
                let coherent = (&twins.matrix().scale(j.value())
                    + &twins.matrix().adjoint().scale(j.conj()))
                    .scale(c(0.5, 0.0));
                let rebuilt = &t.matrix().scale(c(2.0 / 3.0, 0.0))
                    + &coherent.scale(c(1.0 / 3.0, 0.0));
                assert!(o.matrix().distance(&rebuilt) < 1e-12, "j = {}", j.label());
            }
        }
    }

    #[test]
    fn reduced_clones_are_mode_symmetric() {
        let mut rng = ChaCha12Rng::seed_from_u64(34);
        let rho = random_density(2, &mut rng);
        let o = optimal_clone(&rho, SymmetryPhase::PlusOne);
        assert!(o.reduced(Mode::A).distance(&o.reduced(Mode::B)) < 1e-12);
    }

    #[test]
    fn twins_of_maximally_mixed_is_half_swap() {
        let twins = twins_operator(&DensityMatrix::maximally_mixed(2));
        let expected = swap_operator(2).matrix().scale(c(0.5, 0.0));
        assert!(twins.matrix().distance(&expected) < 1e-14);
        assert!((twins.trace() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn twins_trace_is_one_for_random_input() {
        let mut rng = ChaCha12Rng::seed_from_u64(35);
        let twins = twins_operator(&random_density(4, &mut rng));
        assert!((twins.trace() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn twins_measurement_contract() {
        // Tr[(d (x) h) (c + c!)/2] = Re <dh>_h = 0.5.
        let d_proj = Ket::from_unnormalized(vec![c(1.0, 0.0), c(1.0, 0.0)])
            .unwrap()
            .projector();
        let h_proj = Ket::basis_state(2, 0).projector();
        let twins = twins_operator(&h());
        let re_part = (&twins.matrix().clone() + &twins.matrix().adjoint()).scale(c(0.5, 0.0));
        let value = tensor_product(&d_proj, &h_proj).trace_product(&re_part);
        assert!((value - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn partial_clone_endpoints_and_linearity() {
        let mut rng = ChaCha12Rng::seed_from_u64(36);
        let rho = random_density(2, &mut rng);
        let j = SymmetryPhase::PlusOne;
        let o = optimal_clone(&rho, j);
        let t = trivial_clone(&rho);

        let at_one = partial_clone(&rho, j, DistinguishabilityFactor::new(1.0).unwrap());
        assert!(at_one.matrix().distance(o.matrix()) < 1e-14);

        let at_zero = partial_clone(&rho, j, DistinguishabilityFactor::new(0.0).unwrap());
        assert!(at_zero.matrix().distance(t.matrix()) < 1e-14);

        let mid = partial_clone(&h(), j, DistinguishabilityFactor::new(0.5).unwrap());
        assert!((mid.trace() - c(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn distinguishability_range_is_enforced() {
        assert!(DistinguishabilityFactor::new(-0.1).is_err());
        assert!(DistinguishabilityFactor::new(1.1).is_err());
        assert!(DistinguishabilityFactor::new(f64::NAN).is_err());
    }

    #[test]
    fn clone_fidelity_matches_closed_form() {
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        // Paper anchor 5/6 at d = 2, plus the qudit formula 1/2 + 1/(d+1).
        assert!((clone_fidelity(&random_ket(2, &mut rng)) - 5.0 / 6.0).abs() < 1e-12);
        assert!((clone_fidelity(&random_ket(3, &mut rng)) - 0.75).abs() < 1e-12);
        assert!((clone_fidelity(&random_ket(8, &mut rng)) - (0.5 + 1.0 / 9.0)).abs() < 1e-12);
    }

    #[test]
    fn clone_fidelity_is_input_independent() {
        let mut rng = ChaCha12Rng::seed_from_u64(38);
        let target = 5.0 / 6.0;
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let f = clone_fidelity(&random_ket(2, &mut rng));
            worst = worst.max((f - target).abs());
        }
        assert!(worst < 1e-12, "max deviation {worst:.3e}");
    }

    #[test]
    fn phase_labels_round_trip() {
        for j in SymmetryPhase::ALL {
            assert_eq!(SymmetryPhase::from_label(j.label()), Some(j));
        }
        assert_eq!(SymmetryPhase::from_label("+2"), None);
    }
}
