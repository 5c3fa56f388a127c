//! Mutually unbiased measurement bases, joint outcome probabilities on the
//! clones, and phase-cycled isolation of the Dirac quasiprobability.
//!
//! The Y basis is the computational basis and the X basis is its Fourier
//! partner, `<x_i|y_j> = exp(i 2 pi i j / d) / sqrt(d)`. For qubits this is
//! the polarization assignment X in {d, a} with
//! |d> = (|h> + |v>)/sqrt(2), |a> = (|h> - |v>)/sqrt(2), and Y in {h, v}.

use num_complex::Complex64;

use crate::cloner::{optimal_clone, trivial_clone, SymmetryPhase, TwoModeOperator};
use crate::qmath::{tensor_product, ComplexMatrix, DensityMatrix, Ket};

#[derive(Debug, thiserror::Error)]
pub enum JointMeasError {
    #[error("dimension mismatch: state has d = {state}, basis has d = {basis}")]
    DimensionMismatch { state: usize, basis: usize },
    #[error(
        "channel-trace and closed-form joint probabilities disagree by {defect:.3e} \
         at setting (j = {phase}, x = {x}, y = {y})"
    )]
    CrossCheckFailed {
        phase: &'static str,
        x: usize,
        y: usize,
        defect: f64,
    },
    #[error("phase cycling needs exactly one table per phase, got {got} tables")]
    WrongTableCount { got: usize },
    #[error("phase cycling is missing the table for j = {phase}")]
    MissingPhase { phase: &'static str },
    #[error("phase cycling received more than one table for j = {phase}")]
    DuplicatePhase { phase: &'static str },
    #[error("tables passed to phase cycling have inconsistent dimensions")]
    InconsistentTables,
}

/// Eigenbases of the two complementary observables X and Y.
#[derive(Debug, Clone)]
pub struct MubPair {
    dim: usize,
    x_basis: Vec<Ket>,
    y_basis: Vec<Ket>,
}

impl MubPair {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn x_basis(&self) -> &[Ket] {
        &self.x_basis
    }

    pub fn y_basis(&self) -> &[Ket] {
        &self.y_basis
    }

    pub fn x_projector(&self, i: usize) -> ComplexMatrix {
        self.x_basis[i].projector()
    }

    pub fn y_projector(&self, j: usize) -> ComplexMatrix {
        self.y_basis[j].projector()
    }
}

/// Fourier-related MUB pair in dimension d.
pub fn fourier_mub(d: usize) -> MubPair {
    assert!(d >= 2, "fourier_mub requires d >= 2");
    let y_basis: Vec<Ket> = (0..d).map(|j| Ket::basis_state(d, j)).collect();
    let norm = 1.0 / (d as f64).sqrt();
    let x_basis: Vec<Ket> = (0..d)
        .map(|i| {
            // <x_i|y_j> = exp(i 2 pi i j / d)/sqrt(d), so the amplitude of
            // |x_i> on |y_j> is the conjugate phase.
            let amplitudes: Vec<Complex64> = (0..d)
                .map(|j| {
                    let phase = -2.0 * std::f64::consts::PI * (i as f64) * (j as f64) / (d as f64);
                    Complex64::from_polar(norm, phase)
                })
                .collect();
            Ket::new(amplitudes).expect("Fourier basis vectors are unit norm")
        })
        .collect();
    MubPair { dim: d, x_basis, y_basis }
}

/// Joint outcome probabilities Prob^j(x, y), one table per cloner phase.
///
/// Entries are post-selected event probabilities and may be sub-normalized;
/// the total is (d + Re j)/(d + 1) for exact tables. Row index is the X
/// outcome, column index the Y outcome.
#[derive(Debug, Clone)]
pub struct JointProbTable {
    phase: SymmetryPhase,
    dim: usize,
    probs: Vec<f64>,
}

impl JointProbTable {
    /// Build from row-major probabilities. Entries must be >= -1e-12.
    pub fn new(phase: SymmetryPhase, dim: usize, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), dim * dim, "table must be d x d");
        assert!(
            probs.iter().all(|p| p.is_finite() && *p >= -1e-12),
            "probabilities must be finite and non-negative"
        );
        Self { phase, dim, probs }
    }

    pub fn phase(&self) -> SymmetryPhase {
        self.phase
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.dim + y]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Same probabilities reported under a different phase label. Used when
    /// feeding trivial-clone tables (which are phase-independent) through the
    /// cycling sum.
    pub fn with_phase(&self, phase: SymmetryPhase) -> Self {
        Self {
            phase,
            dim: self.dim,
            probs: self.probs.clone(),
        }
    }
}

/// Dirac quasiprobability distribution D_ij = <x_i y_j>_rho.
///
/// Complex-valued; entries may have negative real part or nonzero imaginary
/// part. For exact distributions the total is 1 and the marginals are the
/// real Born probabilities of X and Y.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiDist {
    dim: usize,
    values: Vec<Complex64>,
}

impl QuasiDist {
    pub fn new(dim: usize, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), dim * dim, "distribution must be d x d");
        assert!(
            values.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "quasiprobabilities must be finite"
        );
        Self { dim, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, x: usize, y: usize) -> Complex64 {
        self.values[x * self.dim + y]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn total(&self) -> Complex64 {
        self.values.iter().sum()
    }

    /// sum_j D_ij, the X-outcome marginal.
    pub fn x_marginal(&self, i: usize) -> Complex64 {
        (0..self.dim).map(|j| self.value(i, j)).sum()
    }

    /// sum_i D_ij, the Y-outcome marginal.
    pub fn y_marginal(&self, j: usize) -> Complex64 {
        (0..self.dim).map(|i| self.value(i, j)).sum()
    }
}

/// Tr[(x (x) y) op] for every MUB outcome pair, labeled with `phase`.
///
/// This is the raw channel-trace measurement on an arbitrary two-mode state;
/// `joint_prob` wraps it with the closed-form cross-check for optimal clones.
pub fn joint_prob_on(
    op: &TwoModeOperator,
    phase: SymmetryPhase,
    mub: &MubPair,
) -> Result<JointProbTable, JointMeasError> {
    let d = mub.dim();
    if op.dim_per_mode() != d {
        return Err(JointMeasError::DimensionMismatch {
            state: op.dim_per_mode(),
            basis: d,
        });
    }
    let mut probs = Vec::with_capacity(d * d);
    for x in 0..d {
        let x_proj = mub.x_projector(x);
        for y in 0..d {
            let setting = tensor_product(&x_proj, &mub.y_projector(y));
            probs.push(setting.trace_product(op.matrix()).re);
        }
    }
    Ok(JointProbTable::new(phase, d, probs))
}

/// <x_i y_j>_rho = Tr(x y rho), the complex expectation entering the
/// closed-form probabilities.
fn quasi_value(rho: &DensityMatrix, mub: &MubPair, x: usize, y: usize) -> Complex64 {
    let xi = &mub.x_basis()[x];
    let yj = &mub.y_basis()[y];
    // Tr(x y rho) = <x|y><y|rho|x>.
    let overlap = xi.inner(yj);
    let d = mub.dim();
    let mut sandwich = Complex64::new(0.0, 0.0);
    for r in 0..d {
        for c in 0..d {
            sandwich += yj.amplitude(r).conj() * rho.matrix().get(r, c) * xi.amplitude(c);
        }
    }
    overlap * sandwich
}

/// Joint probabilities of measuring X on clone a and Y on clone b of the
/// optimal cloner output o^j.
///
/// Computed two independent ways -- the channel trace Tr[(x (x) y) o^j] and
/// the closed form (<x> + <y> + 2 Re(j <xy>)) / (2(d+1)) -- which must agree
/// to 1e-10. The dual route guards the cloner normalization convention.
pub fn joint_prob(
    rho: &DensityMatrix,
    j: SymmetryPhase,
    mub: &MubPair,
) -> Result<JointProbTable, JointMeasError> {
    let d = mub.dim();
    if rho.dim() != d {
        return Err(JointMeasError::DimensionMismatch {
            state: rho.dim(),
            basis: d,
        });
    }
    let channel = joint_prob_on(&optimal_clone(rho, j), j, mub)?;
    let prefactor = 1.0 / (2.0 * (d as f64 + 1.0));
    for x in 0..d {
        let x_expect = rho.expectation(&mub.x_projector(x));
        for y in 0..d {
            let y_expect = rho.expectation(&mub.y_projector(y));
            let cross = quasi_value(rho, mub, x, y);
            let closed = prefactor * (x_expect + y_expect + 2.0 * (j.value() * cross).re);
            let defect = (channel.prob(x, y) - closed).abs();
            if defect > 1e-10 {
                return Err(JointMeasError::CrossCheckFailed {
                    phase: j.label(),
                    x,
                    y,
                    defect,
                });
            }
        }
    }
    Ok(channel)
}

/// Joint probabilities on trivial clones: Tr[(x (x) y) t] =
/// (<x> + <y>)/(2d), i.e. (Prob(x) + Prob(y))/4 for qubits.
///
/// The result is phase-independent; it is labeled j = +1 and can be relabeled
/// with [`JointProbTable::with_phase`] when cycling.
pub fn trivial_joint_prob(
    rho: &DensityMatrix,
    mub: &MubPair,
) -> Result<JointProbTable, JointMeasError> {
    if rho.dim() != mub.dim() {
        return Err(JointMeasError::DimensionMismatch {
            state: rho.dim(),
            basis: mub.dim(),
        });
    }
    joint_prob_on(&trivial_clone(rho), SymmetryPhase::PlusOne, mub)
}

/// Isolate the Dirac quasiprobability by phase cycling:
/// D(x, y) = ((d+1)/2) sum_j j* Prob^j(x, y).
///
/// The trivial-clone contribution cancels because sum_j j* = 0; what survives
/// is the twins' term. Requires exactly one table per phase.
pub fn phase_cycle(tables: &[JointProbTable]) -> Result<QuasiDist, JointMeasError> {
    if tables.len() != 4 {
        return Err(JointMeasError::WrongTableCount { got: tables.len() });
    }
    let dim = tables[0].dim();
    if tables.iter().any(|t| t.dim() != dim) {
        return Err(JointMeasError::InconsistentTables);
    }
    for j in SymmetryPhase::ALL {
        match tables.iter().filter(|t| t.phase() == j).count() {
            0 => return Err(JointMeasError::MissingPhase { phase: j.label() }),
            1 => {}
            _ => return Err(JointMeasError::DuplicatePhase { phase: j.label() }),
        }
    }
    let prefactor = (dim as f64 + 1.0) / 2.0;
    let mut values = vec![Complex64::new(0.0, 0.0); dim * dim];
    for table in tables {
        let weight = table.phase().conj() * prefactor;
        for x in 0..dim {
            for y in 0..dim {
                values[x * dim + y] += weight * table.prob(x, y);
            }
        }
    }
    Ok(QuasiDist::new(dim, values))
}

/// Independent oracle for the quasiprobability:
/// D_ij = <x_i|y_j><y_j|rho|x_i> by direct sandwiching.
pub fn quasi_dist_direct(rho: &DensityMatrix, mub: &MubPair) -> QuasiDist {
    assert_eq!(rho.dim(), mub.dim(), "dimension mismatch");
    let d = mub.dim();
    let mut values = Vec::with_capacity(d * d);
    for x in 0..d {
        for y in 0..d {
            values.push(quasi_value(rho, mub, x, y));
        }
    }
    QuasiDist::new(d, values)
}

/// Run all four cloner phases on `rho` and phase-cycle the exact tables.
pub fn quasi_dist_via_cloning(
    rho: &DensityMatrix,
    mub: &MubPair,
) -> Result<QuasiDist, JointMeasError> {
    let tables: Vec<JointProbTable> = SymmetryPhase::ALL
        .iter()
        .map(|&j| joint_prob(rho, j, mub))
        .collect::<Result<_, _>>()?;
    phase_cycle(&tables)
}
