//! State recovery from a measured quasiprobability distribution or from raw
//! coincidence counts: direct wave-function readout, density-matrix inversion
//! by inverse Fourier transform, maximum-likelihood fitting, and fidelity.

use num_complex::Complex64;

use crate::cloner::SymmetryPhase;
use crate::jointmeas::{JointMeasError, MubPair, QuasiDist};
use crate::photonics::CountRecord;
use crate::qmath::{
    eig_hermitian, reconstruct, sqrt_psd, ComplexMatrix, DensityMatrix, Ket, QmathError,
};

const MLE_MAX_ITERATIONS: usize = 10_000;
const MLE_LOGLIK_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum TomographyError {
    #[error(
        "row x0 = {x0} of the distribution is numerically zero: \
         unusable phase reference"
    )]
    UnusablePhaseReference { x0: usize },
    #[error("reference row {x0} is outside the distribution (d = {dim})")]
    ReferenceOutOfRange { x0: usize, dim: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("count set is empty")]
    EmptyCounts,
    #[error("count set is missing the setting (j = {phase}, x = {x}, y = {y})")]
    MissingSetting { phase: &'static str, x: usize, y: usize },
    #[error("count set has a duplicate record for (j = {phase}, x = {x}, y = {y})")]
    DuplicateSetting { phase: &'static str, x: usize, y: usize },
    #[error("all counts for phase j = {phase} are zero")]
    ZeroCountsForPhase { phase: &'static str },
    #[error("likelihood became non-finite after {iterations} iterations")]
    NumericalFailure { iterations: usize },
    #[error(transparent)]
    Qmath(#[from] QmathError),
    #[error(transparent)]
    JointMeas(#[from] JointMeasError),
}

/// Wave function read directly from one row of the quasiprobability
/// distribution, expressed in the Y basis.
#[derive(Debug, Clone)]
pub struct WavefunctionEstimate {
    reference_row: usize,
    norm_constant: f64,
    ket: Ket,
}

impl WavefunctionEstimate {
    pub fn reference_row(&self) -> usize {
        self.reference_row
    }

    /// The real, positive normalization constant nu.
    pub fn norm_constant(&self) -> f64 {
        self.norm_constant
    }

    pub fn ket(&self) -> &Ket {
        &self.ket
    }

    pub fn amplitude(&self, y: usize) -> Complex64 {
        self.ket.amplitude(y)
    }
}

/// Direct wave-function readout: psi(y) is proportional to D(x0, y).
///
/// The known MUB phase exp(i 2 pi x0 y / d) of the reference row is divided
/// out, so any row with non-vanishing weight works as a phase reference; for
/// the default x0 = 0 (the |d> row for qubits) the correction is the
/// identity and this is the bare cycling sum. The normalization constant
/// nu = sqrt(sum_y |D(x0, y)|^2) is real positive by convention, which fixes
/// the global phase.
pub fn wavefunction_from_dist(
    dist: &QuasiDist,
    x0: usize,
) -> Result<WavefunctionEstimate, TomographyError> {
    let d = dist.dim();
    if x0 >= d {
        return Err(TomographyError::ReferenceOutOfRange { x0, dim: d });
    }
    let row: Vec<Complex64> = (0..d).map(|y| dist.value(x0, y)).collect();
    let weight: f64 = row.iter().map(|z| z.norm_sqr()).sum();
    if weight <= 1e-12 {
        return Err(TomographyError::UnusablePhaseReference { x0 });
    }
    let nu = weight.sqrt();
    let amplitudes: Vec<Complex64> = row
        .iter()
        .enumerate()
        .map(|(y, value)| {
            let phase = -2.0 * std::f64::consts::PI * (x0 as f64) * (y as f64) / (d as f64);
            value * Complex64::from_polar(1.0, phase) / nu
        })
        .collect();
    let ket = Ket::new(amplitudes).expect("row is normalized by nu");
    Ok(WavefunctionEstimate {
        reference_row: x0,
        norm_constant: nu,
        ket,
    })
}

/// Linear-inversion density matrix: Hermitian and unit trace for exact input
/// but possibly indefinite when built from noisy counts, hence "raw".
#[derive(Debug, Clone)]
pub struct RawDensity {
    matrix: ComplexMatrix,
}

impl RawDensity {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Validate as a physical density matrix without any repair.
    pub fn into_physical(self) -> Result<DensityMatrix, QmathError> {
        DensityMatrix::new(self.matrix)
    }

    /// Nearest physical state: eigenvalues are Euclidean-projected onto the
    /// probability simplex and the operator is rebuilt.
    pub fn project_physical(&self) -> Result<DensityMatrix, QmathError> {
        let (eigenvalues, eigenvectors) = eig_hermitian(&self.matrix)?;
        let projected = project_to_simplex(&eigenvalues);
        let matrix = reconstruct(&projected, &eigenvectors);
        DensityMatrix::new(matrix)
    }
}

/// Euclidean projection of a real vector onto {p_i >= 0, sum p_i = 1}.
fn project_to_simplex(values: &[f64]) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k as f64 + 1.0);
        if u - candidate > 0.0 {
            threshold = candidate;
        }
    }
    values.iter().map(|&u| (u - threshold).max(0.0)).collect()
}

/// Invert the quasiprobability into a density matrix in the Y basis:
/// p_jl = sum_i D_ij exp(i 2 pi x_i (y_l - y_j) / d), then hermitize.
///
/// Exact input reproduces the state exactly; noisy input is returned raw for
/// inspection, with PSD repair left to the maximum-likelihood path.
pub fn density_from_dist(dist: &QuasiDist) -> RawDensity {
    let d = dist.dim();
    let mut matrix = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        for l in 0..d {
            let mut p = Complex64::new(0.0, 0.0);
            for i in 0..d {
                let phase = 2.0 * std::f64::consts::PI * (i as f64) * (l as f64 - j as f64)
                    / (d as f64);
                p += dist.value(i, j) * Complex64::from_polar(1.0, phase);
            }
            matrix.set(j, l, p);
        }
    }
    RawDensity {
        matrix: matrix.hermitize(),
    }
}

/// One forward-model element: the effective Hermitian operator E with
/// Prob^j(x, y) = Tr(rho E).
fn model_operator(j: SymmetryPhase, x: usize, y: usize, mub: &MubPair) -> ComplexMatrix {
    let d = mub.dim();
    let x_proj = mub.x_projector(x);
    let y_proj = mub.y_projector(y);
    let xy = x_proj.matmul(&y_proj);
    let sum = &(&x_proj + &y_proj) + &(&xy.scale(j.value()) + &xy.adjoint().scale(j.conj()));
    sum.scale(Complex64::new(1.0 / (2.0 * (d as f64 + 1.0)), 0.0))
}

struct MleProblem {
    /// POVM rescaled by (d+1)/(4d) so the elements sum to the identity.
    povm: Vec<ComplexMatrix>,
    /// Observed frequencies aligned with `povm`.
    frequencies: Vec<f64>,
    dim: usize,
    total_counts: f64,
}

impl MleProblem {
    fn build(counts: &[CountRecord], mub: &MubPair) -> Result<Self, TomographyError> {
        if counts.is_empty() {
            return Err(TomographyError::EmptyCounts);
        }
        let d = mub.dim();
        let mut grid: Vec<Option<u64>> = vec![None; 4 * d * d];
        let phase_slot = |j: SymmetryPhase| {
            SymmetryPhase::ALL
                .iter()
                .position(|&p| p == j)
                .expect("all phases enumerate")
        };
        for record in counts {
            if record.x_index >= d || record.y_index >= d {
                return Err(TomographyError::DimensionMismatch {
                    left: record.x_index.max(record.y_index) + 1,
                    right: d,
                });
            }
            let slot = (phase_slot(record.phase) * d + record.x_index) * d + record.y_index;
            if grid[slot].is_some() {
                return Err(TomographyError::DuplicateSetting {
                    phase: record.phase.label(),
                    x: record.x_index,
                    y: record.y_index,
                });
            }
            grid[slot] = Some(record.counts);
        }
        let mut povm = Vec::with_capacity(4 * d * d);
        let mut observed = Vec::with_capacity(4 * d * d);
        let rescale = Complex64::new((d as f64 + 1.0) / (4.0 * d as f64), 0.0);
        for (slot_j, &j) in SymmetryPhase::ALL.iter().enumerate() {
            let mut phase_total = 0u64;
            for x in 0..d {
                for y in 0..d {
                    let slot = (slot_j * d + x) * d + y;
                    let n = grid[slot].ok_or(TomographyError::MissingSetting {
                        phase: j.label(),
                        x,
                        y,
                    })?;
                    phase_total += n;
                    povm.push(model_operator(j, x, y, mub).scale(rescale));
                    observed.push(n as f64);
                }
            }
            if phase_total == 0 {
                return Err(TomographyError::ZeroCountsForPhase { phase: j.label() });
            }
        }
        let total_counts: f64 = observed.iter().sum();
        let frequencies = observed.iter().map(|n| n / total_counts).collect();
        Ok(Self {
            povm,
            frequencies,
            dim: d,
            total_counts,
        })
    }

    fn probabilities(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.povm
            .iter()
            .map(|e| e.trace_product(rho).re.max(1e-300))
            .collect()
    }

    /// Normalized log-likelihood sum_s f_s ln p_s(rho).
    fn log_likelihood(&self, probs: &[f64]) -> f64 {
        self.frequencies
            .iter()
            .zip(probs.iter())
            .filter(|(f, _)| **f > 0.0)
            .map(|(f, p)| f * p.ln())
            .sum()
    }

    /// R(rho) = sum_s (f_s / p_s) E_s.
    fn r_operator(&self, probs: &[f64]) -> ComplexMatrix {
        let mut r = ComplexMatrix::zeros(self.dim, self.dim);
        for ((f, p), e) in self.frequencies.iter().zip(probs.iter()).zip(self.povm.iter()) {
            if *f > 0.0 {
                r = &r + &e.scale(Complex64::new(f / p, 0.0));
            }
        }
        r
    }

    /// Linear inversion of the same counts, projected to the physical simplex.
    fn fallback(&self) -> Result<DensityMatrix, TomographyError> {
        let d = self.dim;
        // The POVM totals are fixed by the model, so the per-setting scale can
        // be inferred from the grand total: sum_s Prob_s = 4d/(d+1).
        let scale = self.total_counts * (d as f64 + 1.0) / (4.0 * d as f64);
        let prefactor = (d as f64 + 1.0) / 2.0;
        let mut values = vec![Complex64::new(0.0, 0.0); d * d];
        for (slot_j, &j) in SymmetryPhase::ALL.iter().enumerate() {
            let weight = j.conj() * prefactor;
            for x in 0..d {
                for y in 0..d {
                    let slot = (slot_j * d + x) * d + y;
                    let n = self.frequencies[slot] * self.total_counts;
                    values[x * d + y] += weight * (n / scale);
                }
            }
        }
        let dist = QuasiDist::new(d, values);
        Ok(density_from_dist(&dist).project_physical()?)
    }
}

/// Maximum-likelihood reconstruction from a complete set of coincidence
/// counts under the optimal-clone forward model.
///
/// Iterates the R rho R fixed point on the multinomial likelihood, with step
/// dilution whenever a full step would decrease the likelihood, stopping when
/// the normalized log-likelihood improves by less than 1e-10 or after 1e4
/// iterations. The iterate is then scored against the direct linear-inversion
/// estimate (eigenvalues truncated onto the physical simplex) and the
/// higher-likelihood candidate wins; the inversion route both guarantees
/// termination and covers the flat likelihood tail near rank-deficient
/// optima, where the fixed point crawls. Deterministic for identical input;
/// the output always satisfies the density-matrix invariants.
pub fn mle_fit(counts: &[CountRecord], mub: &MubPair) -> Result<DensityMatrix, TomographyError> {
    let problem = MleProblem::build(counts, mub)?;
    let d = problem.dim;
    let identity = ComplexMatrix::identity(d);
    let mut rho = identity.scale(Complex64::new(1.0 / d as f64, 0.0));
    let mut probs = problem.probabilities(&rho);
    let mut loglik = problem.log_likelihood(&probs);

    for iteration in 0..MLE_MAX_ITERATIONS {
        if !loglik.is_finite() {
            return Err(TomographyError::NumericalFailure { iterations: iteration });
        }
        let r = problem.r_operator(&probs);
        let mut accepted = false;
        // Full R rho R step first, then diluted steps (I + eps R) rho (I + eps R)
        // if the likelihood would decrease.
        let full = {
            let candidate = r.matmul(&rho).matmul(&r).hermitize();
            let trace = candidate.trace().re;
            candidate.scale(Complex64::new(1.0 / trace, 0.0))
        };
        let full_probs = problem.probabilities(&full);
        let full_loglik = problem.log_likelihood(&full_probs);
        let (mut next, mut next_probs, mut next_loglik) = (full, full_probs, full_loglik);
        if next_loglik >= loglik {
            accepted = true;
        } else {
            let mut eps = 0.5;
            for _ in 0..40 {
                let damped = &identity + &r.scale(Complex64::new(eps, 0.0));
                let candidate = damped.matmul(&rho).matmul(&damped).hermitize();
                let trace = candidate.trace().re;
                let candidate = candidate.scale(Complex64::new(1.0 / trace, 0.0));
                let candidate_probs = problem.probabilities(&candidate);
                let candidate_loglik = problem.log_likelihood(&candidate_probs);
                if candidate_loglik >= loglik {
                    next = candidate;
                    next_probs = candidate_probs;
                    next_loglik = candidate_loglik;
                    accepted = true;
                    break;
                }
                eps *= 0.5;
            }
        }
        if !accepted {
            // No ascent direction left at floating precision.
            break;
        }
        let improvement = next_loglik - loglik;
        rho = next;
        probs = next_probs;
        loglik = next_loglik;
        if improvement < MLE_LOGLIK_TOL {
            break;
        }
    }

    let iterate = DensityMatrix::new(rho)?;
    let fallback = problem.fallback()?;
    let fallback_loglik = problem.log_likelihood(&problem.probabilities(fallback.matrix()));
    if fallback_loglik > loglik {
        Ok(fallback)
    } else {
        Ok(iterate)
    }
}

/// Which fidelity formula was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FidelityKind {
    PureVsMixed,
    MixedVsMixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub value: f64,
    pub kind: FidelityKind,
}

const PURITY_TOL: f64 = 1e-10;

/// Fidelity between two states.
///
/// If either input is pure this is the sandwich <psi|rho|psi>; otherwise the
/// Uhlmann form (Tr sqrt(sqrt(a) b sqrt(a)))^2.
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<FidelityReport, TomographyError> {
    if a.dim() != b.dim() {
        return Err(TomographyError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let (pure, mixed, is_pure) = if a.purity() >= 1.0 - PURITY_TOL {
        (a, b, true)
    } else if b.purity() >= 1.0 - PURITY_TOL {
        (b, a, true)
    } else {
        (a, b, false)
    };
    let value = if is_pure {
        let psi = pure.dominant_eigenvector();
        psi.expectation(mixed.matrix()).re
    } else {
        let root = sqrt_psd(a.matrix())?;
        let inner = root.matmul(b.matrix()).matmul(&root).hermitize();
        let (eigenvalues, _) = eig_hermitian(&inner)?;
        let trace_root: f64 = eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
        trace_root * trace_root
    };
    Ok(FidelityReport {
        value: value.max(0.0),
        kind: if is_pure {
            FidelityKind::PureVsMixed
        } else {
            FidelityKind::MixedVsMixed
        },
    })
}
