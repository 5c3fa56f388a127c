//! The five pipeline commands and their JSON/CSV emitters.
//!
//! CSV output is RFC-4180 (CRLF, header row always present) with floats at 17
//! significant digits; fit results and the echoed seed ride in trailing
//! `#`-prefixed footer lines so the data region stays machine-parseable.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use crate::cloner::clone_fidelity;
use crate::jointmeas::{fourier_mub, joint_prob, quasi_dist_direct, MubPair, QuasiDist};
use crate::photonics::{
    delay_scan_quasiprob, hom_dip, qwp_state, run_experiment, DelayScan, PhotonSpectrum,
};
use crate::qmath::random::{random_density, random_ket};
use crate::qmath::DensityMatrix;
use crate::tomography::{
    density_from_dist, fidelity, mle_fit, wavefunction_from_dist, TomographyError,
};
use crate::cloner::SymmetryPhase;
use crate::photonics::quasi_from_counts;

use super::config::{ComplexPair, ExperimentConfig};
use super::CliError;

const ROUNDTRIP_TOL: f64 = 1e-10;

/// 17 significant digits, locale-free.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_from_rows(header: &[&str], rows: &[Vec<String>], footer: &[String]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push_str("\r\n");
    for row in rows {
        out.push_str(&row.join(","));
        out.push_str("\r\n");
    }
    for line in footer {
        out.push_str(line);
        out.push_str("\r\n");
    }
    out
}

fn outcome_labels(d: usize) -> (Vec<String>, Vec<String>) {
    if d == 2 {
        (
            vec!["d".to_string(), "a".to_string()],
            vec!["h".to_string(), "v".to_string()],
        )
    } else {
        (
            (0..d).map(|i| format!("x{i}")).collect(),
            (0..d).map(|j| format!("y{j}")).collect(),
        )
    }
}

fn grid_of_pairs(values: &[Complex64], d: usize) -> Vec<Vec<ComplexPair>> {
    (0..d)
        .map(|x| (0..d).map(|y| values[x * d + y].into()).collect())
        .collect()
}

fn matrix_to_pairs(m: &crate::qmath::ComplexMatrix) -> Vec<Vec<ComplexPair>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).into()).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorPair {
    pub re_err: f64,
    pub im_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WavefunctionDoc {
    pub reference_row: usize,
    pub norm_constant: f64,
    pub amplitudes: Vec<ComplexPair>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FidelityDoc {
    /// Fidelity of the maximum-likelihood estimate to the configured state.
    pub mle_vs_input: f64,
    /// |<psi_est|psi_in>|^2 when both are pure and the readout succeeded.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavefunction_vs_input: Option<f64>,
    /// Frobenius distance of the raw linear inversion from the input.
    pub raw_vs_input_frobenius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossChecks {
    /// Channel-trace and closed-form joint probabilities agreed to 1e-10.
    pub dual_route_pass: bool,
    /// Frobenius residual of inversion(direct distribution) against the input.
    pub roundtrip_residual: f64,
    pub roundtrip_pass: bool,
    /// Total of the measured quasi-distribution (1 for exact pipelines).
    pub quasi_total: ComplexPair,
}

#[derive(Debug, Clone, Serialize)]
pub struct RuntimeMeta {
    pub tool_version: String,
    pub elapsed_ms: u64,
    pub sampling: bool,
    pub seed: u64,
}

/// Full output of `reconstruct`: self-contained and re-runnable from the
/// echoed config.
#[derive(Debug, Clone, Serialize)]
pub struct ResultDocument {
    pub config: ExperimentConfig,
    pub x_labels: Vec<String>,
    pub y_labels: Vec<String>,
    pub quasi_distribution: Vec<Vec<ComplexPair>>,
    pub quasi_errors: Vec<Vec<ErrorPair>>,
    pub wavefunction: Option<WavefunctionDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavefunction_note: Option<String>,
    pub density_raw: Vec<Vec<ComplexPair>>,
    pub density_mle: Vec<Vec<ComplexPair>>,
    pub fidelities: FidelityDoc,
    pub cross_checks: CrossChecks,
    pub runtime: RuntimeMeta,
}

impl ResultDocument {
    pub fn to_csv(&self) -> String {
        let d = self.x_labels.len();
        let mut rows = Vec::new();
        for x in 0..d {
            for y in 0..d {
                let value = &self.quasi_distribution[x][y];
                let err = &self.quasi_errors[x][y];
                rows.push(vec![
                    self.x_labels[x].clone(),
                    self.y_labels[y].clone(),
                    fmt_float(value.re),
                    fmt_float(value.im),
                    fmt_float(err.re_err),
                    fmt_float(err.im_err),
                ]);
            }
        }
        let footer = vec![format!("# seed={}", self.runtime.seed)];
        csv_from_rows(&["x", "y", "re", "im", "re_err", "im_err"], &rows, &footer)
    }
}

fn verify_cross_checks(
    state: &DensityMatrix,
    mub: &MubPair,
    measured: &QuasiDist,
) -> Result<CrossChecks, CliError> {
    // Dual-route check: joint_prob errors out if its channel-trace and
    // closed-form values disagree.
    for j in SymmetryPhase::ALL {
        joint_prob(state, j, mub)?;
    }
    let exact = quasi_dist_direct(state, mub);
    let raw = density_from_dist(&exact);
    let residual = raw.matrix().distance(state.matrix());
    let checks = CrossChecks {
        dual_route_pass: true,
        roundtrip_residual: residual,
        roundtrip_pass: residual < ROUNDTRIP_TOL,
        quasi_total: measured.total().into(),
    };
    if !checks.roundtrip_pass {
        return Err(CliError::CrossCheck(format!(
            "tomographic round trip residual {residual:.3e} exceeds {ROUNDTRIP_TOL:.1e}"
        )));
    }
    Ok(checks)
}

/// Clone, jointly measure, phase-cycle, and reconstruct the configured state.
pub fn cmd_reconstruct(config: &ExperimentConfig) -> Result<ResultDocument, CliError> {
    let start = std::time::Instant::now();
    let seed = config.seed.expect("seed resolved by the caller");
    let d = config.dimension;
    let state = config.build_state()?;
    let mub = fourier_mub(d);
    let spectrum = PhotonSpectrum::new(config.delta_omega, 0.0)?;

    let records = run_experiment(
        &state,
        &mub,
        config.mean_counts,
        seed,
        config.visibility,
        config.tau,
        &spectrum,
        config.sampling,
    )?;
    let (dist, errors) =
        quasi_from_counts(&records, config.mean_counts, d, !config.sampling)?;

    let (wavefunction, wavefunction_note, wf_fidelity) =
        match wavefunction_from_dist(&dist, 0) {
            Ok(est) => {
                let overlap = if state.purity() >= 1.0 - 1e-10 {
                    let psi = state.dominant_eigenvector();
                    Some(est.ket().inner(&psi).norm_sqr())
                } else {
                    None
                };
                (
                    Some(WavefunctionDoc {
                        reference_row: est.reference_row(),
                        norm_constant: est.norm_constant(),
                        amplitudes: est.ket().amplitudes().iter().map(|&z| z.into()).collect(),
                    }),
                    None,
                    overlap,
                )
            }
            Err(e @ TomographyError::UnusablePhaseReference { .. }) => {
                (None, Some(e.to_string()), None)
            }
            Err(other) => return Err(other.into()),
        };

    let raw = density_from_dist(&dist);
    let mle = mle_fit(&records, &mub)?;
    let fidelities = FidelityDoc {
        mle_vs_input: fidelity(&state, &mle)?.value,
        wavefunction_vs_input: wf_fidelity,
        raw_vs_input_frobenius: raw.matrix().distance(state.matrix()),
    };
    let cross_checks = verify_cross_checks(&state, &mub, &dist)?;

    let (x_labels, y_labels) = outcome_labels(d);
    let mut echoed = config.clone();
    echoed.seed = Some(seed);
    Ok(ResultDocument {
        config: echoed,
        x_labels,
        y_labels,
        quasi_distribution: grid_of_pairs(dist.values(), d),
        quasi_errors: (0..d)
            .map(|x| {
                (0..d)
                    .map(|y| ErrorPair {
                        re_err: errors[x * d + y].0,
                        im_err: errors[x * d + y].1,
                    })
                    .collect()
            })
            .collect(),
        wavefunction,
        wavefunction_note,
        density_raw: matrix_to_pairs(raw.matrix()),
        density_mle: matrix_to_pairs(mle.matrix()),
        fidelities,
        cross_checks,
        runtime: RuntimeMeta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: start.elapsed().as_millis() as u64,
            sampling: config.sampling,
            seed,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DelayRow {
    pub tau: f64,
    pub re_est: f64,
    pub im_est: f64,
    pub re_err: f64,
    pub im_err: f64,
    pub re_theory: f64,
    pub im_theory: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DelayScanDocument {
    pub config: ExperimentConfig,
    pub x_index: usize,
    pub y_index: usize,
    pub rows: Vec<DelayRow>,
    pub runtime: RuntimeMeta,
}

impl DelayScanDocument {
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    fmt_float(r.tau),
                    fmt_float(r.re_est),
                    fmt_float(r.im_est),
                    fmt_float(r.re_err),
                    fmt_float(r.im_err),
                    fmt_float(r.re_theory),
                    fmt_float(r.im_theory),
                ]
            })
            .collect();
        let footer = vec![format!("# seed={}", self.runtime.seed)];
        csv_from_rows(
            &["tau", "re_est", "im_est", "re_err", "im_err", "re_theory", "im_theory"],
            &rows,
            &footer,
        )
    }
}

/// Scan the delay stage across the trivial-to-optimal cloning transition for
/// one quasiprobability entry; the theory columns carry the Gaussian law.
pub fn cmd_delay_scan(config: &ExperimentConfig) -> Result<DelayScanDocument, CliError> {
    let start = std::time::Instant::now();
    let seed = config.seed.expect("seed resolved by the caller");
    let d = config.dimension;
    if config.x_index >= d || config.y_index >= d {
        return Err(CliError::Config(format!(
            "scan entry ({}, {}) is outside the {d}x{d} outcome grid",
            config.x_index, config.y_index
        )));
    }
    let state = config.build_state()?;
    let mub = fourier_mub(d);
    let spectrum = PhotonSpectrum::new(config.delta_omega, 0.0)?;
    let taus = config.tau_range.unwrap_or_default().taus();

    let scan = DelayScan {
        taus: taus.clone(),
        state: state.clone(),
        mean_counts: config.mean_counts,
        seed,
        visibility: config.visibility,
        sampling: config.sampling,
    };
    let points = delay_scan_quasiprob(&scan, &spectrum, &mub, config.x_index, config.y_index)?;
    let exact = quasi_dist_direct(&state, &mub).value(config.x_index, config.y_index);

    let rows = points
        .iter()
        .map(|p| {
            let gauss = config.visibility
                * (-0.5 * (config.delta_omega * p.tau).powi(2)).exp();
            DelayRow {
                tau: p.tau,
                re_est: p.estimate.re,
                im_est: p.estimate.im,
                re_err: p.re_err,
                im_err: p.im_err,
                re_theory: gauss * exact.re,
                im_theory: gauss * exact.im,
            }
        })
        .collect();
    let mut echoed = config.clone();
    echoed.seed = Some(seed);
    Ok(DelayScanDocument {
        config: echoed,
        x_index: config.x_index,
        y_index: config.y_index,
        rows,
        runtime: RuntimeMeta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: start.elapsed().as_millis() as u64,
            sampling: config.sampling,
            seed,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WpRow {
    pub theta_deg: f64,
    pub re_alpha: f64,
    pub im_alpha: f64,
    pub abs_alpha_sq: f64,
    pub abs_beta_sq: f64,
    pub re_alpha_err: f64,
    pub im_alpha_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WpScanDocument {
    pub config: ExperimentConfig,
    pub rows: Vec<WpRow>,
    pub mle_average_fidelity: f64,
    pub runtime: RuntimeMeta,
}

impl WpScanDocument {
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    fmt_float(r.theta_deg),
                    fmt_float(r.re_alpha),
                    fmt_float(r.im_alpha),
                    fmt_float(r.abs_alpha_sq),
                    fmt_float(r.abs_beta_sq),
                    fmt_float(r.re_alpha_err),
                    fmt_float(r.im_alpha_err),
                ]
            })
            .collect();
        let footer = vec![
            format!("# mle_average_fidelity={}", fmt_float(self.mle_average_fidelity)),
            format!("# seed={}", self.runtime.seed),
        ];
        csv_from_rows(
            &[
                "theta_deg",
                "re_alpha",
                "im_alpha",
                "abs_alpha_sq",
                "abs_beta_sq",
                "re_alpha_err",
                "im_alpha_err",
            ],
            &rows,
            &footer,
        )
    }
}

/// Wave-plate scan: prepare qwp(theta) for each angle, reconstruct the wave
/// function through the full pipeline, and report alpha = <h|psi>.
///
/// Scan point k uses the RNG stream seeded with seed + k.
pub fn cmd_wp_scan(config: &ExperimentConfig) -> Result<WpScanDocument, CliError> {
    let start = std::time::Instant::now();
    let seed = config.seed.expect("seed resolved by the caller");
    if config.thetas_deg.is_empty() {
        return Err(CliError::Config("thetas_deg must be non-empty".to_string()));
    }
    if config.dimension != 2 {
        return Err(CliError::Config(
            "wp-scan prepares polarization qubits; set dimension to 2".to_string(),
        ));
    }
    let mub = fourier_mub(2);
    let spectrum = PhotonSpectrum::new(config.delta_omega, 0.0)?;
    let mut rows = Vec::with_capacity(config.thetas_deg.len());
    let mut fidelity_total = 0.0;
    for (k, &theta_deg) in config.thetas_deg.iter().enumerate() {
        let theta = theta_deg.to_radians();
        let state = DensityMatrix::pure(&qwp_state(theta));
        let records = run_experiment(
            &state,
            &mub,
            config.mean_counts,
            seed.wrapping_add(k as u64),
            config.visibility,
            config.tau,
            &spectrum,
            config.sampling,
        )?;
        let (dist, errors) =
            quasi_from_counts(&records, config.mean_counts, 2, !config.sampling)?;
        let est = wavefunction_from_dist(&dist, 0)?;
        let alpha = est.amplitude(0);
        let beta = est.amplitude(1);
        // First-order error propagation through psi(y) = D(0, y)/nu at fixed nu.
        let (re_err, im_err) = errors[0];
        rows.push(WpRow {
            theta_deg,
            re_alpha: alpha.re,
            im_alpha: alpha.im,
            abs_alpha_sq: alpha.norm_sqr(),
            abs_beta_sq: beta.norm_sqr(),
            re_alpha_err: re_err / est.norm_constant(),
            im_alpha_err: im_err / est.norm_constant(),
        });
        let estimate = mle_fit(&records, &mub)?;
        fidelity_total += fidelity(&state, &estimate)?.value;
    }
    let mle_average_fidelity = fidelity_total / config.thetas_deg.len() as f64;
    let mut echoed = config.clone();
    echoed.seed = Some(seed);
    Ok(WpScanDocument {
        config: echoed,
        rows,
        mle_average_fidelity,
        runtime: RuntimeMeta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: start.elapsed().as_millis() as u64,
            sampling: config.sampling,
            seed,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HomRow {
    pub tau: f64,
    pub expected: f64,
    pub sampled: u64,
    pub err: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HomFit {
    pub visibility: f64,
    pub delta_omega: f64,
    pub baseline: f64,
    /// (C_max - C_min)/(C_max + C_min) of the fitted curve, V/(2 - V).
    pub contrast: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HomDipDocument {
    pub config: ExperimentConfig,
    pub rows: Vec<HomRow>,
    /// Fit of the noiseless model curve C(tau) = B (1 - V exp(-w^2 tau^2/2)).
    pub fit: HomFit,
    pub runtime: RuntimeMeta,
}

impl HomDipDocument {
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    fmt_float(r.tau),
                    fmt_float(r.expected),
                    r.sampled.to_string(),
                    fmt_float(r.err),
                ]
            })
            .collect();
        let footer = vec![
            format!("# fitted_visibility={}", fmt_float(self.fit.visibility)),
            format!("# fitted_delta_omega={}", fmt_float(self.fit.delta_omega)),
            format!("# fitted_baseline={}", fmt_float(self.fit.baseline)),
            format!("# fitted_contrast={}", fmt_float(self.fit.contrast)),
            format!("# seed={}", self.runtime.seed),
        ];
        csv_from_rows(&["tau", "expected", "sampled", "err"], &rows, &footer)
    }
}

/// Hong-Ou-Mandel dip scan with a model fit in the footer.
pub fn cmd_hom_dip(config: &ExperimentConfig) -> Result<HomDipDocument, CliError> {
    let start = std::time::Instant::now();
    let seed = config.seed.expect("seed resolved by the caller");
    let spectrum = PhotonSpectrum::new(config.delta_omega, 0.0)?;
    let taus = config.tau_range.unwrap_or_default().taus();
    let records = hom_dip(&taus, &spectrum, config.visibility, config.mean_counts, seed)?;
    let rows: Vec<HomRow> = taus
        .iter()
        .zip(records.iter())
        .map(|(&tau, r)| HomRow {
            tau,
            expected: r.mean,
            sampled: r.counts,
            err: (r.counts as f64).sqrt(),
        })
        .collect();
    let expected: Vec<f64> = rows.iter().map(|r| r.expected).collect();
    let fit = fit_hom_dip(&taus, &expected);
    let mut echoed = config.clone();
    echoed.seed = Some(seed);
    Ok(HomDipDocument {
        config: echoed,
        rows,
        fit,
        runtime: RuntimeMeta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: start.elapsed().as_millis() as u64,
            sampling: config.sampling,
            seed,
        },
    })
}

/// Least-squares fit of C(tau) = B (1 - V exp(-w^2 tau^2 / 2)).
///
/// For fixed w the model is linear in (B, BV), so the search is a
/// one-dimensional scan over w refined by golden-section; deterministic and
/// exact on noiseless input.
pub fn fit_hom_dip(taus: &[f64], values: &[f64]) -> HomFit {
    assert_eq!(taus.len(), values.len());
    assert!(taus.len() >= 3, "need at least three points to fit the dip");

    let sse_at = |w: f64| -> (f64, f64, f64) {
        let n = taus.len() as f64;
        let mut sg = 0.0;
        let mut sgg = 0.0;
        let mut sy = 0.0;
        let mut sgy = 0.0;
        for (&tau, &y) in taus.iter().zip(values.iter()) {
            let g = (-0.5 * (w * tau).powi(2)).exp();
            sg += g;
            sgg += g * g;
            sy += y;
            sgy += g * y;
        }
        let denom = sgg - sg * sg / n;
        let (amplitude, baseline) = if denom.abs() < 1e-12 {
            (0.0, sy / n)
        } else {
            let a = (sg * sy / n - sgy) / denom;
            (a, (sy + a * sg) / n)
        };
        let mut sse = 0.0;
        for (&tau, &y) in taus.iter().zip(values.iter()) {
            let g = (-0.5 * (w * tau).powi(2)).exp();
            let model = baseline - amplitude * g;
            sse += (y - model) * (y - model);
        }
        (sse, baseline, amplitude)
    };

    let tau_scale = taus
        .iter()
        .map(|t| t.abs())
        .fold(0.0f64, f64::max)
        .max(1e-9);
    // Coarse log-grid bracket, then golden-section refinement.
    let grid: Vec<f64> = (0..=600)
        .map(|k| (10.0f64).powf(-3.0 + 6.0 * k as f64 / 600.0) / tau_scale)
        .collect();
    let mut best = 0usize;
    let mut best_sse = f64::INFINITY;
    for (k, &w) in grid.iter().enumerate() {
        let (sse, _, _) = sse_at(w);
        if sse < best_sse {
            best_sse = sse;
            best = k;
        }
    }
    let mut lo = grid[best.saturating_sub(1)].ln();
    let mut hi = grid[(best + 1).min(grid.len() - 1)].ln();
    let golden = (5.0f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = hi - golden * (hi - lo);
        let m2 = lo + golden * (hi - lo);
        if sse_at(m1.exp()).0 <= sse_at(m2.exp()).0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let w = ((lo + hi) / 2.0).exp();
    let (_, baseline, amplitude) = sse_at(w);
    let visibility = if baseline.abs() < 1e-300 {
        0.0
    } else {
        amplitude / baseline
    };
    HomFit {
        visibility,
        delta_omega: w,
        baseline,
        contrast: visibility / (2.0 - visibility),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub d: usize,
    pub analytic_fidelity: f64,
    pub measured_fidelity: f64,
    pub max_fidelity_deviation: f64,
    pub roundtrip_residual: f64,
    /// Experimental settings needed for the direct readout: 4 phases x d outcomes.
    pub settings: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FidelityBenchDocument {
    pub config: ExperimentConfig,
    pub rows: Vec<BenchRow>,
    pub runtime: RuntimeMeta,
}

impl FidelityBenchDocument {
    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.d.to_string(),
                    fmt_float(r.analytic_fidelity),
                    fmt_float(r.measured_fidelity),
                    fmt_float(r.max_fidelity_deviation),
                    fmt_float(r.roundtrip_residual),
                    r.settings.to_string(),
                ]
            })
            .collect();
        let footer = vec![format!("# seed={}", self.runtime.seed)];
        csv_from_rows(
            &[
                "d",
                "analytic_fidelity",
                "measured_fidelity",
                "max_fidelity_deviation",
                "roundtrip_residual",
                "settings",
            ],
            &rows,
            &footer,
        )
    }
}

/// Per-dimension clone-fidelity and reconstruction benchmark over random
/// states.
pub fn cmd_fidelity_bench(config: &ExperimentConfig) -> Result<FidelityBenchDocument, CliError> {
    let start = std::time::Instant::now();
    let seed = config.seed.expect("seed resolved by the caller");
    if config.dims.iter().any(|&d| !(2..=8).contains(&d)) {
        return Err(CliError::Config(
            "fidelity-bench dimensions must lie in 2..=8".to_string(),
        ));
    }
    if config.trials == 0 {
        return Err(CliError::Config("trials must be at least 1".to_string()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(config.dims.len());
    for &d in &config.dims {
        let analytic = 0.5 + 1.0 / (d as f64 + 1.0);
        let mut total = 0.0;
        let mut max_dev = 0.0f64;
        for _ in 0..config.trials {
            let f = clone_fidelity(&random_ket(d, &mut rng));
            total += f;
            max_dev = max_dev.max((f - analytic).abs());
        }
        let mub = fourier_mub(d);
        let mut roundtrip = 0.0f64;
        for _ in 0..config.trials {
            let rho = random_density(d, &mut rng);
            let raw = density_from_dist(&quasi_dist_direct(&rho, &mub));
            roundtrip = roundtrip.max(raw.matrix().distance(rho.matrix()));
        }
        rows.push(BenchRow {
            d,
            analytic_fidelity: analytic,
            measured_fidelity: total / config.trials as f64,
            max_fidelity_deviation: max_dev,
            roundtrip_residual: roundtrip,
            settings: 4 * d,
        });
    }
    let mut echoed = config.clone();
    echoed.seed = Some(seed);
    Ok(FidelityBenchDocument {
        config: echoed,
        rows,
        runtime: RuntimeMeta {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            elapsed_ms: start.elapsed().as_millis() as u64,
            sampling: false,
            seed,
        },
    })
}
