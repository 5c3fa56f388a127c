//! Config-file schema and input-state parsing.
//!
//! A single JSON document (schema_version 1) drives every command; CLI flags
//! override individual fields with precedence flags > file > defaults.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::photonics::qwp_state;
use crate::qmath::{ComplexMatrix, DensityMatrix, Ket};

use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Complex number serialized as a {"re": .., "im": ..} pair to avoid dialect
/// ambiguity.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct ComplexPair {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexPair {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<ComplexPair> for Complex64 {
    fn from(p: ComplexPair) -> Self {
        Complex64::new(p.re, p.im)
    }
}

/// Input state: a qubit preset name, `qwp:<degrees>`, raw pure amplitudes, or
/// a full density matrix.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum InputState {
    Named(String),
    Pure { pure: Vec<ComplexPair> },
    Density { density: Vec<Vec<ComplexPair>> },
}

impl Default for InputState {
    fn default() -> Self {
        InputState::Named("h".to_string())
    }
}

/// Inclusive delay range, sampled at `points` equally spaced values.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct TauRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl TauRange {
    pub fn taus(&self) -> Vec<f64> {
        let n = self.points.max(2);
        (0..n)
            .map(|k| self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64)
            .collect()
    }
}

impl Default for TauRange {
    fn default() -> Self {
        Self {
            start: -6.0,
            stop: 6.0,
            points: 50,
        }
    }
}

fn default_dimension() -> usize {
    2
}

fn default_mean_counts() -> f64 {
    1e4
}

fn default_visibility() -> f64 {
    1.0
}

fn default_delta_omega() -> f64 {
    1.0
}

fn default_sampling() -> bool {
    true
}

fn default_thetas_deg() -> Vec<f64> {
    // 18 wave-plate angles in 10-degree increments.
    (0..18).map(|k| 10.0 * k as f64).collect()
}

fn default_dims() -> Vec<usize> {
    (2..=8).collect()
}

fn default_trials() -> usize {
    100
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

/// Everything a command needs, deserializable from a single JSON document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    #[serde(default)]
    pub input_state: InputState,
    #[serde(default = "default_mean_counts")]
    pub mean_counts: f64,
    /// Omitted seeds are generated at run time and echoed into the output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_visibility")]
    pub visibility: f64,
    #[serde(default = "default_delta_omega")]
    pub delta_omega: f64,
    #[serde(default)]
    pub tau: f64,
    #[serde(default)]
    pub tau_range: Option<TauRange>,
    #[serde(default = "default_sampling")]
    pub sampling: bool,
    /// Wave-plate fast-axis angles for `wp-scan`, in degrees.
    #[serde(default = "default_thetas_deg")]
    pub thetas_deg: Vec<f64>,
    /// Quasiprobability entry scanned by `delay-scan`.
    #[serde(default)]
    pub x_index: usize,
    #[serde(default)]
    pub y_index: usize,
    /// Dimensions and trials for `fidelity-bench`.
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {})",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        if self.dimension < 2 || self.dimension > 32 {
            return Err(CliError::Config(format!(
                "dimension {} is outside the supported range 2..=32",
                self.dimension
            )));
        }
        if !self.mean_counts.is_finite() || self.mean_counts <= 0.0 {
            return Err(CliError::Config(format!(
                "mean_counts must be positive, got {}",
                self.mean_counts
            )));
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(CliError::Config(format!(
                "visibility {} is outside [0, 1]",
                self.visibility
            )));
        }
        if !self.delta_omega.is_finite() || self.delta_omega <= 0.0 {
            return Err(CliError::Config(format!(
                "delta_omega must be positive, got {}",
                self.delta_omega
            )));
        }
        Ok(())
    }

    /// Resolve the configured input state into a density matrix, warning and
    /// renormalizing if pure amplitudes deviate from unit norm by more than
    /// 1e-6.
    pub fn build_state(&self) -> Result<DensityMatrix, CliError> {
        match &self.input_state {
            InputState::Named(name) => build_named_state(name, self.dimension),
            InputState::Pure { pure } => {
                if pure.len() != self.dimension {
                    return Err(CliError::Config(format!(
                        "pure state has {} amplitudes but dimension is {}",
                        pure.len(),
                        self.dimension
                    )));
                }
                let amplitudes: Vec<Complex64> = pure.iter().map(|&p| p.into()).collect();
                let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
                if (norm_sq.sqrt() - 1.0).abs() > 1e-6 {
                    eprintln!(
                        "warning: input state norm deviates from 1 by {:.3e}; renormalizing",
                        (norm_sq.sqrt() - 1.0).abs()
                    );
                }
                let ket = Ket::from_unnormalized(amplitudes)
                    .map_err(|e| CliError::Config(format!("invalid pure state: {e}")))?;
                Ok(DensityMatrix::pure(&ket))
            }
            InputState::Density { density } => {
                let d = self.dimension;
                if density.len() != d || density.iter().any(|row| row.len() != d) {
                    return Err(CliError::Config(format!(
                        "density matrix must be {d}x{d}"
                    )));
                }
                let matrix = ComplexMatrix::from_fn(d, d, |i, j| density[i][j].into());
                DensityMatrix::new(matrix)
                    .map_err(|e| CliError::Config(format!("invalid density matrix: {e}")))
            }
        }
    }
}

/// Qubit polarization presets and the `qwp:<degrees>` family.
fn build_named_state(name: &str, dimension: usize) -> Result<DensityMatrix, CliError> {
    if let Some(angle) = name.strip_prefix("qwp:") {
        let degrees: f64 = angle
            .parse()
            .map_err(|_| CliError::Config(format!("cannot parse wave-plate angle in {name:?}")))?;
        if dimension != 2 {
            return Err(CliError::Config(
                "qwp states are qubit presets; set dimension to 2".to_string(),
            ));
        }
        return Ok(DensityMatrix::pure(&qwp_state(degrees.to_radians())));
    }
    if dimension != 2 {
        return Err(CliError::Config(format!(
            "preset {name:?} is a qubit state; set dimension to 2 or pass amplitudes"
        )));
    }
    let s = 1.0 / 2.0f64.sqrt();
    let c = Complex64::new;
    let amplitudes = match name {
        "h" => vec![c(1.0, 0.0), c(0.0, 0.0)],
        "v" => vec![c(0.0, 0.0), c(1.0, 0.0)],
        "d" => vec![c(s, 0.0), c(s, 0.0)],
        "a" => vec![c(s, 0.0), c(-s, 0.0)],
        // r = (|v> + i|h>)/sqrt(2), l = (|v> - i|h>)/sqrt(2).
        "r" => vec![c(0.0, s), c(s, 0.0)],
        "l" => vec![c(0.0, -s), c(s, 0.0)],
        other => {
            return Err(CliError::Config(format!(
                "unknown input_state {other:?} (expected h/v/d/a/r/l, qwp:<deg>, \
                 pure amplitudes, or a density matrix)"
            )))
        }
    };
    Ok(DensityMatrix::pure(
        &Ket::new(amplitudes).expect("presets are normalized"),
    ))
}
