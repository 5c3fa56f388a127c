//! Optimal quantum cloning of qudits and phase-cycled joint measurements on
//! the clones: recovery of the Dirac quasiprobability distribution, the wave
//! function, and the density matrix of an input state, plus a
//! photonic-experiment emulation layer (Hong-Ou-Mandel interference,
//! wave-plate preparation, Poissonian coincidence counting).
//!
//! The cloner maps an input `rho` and a blank ancilla through the symmetry
//! operation `P^j = (I + jS)/2`. Measuring one complementary observable on
//! each clone and cycling the phase `j` over the fourth roots of unity
//! cancels the trivial-clone background and isolates `<xy>_rho = Tr(xy rho)`,
//! a complex joint quasiprobability that determines the state completely:
//! any row of it is a cross-section of the wave function, and its inverse
//! Fourier transform is the density matrix.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! - `reconstruct_state` - full noiseless pipeline from cloning to wave
//!   function and density matrix
//! - `delay_scan` - trivial-to-optimal cloning transition with Poisson
//!   counting statistics
//! - `waveplate_scan` - direct wave-function readout across a quarter-wave
//!   plate rotation
//! - `hom_dip` - Hong-Ou-Mandel dip simulation and visibility/width fit
//! - `clone_fidelity_bound` - universal 1/2 + 1/(d+1) clone fidelity across
//!   dimensions
//! - `noisy_tomography` - maximum-likelihood reconstruction vs raw linear
//!   inversion at several count levels
//! - `qudit_reconstruction` - the same 4d-setting readout for a qudit
//!
//! ```bash
//! cargo run --example reconstruct_state
//! ```
//!
//! The `clonetomo` binary exposes the same pipelines as config-driven
//! subcommands (`reconstruct`, `delay-scan`, `wp-scan`, `hom-dip`,
//! `fidelity-bench`) emitting JSON and CSV.

pub mod cli;
pub mod cloner;
pub mod jointmeas;
pub mod photonics;
pub mod qmath;
pub mod tomography;
