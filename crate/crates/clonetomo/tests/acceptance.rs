//! Acceptance suite: one test per exit criterion, each printing a pass/fail
//! line with its runtime (run with `-- --nocapture` to see all lines).

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use clonetomo::cli::commands::fit_hom_dip;
use clonetomo::cloner::{clone_fidelity, SymmetryPhase};
use clonetomo::jointmeas::{
    fourier_mub, joint_prob, phase_cycle, quasi_dist_direct, quasi_dist_via_cloning,
    trivial_joint_prob, JointProbTable,
};
use clonetomo::photonics::{
    delay_scan_quasiprob, hom_dip, qwp_state, run_experiment, DelayScan, PhotonSpectrum,
};
use clonetomo::qmath::random::{random_density, random_ket};
use clonetomo::qmath::{DensityMatrix, Ket};
use clonetomo::tomography::{density_from_dist, fidelity, mle_fit, wavefunction_from_dist};

fn report(number: u32, pass: bool, started: Instant, budget_s: f64, detail: &str) {
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion {number:02} {} ({elapsed:.2} s / budget {budget_s:.0} s): {detail}",
        if pass { "PASS" } else { "FAIL" },
    );
    assert!(pass, "criterion {number} failed: {detail}");
    assert!(
        elapsed < budget_s,
        "criterion {number} exceeded its {budget_s} s runtime budget ({elapsed:.2} s)"
    );
}

fn h_state() -> DensityMatrix {
    DensityMatrix::pure(&Ket::basis_state(2, 0))
}

fn unit_spectrum() -> PhotonSpectrum {
    PhotonSpectrum::new(1.0, 0.0).unwrap()
}

#[test]
fn criterion_01_quasiprobability_target_value() {
    let started = Instant::now();
    let mub = fourier_mub(2);
    let dist = quasi_dist_via_cloning(&h_state(), &mub).unwrap();
    let dh = dist.value(0, 0);
    let deviation = (dh - Complex64::new(0.5, 0.0)).norm();
    report(
        1,
        deviation <= 1e-12,
        started,
        1.0,
        &format!("noiseless <dh> = {:.3e} + {:.3e}i, |dev| = {deviation:.3e}", dh.re, dh.im),
    );
}

#[test]
fn criterion_02_trivial_clone_cancellation() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(1002);
    let mub = fourier_mub(2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let rho = random_density(2, &mut rng);
        let trivial = trivial_joint_prob(&rho, &mub).unwrap();
        let tables: Vec<JointProbTable> = SymmetryPhase::ALL
            .iter()
            .map(|&j| trivial.with_phase(j))
            .collect();
        let dist = phase_cycle(&tables).unwrap();
        for value in dist.values() {
            worst = worst.max(value.norm());
        }
    }
    report(
        2,
        worst <= 1e-12,
        started,
        1.0,
        &format!("phase-cycled trivial tables: max |D| = {worst:.3e}"),
    );
}

#[test]
fn criterion_03_gaussian_transition_law() {
    let started = Instant::now();
    let mub = fourier_mub(2);
    let taus: Vec<f64> = (0..50).map(|k| -6.0 + 12.0 * k as f64 / 49.0).collect();
    let scan = DelayScan::noiseless(taus, h_state());
    let zero_delay = quasi_dist_direct(&h_state(), &mub);
    let mut worst = 0.0f64;
    // Entrywise: every (x, y) entry scales by the Gaussian; <dh> itself is
    // 0.5 exp(-tau^2/2).
    for x in 0..2 {
        for y in 0..2 {
            let points = delay_scan_quasiprob(&scan, &unit_spectrum(), &mub, x, y).unwrap();
            for point in &points {
                let gauss = (-0.5 * point.tau * point.tau).exp();
                let expected = zero_delay.value(x, y) * gauss;
                worst = worst.max((point.estimate - expected).norm());
            }
        }
    }
    report(
        3,
        worst <= 1e-12,
        started,
        5.0,
        &format!("50 delays in [-6, 6], all entries: max |est - gauss * D(0)| = {worst:.3e}"),
    );
}

#[test]
fn criterion_04_clone_fidelity_bound() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(1004);
    let mut worst = 0.0f64;
    for d in 2..=8 {
        let target = 0.5 + 1.0 / (d as f64 + 1.0);
        for _ in 0..100 {
            let f = clone_fidelity(&random_ket(d, &mut rng));
            worst = worst.max((f - target).abs());
        }
    }
    report(
        4,
        worst <= 1e-12,
        started,
        30.0,
        &format!("700 random pure states, d in 2..=8: max |F - 1/2 - 1/(d+1)| = {worst:.3e}"),
    );
}

#[test]
fn criterion_05_phase_cycling_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(1005);
    let mut worst = 0.0f64;
    for d in [2usize, 3, 4, 5, 8] {
        let mub = fourier_mub(d);
        for _ in 0..100 {
            let rho = random_density(d, &mut rng);
            let cycled = quasi_dist_via_cloning(&rho, &mub).unwrap();
            let direct = quasi_dist_direct(&rho, &mub);
            for x in 0..d {
                for y in 0..d {
                    worst = worst.max((cycled.value(x, y) - direct.value(x, y)).norm());
                }
            }
        }
    }
    report(
        5,
        worst <= 1e-12,
        started,
        60.0,
        &format!("100 mixed states x d in {{2,3,4,5,8}}: max |cycled - trace(xy rho)| = {worst:.3e}"),
    );
}

#[test]
fn criterion_06_tomographic_round_trip() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(1005);
    let mut worst = 0.0f64;
    for d in [2usize, 3, 4, 5, 8] {
        let mub = fourier_mub(d);
        for _ in 0..100 {
            let rho = random_density(d, &mut rng);
            let raw = density_from_dist(&quasi_dist_direct(&rho, &mub));
            worst = worst.max(raw.matrix().distance(rho.matrix()));
        }
    }
    report(
        6,
        worst < 1e-10,
        started,
        30.0,
        &format!("inversion of the direct distribution: max Frobenius residual = {worst:.3e}"),
    );
}

#[test]
fn criterion_07_wavefunction_scan() {
    let started = Instant::now();
    let mub = fourier_mub(2);
    let mut worst = 0.0f64;
    for k in 0..18 {
        let theta = (10.0 * k as f64).to_radians();
        let rho = DensityMatrix::pure(&qwp_state(theta));
        let dist = quasi_dist_via_cloning(&rho, &mub).unwrap();
        let est = wavefunction_from_dist(&dist, 0).unwrap();
        let alpha = est.amplitude(0);
        let expected = Complex64::new(
            (0.375 * (4.0 * theta).cos() + 0.625).sqrt(),
            theta.sin() * theta.cos(),
        );
        let expected_mod = theta.cos().powi(4) + theta.sin().powi(4);
        worst = worst.max((alpha - expected).norm());
        worst = worst.max((alpha.norm_sqr() - expected_mod).abs());
    }
    report(
        7,
        worst <= 1e-10,
        started,
        5.0,
        &format!("18-point wave-plate scan: max deviation from alpha(theta) = {worst:.3e}"),
    );
}

#[test]
fn criterion_08_statistical_reconstruction() {
    let started = Instant::now();
    let mub = fourier_mub(2);
    let spectrum = unit_spectrum();
    let mut total = 0.0;
    for k in 0..18 {
        let theta = (10.0 * k as f64).to_radians();
        let truth = DensityMatrix::pure(&qwp_state(theta));
        let records =
            run_experiment(&truth, &mub, 1e4, 2000 + k as u64, 1.0, 0.0, &spectrum, true).unwrap();
        let estimate = mle_fit(&records, &mub).unwrap();
        total += fidelity(&truth, &estimate).unwrap().value;
    }
    let average = total / 18.0;
    report(
        8,
        average >= 0.99,
        started,
        120.0,
        &format!("Poisson 1e4/setting, 18 wave-plate states: MLE average fidelity = {average:.5}"),
    );
}

#[test]
fn criterion_09_hom_dip_fit() {
    let started = Instant::now();
    let spectrum = unit_spectrum();
    let taus: Vec<f64> = (0..81).map(|k| -5.0 + 10.0 * k as f64 / 80.0).collect();
    let records = hom_dip(&taus, &spectrum, 0.96, 1e4, 1009).unwrap();
    let expected: Vec<f64> = records.iter().map(|r| r.mean).collect();
    let fit = fit_hom_dip(&taus, &expected);
    let vis_err = (fit.visibility - 0.96).abs();
    let width_err = (fit.delta_omega - 1.0).abs();
    report(
        9,
        vis_err <= 0.005 && width_err <= 0.01,
        started,
        5.0,
        &format!(
            "noiseless dip fit: visibility {:.5} (err {vis_err:.2e}), delta_omega {:.5} (err {width_err:.2e})",
            fit.visibility, fit.delta_omega
        ),
    );
}

#[test]
fn criterion_10_subnormalization_invariant() {
    let started = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(1010);
    let mut worst = 0.0f64;
    for d in 2..=8 {
        let mub = fourier_mub(d);
        for _ in 0..10 {
            let rho = random_density(d, &mut rng);
            for j in SymmetryPhase::ALL {
                let expected = (d as f64 + j.value().re) / (d as f64 + 1.0);
                let total = joint_prob(&rho, j, &mub).unwrap().total();
                worst = worst.max((total - expected).abs());
            }
        }
    }
    report(
        10,
        worst <= 1e-10,
        started,
        10.0,
        &format!("sum_xy Prob^j vs (d + Re j)/(d+1), d in 2..=8: max deviation = {worst:.3e}"),
    );
}
