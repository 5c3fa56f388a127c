//! End-to-end state determination on noiseless statistics: clone the input,
//! jointly measure the two complementary observables on the clones, cycle the
//! four interferometer phases, and read off the wave function and density
//! matrix.
//!
//! Run with: cargo run --example reconstruct_state

use clonetomo::jointmeas::{fourier_mub, quasi_dist_via_cloning};
use clonetomo::photonics::qwp_state;
use clonetomo::qmath::DensityMatrix;
use clonetomo::tomography::{density_from_dist, wavefunction_from_dist};

fn main() {
    // An elliptical polarization state prepared by a wave plate at 30 degrees.
    let theta = 30f64.to_radians();
    let psi = qwp_state(theta);
    let rho = DensityMatrix::pure(&psi);
    let mub = fourier_mub(2);

    let dist = quasi_dist_via_cloning(&rho, &mub).expect("exact pipeline");

    println!("Dirac quasiprobability <xy> over x in {{d,a}}, y in {{h,v}}:");
    let labels = ["d", "a"];
    let y_labels = ["h", "v"];
    for (x, xl) in labels.iter().enumerate() {
        for (y, yl) in y_labels.iter().enumerate() {
            let v = dist.value(x, y);
            println!("  <{xl}{yl}> = {:+.6} {:+.6}i", v.re, v.im);
        }
    }

    // Any row with weight is a cross-section of the wave function; the |d>
    // row is the conventional phase reference.
    let est = wavefunction_from_dist(&dist, 0).expect("d-row has weight");
    println!("\nwave function in the {{h, v}} basis (nu = {:.6}):", est.norm_constant());
    for (y, yl) in y_labels.iter().enumerate() {
        let a = est.amplitude(y);
        println!("  psi({yl}) = {:+.6} {:+.6}i", a.re, a.im);
    }
    let overlap = est.ket().inner(&psi).norm_sqr();
    println!("  |<psi_est|psi_true>|^2 = {overlap:.12}");

    // The inverse Fourier transform of the distribution is the density matrix.
    let raw = density_from_dist(&dist);
    println!("\ndensity matrix from the inverse transform:");
    for i in 0..2 {
        let r0 = raw.matrix().get(i, 0);
        let r1 = raw.matrix().get(i, 1);
        println!("  [{:+.6} {:+.6}i, {:+.6} {:+.6}i]", r0.re, r0.im, r1.re, r1.im);
    }
    let residual = raw.matrix().distance(rho.matrix());
    println!("  Frobenius residual vs input: {residual:.3e}");
}
