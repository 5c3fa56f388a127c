//! Hong-Ou-Mandel interference: simulate the coincidence dip that calibrates
//! the photons' spectral width and the cloner's visibility, then fit it back.
//!
//! Run with: cargo run --example hom_dip

use clonetomo::cli::commands::fit_hom_dip;
use clonetomo::photonics::{hom_dip, PhotonSpectrum};

fn main() {
    let spectrum = PhotonSpectrum::new(1.0, 0.0).expect("positive width");
    let visibility = 0.96;
    let taus: Vec<f64> = (-30..=30).map(|k| k as f64 * 0.2).collect();
    let records = hom_dip(&taus, &spectrum, visibility, 5e3, 21).expect("valid dip scan");

    println!("coincidences vs delay (baseline 5000, visibility {visibility}):");
    for (tau, record) in taus.iter().zip(&records) {
        if (tau * 5.0).round() as i64 % 5 == 0 {
            let bar = "#".repeat((record.counts as f64 / 120.0).round() as usize);
            println!("{tau:>6.1}  {:>5}  {bar}", record.counts);
        }
    }

    let expected: Vec<f64> = records.iter().map(|r| r.mean).collect();
    let fit = fit_hom_dip(&taus, &expected);
    println!("\nfit of the noiseless curve C(tau) = B (1 - V exp(-w^2 tau^2 / 2)):");
    println!("  visibility V  = {:.6} (configured {visibility})", fit.visibility);
    println!("  width w       = {:.6} (configured {})", fit.delta_omega, spectrum.delta_omega());
    println!("  baseline B    = {:.2}", fit.baseline);
    println!("  dip contrast (Cmax - Cmin)/(Cmax + Cmin) = {:.4}", fit.contrast);
}
