//! Recovering dust and plasma parameters from a noisy spectrum.
//!
//! A mobile-dust spectrum is synthesized with 1% noise, fitted, and the
//! fitted scales are turned back into density and charge combinations.
//!
//! ```text
//! cargo run --release --example dust_diagnostics
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use quantum_dust::constants::{ELECTRONVOLT, PROTON_MASS};
use quantum_dust::{
    derived_scales, diagnostics_from_fit, fit_dispersion, Coefficients, DustPolarity, FitOptions, Mode,
    PhysicalConstants, PlasmaComposition, SpectrumSample,
};

fn main() -> quantum_dust::Result<()> {
    let consts = PhysicalConstants::CODATA_2018;
    let plasma = PlasmaComposition {
        n_e0: 1e16,
        n_i0: 1.01e16,
        n_d0: 1e11,
        z_i: 1,
        z_d: 1000,
        polarity: DustPolarity::Negative,
        m_i: PROTON_MASS,
        m_d: 1e-12,
        t_i: 0.01 * ELECTRONVOLT,
        t_ef: None,
    }
    .validate()?;
    let scales = derived_scales(&plasma, &consts);
    let truth = Coefficients::from_scales(Mode::MobileDust, &scales)?;
    let k_di = scales.k_di.unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noise = Normal::new(0.0, 0.01).unwrap();
    let samples: Vec<SpectrumSample> = (0..25)
        .map(|i| {
            let k = k_di * 10f64.powf(-2.0 + 3.0 * i as f64 / 24.0);
            let omega = truth.omega(k);
            SpectrumSample::with_sigma(k, omega * (1.0 + noise.sample(&mut rng)), 0.01 * omega)
        })
        .collect();

    let fit = fit_dispersion(Mode::MobileDust, &samples, &FitOptions::default())?;
    println!("{} of {} starts converged", fit.starts_converged, fit.starts_tried);
    for p in &fit.parameters {
        println!("  {:<9} = {:.5e} +- {:.1e}", p.name, p.value, p.uncertainty);
    }

    let d = diagnostics_from_fit(&fit, &consts);
    let z_d = plasma.z_d as f64;
    let dust = d.dust_charge_per_mass.unwrap();
    let ions = d.ion_charge_per_temperature.unwrap();
    println!("n_d0 Z_d^2 / m_d = {:.4e} +- {:.1e} (true {:.4e})", dust.value, dust.uncertainty, plasma.n_d0 * z_d * z_d / plasma.m_d);
    println!("n_i0 Z_i^2 / T_i = {:.4e} +- {:.1e} (true {:.4e})", ions.value, ions.uncertainty, plasma.n_i0 / plasma.t_i);
    println!("n_e0             = {:.4e} +- {:.1e} (true {:.4e})", d.electron_density.value, d.electron_density.uncertainty, plasma.n_e0);
    Ok(())
}
