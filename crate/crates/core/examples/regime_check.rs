//! Which approximations hold at a few wavenumbers of the mobile-dust mode.
//!
//! ```text
//! cargo run --example regime_check
//! ```

use quantum_dust::constants::{ELECTRONVOLT, PROTON_MASS};
use quantum_dust::{classify_regime, derived_scales, Coefficients, DustPolarity, Mode, PhysicalConstants, PlasmaComposition};

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
    let coeffs = Coefficients::from_scales(Mode::MobileDust, &scales)?;

    for k in [1e3, 1e4, 1e5, 1e6] {
        let report = classify_regime(Mode::MobileDust, &scales, &plasma, &consts, k, coeffs.omega(k));
        println!("\nk = {k:.1e} cm^-1, omega = {:.4e} rad/s", report.omega);
        for c in &report.checks {
            let mark = if c.satisfied { "ok " } else { "-- " };
            println!("  {mark}{:<22} {:>11.3e}   {}", c.name, c.margin, c.condition);
        }
    }
    Ok(())
}
