//! The dispersion relations are exactly the roots of the linearized Poisson
//! equation: on the curve the charge balance closes to rounding, off it
//! the residual is order one.
//!
//! ```text
//! cargo run --example poisson_identity
//! ```

use quantum_dust::constants::{ELECTRONVOLT, PROTON_MASS};
use quantum_dust::{
    density_responses, derived_scales, poisson_residual, Coefficients, DustPolarity, Mode, PhysicalConstants,
    PlasmaComposition,
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

    for mode in [Mode::ImmobileDust, Mode::MobileDust] {
        let coeffs = Coefficients::from_scales(mode, &scales)?;
        println!("\n{} mode", mode.name());
        for k in [1e4, 1e5, 1e6, 1e7] {
            let omega = coeffs.omega(k);
            let on = poisson_residual(mode, 1.0, k, omega, &plasma, &consts)?;
            let off = poisson_residual(mode, 1.0, k, 0.9 * omega, &plasma, &consts)?;
            let n = density_responses(mode, 1e-6, k, omega, &plasma, &consts)?;
            println!(
                "  k = {k:.0e}: residual on curve {on:.1e}, at 0.9 omega {off:.1e}; n_e1 = {:.3e} cm^-3 at phi = 1e-6 statV",
                n.n_e1
            );
        }
    }
    Ok(())
}
