//! Both dispersion branches over four decades of wavenumber, next to the
//! closed-form limits that apply in each range.
//!
//! ```text
//! cargo run --example dispersion_curves
//! ```

use quantum_dust::constants::{ELECTRONVOLT, PROTON_MASS};
use quantum_dust::{
    derived_scales, omega_limit, sample_curve, Coefficients, DustPolarity, KGrid, Limit, LimitParams, Mode,
    PhysicalConstants, PlasmaComposition, Spacing,
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
    let limits = LimitParams::from_plasma(&plasma, &scales, &consts);

    for mode in [Mode::ImmobileDust, Mode::MobileDust] {
        let coeffs = Coefficients::from_scales(mode, &scales)?;
        let grid = KGrid::new(1e-3 * scales.k_q, 10.0 * scales.k_q, 9, Spacing::Log);
        let curve = sample_curve(&coeffs, &grid)?;

        println!("\n{} mode", mode.name());
        print!("{:>12} {:>12}", "k [cm^-1]", "omega");
        for limit in Limit::for_mode(mode) {
            print!(" {:>14}", limit.name());
        }
        println!();
        for s in &curve.samples {
            print!("{:>12.4e} {:>12.4e}", s.k, s.omega);
            for limit in Limit::for_mode(mode) {
                print!(" {:>14.4e}", omega_limit(limit, &limits, s.k)?);
            }
            println!();
        }
    }
    Ok(())
}
