//! Characteristic scales of a dense hydrogen plasma with charged dust.
//!
//! ```text
//! cargo run --example derived_scales
//! ```

use quantum_dust::constants::{ELECTRONVOLT, PROTON_MASS};
use quantum_dust::{derived_scales, DustPolarity, PhysicalConstants, PlasmaComposition};

fn main() -> quantum_dust::Result<()> {
    let consts = PhysicalConstants::CODATA_2018;
    let (n_e0, n_d0, z_d) = (1e16, 1e11, 1000);
    let plasma = PlasmaComposition {
        n_e0,
        // Charge balance fixes the ion density.
        n_i0: n_e0 + z_d as f64 * n_d0,
        n_d0,
        z_i: 1,
        z_d,
        polarity: DustPolarity::Negative,
        m_i: PROTON_MASS,
        m_d: 1e-12,
        t_i: 0.01 * ELECTRONVOLT,
        t_ef: None,
    }
    .validate()?;

    let s = derived_scales(&plasma, &consts);
    println!("Bohr radius        a0     = {:.6e} cm", consts.bohr_radius());
    println!("quantum wavenumber K_q    = {:.6e} cm^-1", s.k_q);
    println!("ion plasma freq    w_pi   = {:.6e} rad/s", s.omega_pi);
    println!("dust plasma freq   w_pd   = {:.6e} rad/s", s.omega_pd);
    println!("ion thermal speed  V_Ti   = {:.6e} cm/s", s.v_ti);
    println!("ion Debye wavenum  k_Di   = {:.6e} cm^-1", s.k_di.unwrap_or(f64::NAN));
    println!("dust acoustic spd  C_D    = {:.6e} cm/s", s.c_d.unwrap_or(f64::NAN));
    println!("Fermi temperature  T_eF   = {:.6e} erg ({:.3e} eV)", s.t_ef, s.t_ef / ELECTRONVOLT);
    Ok(())
}
