//! Time-domain check of the mobile-dust relation: excite two standing
//! waves on a periodic box, integrate, and compare the measured
//! frequencies with the analytic ones.
//!
//! ```text
//! cargo run --release --example spectral_simulation
//! ```

use std::f64::consts::PI;

use quantum_dust::constants::{ELECTRONVOLT, PROTON_MASS};
use quantum_dust::{
    build_operator, derived_scales, init_plane_wave, measure_frequency, modal_energy, run, Coefficients,
    DustPolarity, Mode, PhysicalConstants, PlasmaComposition,
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
    let coeffs = Coefficients::from_scales(Mode::MobileDust, &scales)?;

    // Box holding two wavelengths of the ion Debye scale.
    let length = 4.0 * PI / scales.k_di.unwrap();
    let op = build_operator(&coeffs, length, 4)?;
    let start = init_plane_wave(&op.zero_state(), &[1, 3], &[1.0, 0.25])?;

    let dt = 2.0 * PI / op.max_omega() / 1000.0;
    let slowest = op.omega_sq[1].sqrt();
    let n_steps = (50.0 * 2.0 * PI / slowest / dt).ceil() as usize;
    let traj = run(&op, &start, dt, n_steps, 20)?;
    let measured = measure_frequency(&traj)?;

    let e0 = modal_energy(&op, &start);
    let e1 = modal_energy(&op, traj.snapshots.last().unwrap());
    println!("{n_steps} steps of {dt:.3e} s, method {}", measured.method);
    for m in [1, 3] {
        let analytic = coeffs.omega(op.wavenumber(m));
        let got = measured.get(m).unwrap().omega;
        println!(
            "m = {m}: k = {:.4e} cm^-1, omega = {got:.10e} rad/s (analytic {analytic:.10e}), rel. error {:.1e}, energy drift {:.1e}",
            op.wavenumber(m),
            (got - analytic).abs() / analytic,
            (e1[m] - e0[m]).abs() / e0[m],
        );
    }
    Ok(())
}
