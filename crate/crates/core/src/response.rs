//! Linear plane-wave responses behind each mode and the Poisson balance
//! they must satisfy on the dispersion curve.
//!
//! All amplitudes belong to a single component `exp(i k x - i omega t)` and
//! scale linearly with the potential amplitude `phi_hat`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::dispersion::Mode;
use crate::error::{Error, Result};
use crate::params::PlasmaComposition;

/// Relative width of the excluded band around the mode-A ion pole.
pub const RESONANCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationSet {
    /// Potential amplitude (statvolt).
    pub phi_hat: f64,
    /// Electron density amplitude (cm^-3).
    pub n_e1: f64,
    /// Ion density amplitude (cm^-3).
    pub n_i1: f64,
    /// Dust density amplitude (cm^-3), mobile dust only.
    pub n_d1: Option<f64>,
    /// Longitudinal ion velocity amplitude (cm/s), immobile dust only.
    pub v_i: Option<f64>,
}

/// Ion response denominator of mode A, `omega^2 - (k^2 V_Ti^2 + hbar^2 k^4 / 4 m_i^2)`,
/// returned together with the subtracted ion branch term.
fn ion_pole(k: f64, omega: f64, comp: &PlasmaComposition, consts: &PhysicalConstants) -> (f64, f64) {
    let k2 = k * k;
    let branch = k2 * comp.t_i / comp.m_i + consts.hbar * consts.hbar * k2 * k2 / (4.0 * comp.m_i * comp.m_i);
    (omega * omega - branch, branch)
}

/// Quantum electron response from `lap n_e1 + (4 m_e n_e0 e / hbar^2) phi = 0`.
fn electron_density(phi_hat: f64, k: f64, comp: &PlasmaComposition, consts: &PhysicalConstants) -> f64 {
    let hbar = consts.hbar;
    4.0 * consts.electron_mass * comp.n_e0 * consts.electron_charge * phi_hat / (hbar * hbar * k * k)
}

fn check_wavenumber(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWavenumber(k))
    }
}

pub fn density_responses(
    mode: Mode,
    phi_hat: f64,
    k: f64,
    omega: f64,
    comp: &PlasmaComposition,
    consts: &PhysicalConstants,
) -> Result<PerturbationSet> {
    check_wavenumber(k)?;
    let e = consts.electron_charge;
    let k2 = k * k;
    let z_i = comp.z_i as f64;

    let n_e1 = electron_density(phi_hat, k, comp, consts);

    match mode {
        Mode::ImmobileDust => {
            let (pole, branch) = ion_pole(k, omega, comp, consts);
            let scale = (omega * omega).max(branch);
            if pole.abs() <= RESONANCE_TOLERANCE * scale {
                return Err(Error::IonResonance {
                    gap: if scale > 0.0 { pole.abs() / scale } else { 0.0 },
                });
            }
            let n_i1 = comp.n_i0 * z_i * e * k2 * phi_hat / (comp.m_i * pole);
            let v_i = omega * n_i1 / (comp.n_i0 * k);
            Ok(PerturbationSet {
                phi_hat,
                n_e1,
                n_i1,
                n_d1: None,
                v_i: Some(v_i),
            })
        }
        Mode::MobileDust => {
            if comp.t_i <= 0.0 {
                return Err(Error::ColdIons);
            }
            if omega == 0.0 {
                return Err(Error::ZeroFrequency);
            }
            let n_i1 = -comp.n_i0 * z_i * e * phi_hat / comp.t_i;
            let n_d1 = -comp.polarity.factor() * comp.n_d0 * comp.z_d as f64 * e * k2 * phi_hat
                / (comp.m_d * omega * omega);
            Ok(PerturbationSet {
                phi_hat,
                n_e1,
                n_i1,
                n_d1: Some(n_d1),
                v_i: None,
            })
        }
    }
}

/// Terms of `k^2 phi + 4 pi e (n_e1 - Z_i n_i1 + eps Z_d n_d1) = 0`.
///
/// For mode A each term is multiplied by the ion pole `omega^2 - branch`,
/// which removes the cancellation inside the ion response; `magnitude` is
/// the sum of absolute values of the expanded products. For mode B the
/// terms are used as they stand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonBalance {
    pub sum: f64,
    pub magnitude: f64,
    /// `|k^2 phi + 4 pi e (...)| / (k^2 |phi|)` without pole clearing.
    pub per_k2: f64,
}

impl PoissonBalance {
    /// `|sum| / magnitude`; zero exactly on the dispersion curve.
    pub fn relative(&self) -> f64 {
        if self.magnitude == 0.0 {
            0.0
        } else {
            self.sum.abs() / self.magnitude
        }
    }
}

pub fn poisson_balance(
    mode: Mode,
    phi_hat: f64,
    k: f64,
    omega: f64,
    comp: &PlasmaComposition,
    consts: &PhysicalConstants,
) -> Result<PoissonBalance> {
    check_wavenumber(k)?;
    let four_pi_e = 4.0 * PI * consts.electron_charge;
    let field = k * k * phi_hat;
    let per_k2 = |plain: f64| if phi_hat == 0.0 { 0.0 } else { plain.abs() / field.abs() };

    match mode {
        Mode::ImmobileDust => {
            // The ion term is formed already multiplied by the pole, so the
            // balance stays finite on and near the ion branch.
            let electron = four_pi_e * electron_density(phi_hat, k, comp, consts);
            let z_i = comp.z_i as f64;
            let (pole, branch) = ion_pole(k, omega, comp, consts);
            let cleared_ion =
                -four_pi_e * z_i * comp.n_i0 * z_i * consts.electron_charge * k * k * phi_hat / comp.m_i;
            let plain = if pole == 0.0 {
                f64::INFINITY
            } else {
                field + electron + cleared_ion / pole
            };
            Ok(PoissonBalance {
                sum: (field + electron) * pole + cleared_ion,
                magnitude: (field.abs() + electron.abs()) * (omega * omega + branch) + cleared_ion.abs(),
                per_k2: per_k2(plain),
            })
        }
        Mode::MobileDust => {
            let r = density_responses(mode, phi_hat, k, omega, comp, consts)?;
            let electron = four_pi_e * r.n_e1;
            let ion = -four_pi_e * comp.z_i as f64 * r.n_i1;
            let dust = r
                .n_d1
                .map_or(0.0, |n_d1| four_pi_e * comp.polarity.factor() * comp.z_d as f64 * n_d1);
            let plain = field + electron + ion + dust;
            Ok(PoissonBalance {
                sum: plain,
                magnitude: field.abs() + electron.abs() + ion.abs() + dust.abs(),
                per_k2: per_k2(plain),
            })
        }
    }
}

/// Scale-free residual of the Poisson equation evaluated with the linear
/// responses at `(k, omega)`. It vanishes exactly when `omega` solves the
/// mode's dispersion relation.
pub fn poisson_residual(
    mode: Mode,
    phi_hat: f64,
    k: f64,
    omega: f64,
    comp: &PlasmaComposition,
    consts: &PhysicalConstants,
) -> Result<f64> {
    poisson_balance(mode, phi_hat, k, omega, comp, consts).map(|b| b.relative())
}
