//! Validity margins of the approximations behind each mode.
//!
//! Every entry is a ratio arranged so that a large value means the
//! approximation holds. A ratio of at least [`MUCH_GREATER`] counts as
//! satisfied; the raw margin is always reported so stricter cuts can be
//! applied downstream.

use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::dispersion::Mode;
use crate::params::{DerivedScales, PlasmaComposition};

/// Factor read as "much greater than".
pub const MUCH_GREATER: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeCheck {
    pub name: &'static str,
    pub condition: &'static str,
    pub margin: f64,
    pub threshold: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub mode: Mode,
    pub k: f64,
    pub omega: f64,
    pub checks: Vec<RegimeCheck>,
}

impl RegimeReport {
    pub fn get(&self, name: &str) -> Option<&RegimeCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }
}

fn check(name: &'static str, condition: &'static str, margin: f64) -> RegimeCheck {
    RegimeCheck {
        name,
        condition,
        margin,
        threshold: MUCH_GREATER,
        satisfied: margin >= MUCH_GREATER,
    }
}

/// Margins for the electron response (both modes), the Boltzmann ion
/// response (mode B) and the asymptotic limits of each mode.
///
/// Checks that depend on the ion Debye wavenumber are left out for cold ions.
pub fn classify_regime(
    mode: Mode,
    scales: &DerivedScales,
    comp: &PlasmaComposition,
    consts: &PhysicalConstants,
    k: f64,
    omega: f64,
) -> RegimeReport {
    let hbar2 = consts.hbar * consts.hbar;
    let m_e = consts.electron_mass;
    let k2 = k * k;
    let omega2 = omega * omega;

    let mut checks = vec![
        check(
            "electron_dispersion",
            "n_e1 << (hbar^2 / T_eF m_e) lap n_e1",
            hbar2 * k2 / (scales.t_ef * m_e),
        ),
        check(
            "electron_inertia",
            "d2 n_e1/dt2 << (hbar^2 / 4 m_e^2) lap^2 n_e1",
            hbar2 * k2 * k2 / (4.0 * m_e * m_e * omega2),
        ),
    ];

    match mode {
        Mode::ImmobileDust => {
            checks.push(check("quantum_limit", "K_q >> k", scales.k_q / k));
            let z_i = comp.z_i as f64;
            checks.push(check(
                "ion_density_ratio",
                "Z_i^2 n_i0 / n_e0 >> m_e / m_i",
                z_i * z_i * (comp.n_i0 / comp.n_e0) / (m_e / comp.m_i),
            ));
        }
        Mode::MobileDust => {
            checks.push(check(
                "ion_inertia",
                "V_Ti^-2 d2 n_i1/dt2 << lap n_i1",
                k2 * scales.v_ti * scales.v_ti / omega2,
            ));
            checks.push(check(
                "ion_quantum_pressure",
                "lap n_i1 << (m_i T_i / hbar^2) n_i1",
                comp.m_i * comp.t_i / (hbar2 * k2),
            ));
            checks.push(check("quantum_limit", "K_q >> k", scales.k_q / k));
            if let Some(k_di) = scales.k_di {
                let kq2 = scales.k_q * scales.k_q;
                checks.push(check("long_wavelength", "k_Di >> k", k_di / k));
                checks.push(check("dust_quantum", "K_q^2 >> k k_Di", kq2 / (k * k_di)));
                checks.push(check("dust_acoustic", "k k_Di >> K_q^2", k * k_di / kq2));
            }
        }
    }

    RegimeReport {
        mode,
        k,
        omega,
        checks,
    }
}
