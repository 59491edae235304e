//! Plasma compositions and the scales derived from them.
//!
//! Everything is Gaussian CGS: densities in cm^-3, masses in g,
//! temperatures in erg (energy units), wavenumbers in cm^-1.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// Relative tolerance on the equilibrium charge balance.
pub const QUASINEUTRALITY_TOLERANCE: f64 = 1e-10;

/// Sign of the dust charge.
///
/// `Negative` carries the convention factor `+1` and `Positive` carries
/// `-1`, so the equilibrium balance reads `Z_i n_i0 = n_e0 + eps Z_d n_d0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DustPolarity {
    Negative,
    Positive,
}

impl DustPolarity {
    pub fn factor(self) -> f64 {
        match self {
            DustPolarity::Negative => 1.0,
            DustPolarity::Positive => -1.0,
        }
    }
}

/// Three-component plasma: electrons, one ion species and charged dust.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlasmaComposition {
    pub n_e0: f64,
    pub n_i0: f64,
    pub n_d0: f64,
    pub z_i: u32,
    pub z_d: u32,
    pub polarity: DustPolarity,
    pub m_i: f64,
    pub m_d: f64,
    /// Ion temperature in erg.
    pub t_i: f64,
    /// Electron Fermi temperature in erg. Computed from `n_e0` when absent.
    pub t_ef: Option<f64>,
}

impl PlasmaComposition {
    /// Relative residual of the equilibrium charge balance.
    pub fn quasineutrality_residual(&self) -> f64 {
        let ion_charge = self.z_i as f64 * self.n_i0;
        let rhs = self.n_e0 + self.polarity.factor() * self.z_d as f64 * self.n_d0;
        (ion_charge - rhs).abs() / ion_charge
    }

    /// Checks every invariant and hands the composition back unchanged.
    pub fn validate(self) -> Result<Self> {
        validate_composition(self)
    }
}

pub fn validate_composition(raw: PlasmaComposition) -> Result<PlasmaComposition> {
    for (name, value) in [("n_e0", raw.n_e0), ("n_i0", raw.n_i0)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveDensity { name, value });
        }
    }
    if !(raw.n_d0.is_finite() && raw.n_d0 >= 0.0) {
        return Err(Error::NonPositiveDensity {
            name: "n_d0",
            value: raw.n_d0,
        });
    }
    for (name, value) in [("m_i", raw.m_i), ("m_d", raw.m_d)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveMass { name, value });
        }
    }
    if !(raw.t_i.is_finite() && raw.t_i >= 0.0) {
        return Err(Error::NegativeTemperature(raw.t_i));
    }
    if let Some(t) = raw.t_ef {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::NegativeTemperature(t));
        }
    }
    if raw.z_i == 0 {
        return Err(Error::InvalidChargeState {
            name: "Z_i",
            value: raw.z_i,
        });
    }
    // Z_d only matters when dust is present.
    if raw.z_d == 0 && raw.n_d0 > 0.0 {
        return Err(Error::InvalidChargeState {
            name: "Z_d",
            value: raw.z_d,
        });
    }
    let residual = raw.quasineutrality_residual();
    if !(residual <= QUASINEUTRALITY_TOLERANCE) {
        return Err(Error::QuasineutralityViolated { residual });
    }
    Ok(raw)
}

/// Degenerate electron gas Fermi energy `(hbar^2 / 2 m_e) (3 pi^2 n_e0)^(2/3)`.
pub fn fermi_temperature(n_e0: f64, consts: &PhysicalConstants) -> f64 {
    consts.hbar * consts.hbar / (2.0 * consts.electron_mass) * (3.0 * PI * PI * n_e0).powf(2.0 / 3.0)
}

/// Scales shared by the dispersion relations and the regime checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedScales {
    /// Quantum wavenumber `(16 pi n_e0 / a0)^(1/4)` (cm^-1).
    pub k_q: f64,
    /// Ion plasma frequency `(4 pi n_i0 Z_i^2 e^2 / m_i)^(1/2)` (rad/s).
    pub omega_pi: f64,
    /// Dust plasma frequency `(4 pi n_d0 Z_d^2 e^2 / m_d)^(1/2)` (rad/s).
    pub omega_pd: f64,
    /// Ion thermal speed `(T_i / m_i)^(1/2)` (cm/s).
    pub v_ti: f64,
    /// Ion Debye wavenumber; `None` for cold ions.
    pub k_di: Option<f64>,
    /// Dust acoustic speed `omega_pd / k_Di`; `None` without dust or for cold ions.
    pub c_d: Option<f64>,
    /// Ion quantum dispersion coefficient `hbar / (2 m_i)` (cm^2/s).
    pub q_i: f64,
    /// Electron Fermi temperature (erg).
    pub t_ef: f64,
    /// True when `t_ef` came from the degenerate-gas formula.
    pub t_ef_derived: bool,
}

pub fn derived_scales(comp: &PlasmaComposition, consts: &PhysicalConstants) -> DerivedScales {
    let e2 = consts.electron_charge * consts.electron_charge;
    let z_i = comp.z_i as f64;
    let z_d = comp.z_d as f64;

    let k_q = (16.0 * PI * comp.n_e0 / consts.bohr_radius()).sqrt().sqrt();
    let omega_pi = (4.0 * PI * comp.n_i0 * z_i * z_i * e2 / comp.m_i).sqrt();
    let omega_pd = (4.0 * PI * comp.n_d0 * z_d * z_d * e2 / comp.m_d).sqrt();
    let v_ti = (comp.t_i / comp.m_i).sqrt();
    let k_di = (comp.t_i > 0.0).then(|| (4.0 * PI * comp.n_i0 * z_i * z_i * e2 / comp.t_i).sqrt());
    let c_d = match k_di {
        Some(k) if comp.n_d0 > 0.0 => Some(omega_pd / k),
        _ => None,
    };
    let (t_ef, t_ef_derived) = match comp.t_ef {
        Some(t) => (t, false),
        None => (fermi_temperature(comp.n_e0, consts), true),
    };

    DerivedScales {
        k_q,
        omega_pi,
        omega_pd,
        v_ti,
        k_di,
        c_d,
        q_i: consts.hbar / (2.0 * comp.m_i),
        t_ef,
        t_ef_derived,
    }
}
