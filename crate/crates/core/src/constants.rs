//! Physical constants in Gaussian CGS units (CODATA 2018).
//!
//! The Bohr radius is derived from the other three constants instead of
//! being stored, so `a0 = hbar^2 / (m_e e^2)` holds to rounding.

/// Elementary charge in statcoulomb (1.602176634e-19 C times c in cm/s / 10).
pub const ELEMENTARY_CHARGE: f64 = 4.803_204_712_570_263_7e-10;
/// Electron mass in gram.
pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-28;
/// Reduced Planck constant in erg s.
pub const REDUCED_PLANCK: f64 = 1.054_571_817e-27;
/// Proton mass in gram.
pub const PROTON_MASS: f64 = 1.672_621_923_69e-24;
/// Atomic mass unit in gram.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-24;
/// Boltzmann constant in erg/K.
pub const BOLTZMANN: f64 = 1.380_649e-16;
/// One electronvolt in erg.
pub const ELECTRONVOLT: f64 = 1.602_176_634e-12;

/// The constant set every formula is evaluated with.
///
/// Dimensionless tests use [`PhysicalConstants::unit`], which sets every
/// constant to one.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhysicalConstants {
    /// Magnitude of the electron charge (statC).
    pub electron_charge: f64,
    /// Electron mass (g).
    pub electron_mass: f64,
    /// Reduced Planck constant (erg s).
    pub hbar: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: Self = Self {
        electron_charge: ELEMENTARY_CHARGE,
        electron_mass: ELECTRON_MASS,
        hbar: REDUCED_PLANCK,
    };

    pub const fn unit() -> Self {
        Self {
            electron_charge: 1.0,
            electron_mass: 1.0,
            hbar: 1.0,
        }
    }

    /// Bohr radius `hbar^2 / (m_e e^2)` in cm.
    pub fn bohr_radius(&self) -> f64 {
        self.hbar * self.hbar / (self.electron_mass * self.electron_charge * self.electron_charge)
    }

    pub fn is_admissible(&self) -> bool {
        [self.electron_charge, self.electron_mass, self.hbar]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}
