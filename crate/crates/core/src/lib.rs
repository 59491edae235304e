//! Low-frequency electrostatic modes of quantum dusty plasmas.
//!
//! The crate evaluates the two dispersion branches of an unmagnetized
//! electron-ion-dust plasma with a quantum electron response, checks them
//! against the linear Poisson balance and a spectral time integration of
//! the underlying evolution equations, and fits measured `(k, omega)`
//! spectra back to the identifiable dust and plasma combinations.
//!
//! All quantities are Gaussian CGS.

pub mod cli;
pub mod constants;
pub mod dispersion;
pub mod error;
pub mod frequency;
pub mod inversion;
pub mod params;
pub mod regime;
pub mod response;
pub mod simulator;
pub mod units;

pub use constants::PhysicalConstants;
pub use dispersion::{
    omega_limit, omega_mode_a, omega_mode_b, sample_curve, Coefficients, DispersionCurve, KGrid, Limit,
    LimitParams, Mode, ModeACoefficients, ModeBCoefficients, Spacing,
};
pub use error::{Error, Result};
pub use params::{derived_scales, fermi_temperature, validate_composition, DerivedScales, DustPolarity, PlasmaComposition};
pub use regime::{classify_regime, RegimeReport};
pub use response::{density_responses, poisson_residual, PerturbationSet};
pub use simulator::{build_operator, init_plane_wave, measure_frequency, modal_energy, run, FieldState, SpectralOperator, Trajectory};
pub use inversion::{diagnostics_from_fit, fit_dispersion, forward_residuals, DustDiagnostics, FitOptions, FitResult, SpectrumSample};
