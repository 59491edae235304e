//! TOML run configuration.
//!
//! ```toml
//! [composition]
//! n_e0 = "1e22 m^-3"
//! n_d0 = "1e11 cm^-3"
//! z_d = 1000
//! m_i = "1 m_p"
//! m_d = "1e-15 kg"
//! t_i = "0.01 eV"
//!
//! [grid]
//! points = 100
//! ```
//!
//! Every section rejects unknown keys. `n_i0` may be left out, in which
//! case it is solved from quasineutrality.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::Error;
use crate::params::{validate_composition, DustPolarity, PlasmaComposition};
use crate::units::{Dimension, Quantity};

use super::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub composition: Option<CompositionSection>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default)]
    pub regimes: RegimesSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionSection {
    pub n_e0: Quantity,
    pub n_i0: Option<Quantity>,
    pub n_d0: Option<Quantity>,
    #[serde(default = "one")]
    pub z_i: u32,
    #[serde(default)]
    pub z_d: u32,
    pub dust_polarity: Option<String>,
    pub m_i: Quantity,
    pub m_d: Option<Quantity>,
    pub t_i: Option<Quantity>,
    pub t_ef: Option<Quantity>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub mode: Option<String>,
    pub k_min: Option<Quantity>,
    pub k_max: Option<Quantity>,
    pub points: Option<usize>,
    pub spacing: Option<String>,
    pub limits: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub mode: Option<String>,
    pub length: Option<Quantity>,
    pub n_modes: Option<usize>,
    pub modes: Option<Vec<i64>>,
    pub amplitudes: Option<Vec<f64>>,
    pub periods: Option<f64>,
    pub steps_per_period: Option<f64>,
    pub dt: Option<Quantity>,
    pub stride: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSection {
    pub mode: Option<String>,
    pub max_iterations: Option<usize>,
    pub fit_thermal_speed: Option<bool>,
    pub seed_factors: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimesSection {
    pub mode: Option<String>,
    pub k: Option<Quantity>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::input("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input("io", format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// The validated plasma, in CGS.
    pub fn composition(&self) -> Result<PlasmaComposition, CliError> {
        let c = self
            .composition
            .as_ref()
            .ok_or_else(|| CliError::input("config", "missing [composition] section".into()))?;
        c.to_composition()
    }
}

pub(crate) fn quantity(q: &Quantity, dim: Dimension, key: &str) -> Result<f64, CliError> {
    q.to_cgs(dim).map_err(|e| CliError::input("config", format!("{key}: {e}")))
}

impl CompositionSection {
    pub fn to_composition(&self) -> Result<PlasmaComposition, CliError> {
        let density = |q: &Quantity, key| quantity(q, Dimension::NumberDensity, key);
        let n_e0 = density(&self.n_e0, "n_e0")?;
        let n_d0 = self.n_d0.as_ref().map_or(Ok(0.0), |q| density(q, "n_d0"))?;
        let polarity = match self.dust_polarity.as_deref() {
            None | Some("negative") => DustPolarity::Negative,
            Some("positive") => DustPolarity::Positive,
            Some(other) => {
                return Err(CliError::input(
                    "config",
                    format!("dust_polarity: expected negative or positive, got '{other}'"),
                ))
            }
        };
        let n_i0 = match &self.n_i0 {
            Some(q) => density(q, "n_i0")?,
            None if self.z_i > 0 => (n_e0 + polarity.factor() * self.z_d as f64 * n_d0) / self.z_i as f64,
            None => 0.0,
        };
        let m_i = quantity(&self.m_i, Dimension::Mass, "m_i")?;
        let m_d = match &self.m_d {
            Some(q) => quantity(q, Dimension::Mass, "m_d")?,
            // Never enters a formula without dust.
            None if n_d0 == 0.0 => 1.0,
            None => return Err(Error::MissingParameter("m_d").into()),
        };
        let t_i = self
            .t_i
            .as_ref()
            .map_or(Ok(0.0), |q| quantity(q, Dimension::Energy, "t_i"))?;
        let t_ef = self
            .t_ef
            .as_ref()
            .map(|q| quantity(q, Dimension::Energy, "t_ef"))
            .transpose()?;
        let raw = PlasmaComposition {
            n_e0,
            n_i0,
            n_d0,
            z_i: self.z_i,
            z_d: self.z_d,
            polarity,
            m_i,
            m_d,
            t_i,
            t_ef,
        };
        Ok(validate_composition(raw)?)
    }
}
