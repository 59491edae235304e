//! Unit-suffixed quantities for configuration input.
//!
//! A quantity is either a bare number, read as CGS, or a string such as
//! `"1e22 m^-3"` or `"0.01 eV"`. Conversion to CGS happens once, at parse
//! time.

use std::fmt;

use serde::Deserialize;

use crate::constants::{ATOMIC_MASS_UNIT, BOLTZMANN, ELECTRONVOLT, PROTON_MASS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    NumberDensity,
    Mass,
    /// Temperatures and energies, stored in erg.
    Energy,
    Wavenumber,
    Length,
    Time,
}

impl Dimension {
    pub fn cgs_unit(self) -> &'static str {
        match self {
            Dimension::NumberDensity => "cm^-3",
            Dimension::Mass => "g",
            Dimension::Energy => "erg",
            Dimension::Wavenumber => "cm^-1",
            Dimension::Length => "cm",
            Dimension::Time => "s",
        }
    }

    /// Multiplier taking one `unit` to CGS.
    pub fn factor(self, unit: &str) -> Option<f64> {
        let f = match (self, unit) {
            (Dimension::NumberDensity, "cm^-3" | "cm-3" | "/cm^3") => 1.0,
            (Dimension::NumberDensity, "m^-3" | "m-3" | "/m^3") => 1e-6,
            (Dimension::Mass, "g") => 1.0,
            (Dimension::Mass, "kg") => 1e3,
            (Dimension::Mass, "amu" | "u" | "Da") => ATOMIC_MASS_UNIT,
            (Dimension::Mass, "m_p") => PROTON_MASS,
            (Dimension::Energy, "erg") => 1.0,
            (Dimension::Energy, "J") => 1e7,
            (Dimension::Energy, "eV") => ELECTRONVOLT,
            (Dimension::Energy, "keV") => 1e3 * ELECTRONVOLT,
            (Dimension::Energy, "K") => BOLTZMANN,
            (Dimension::Wavenumber, "cm^-1" | "cm-1" | "/cm") => 1.0,
            (Dimension::Wavenumber, "m^-1" | "m-1" | "/m") => 1e-2,
            (Dimension::Length, "cm") => 1.0,
            (Dimension::Length, "m") => 1e2,
            (Dimension::Length, "nm") => 1e-7,
            (Dimension::Time, "s") => 1.0,
            (Dimension::Time, "ms") => 1e-3,
            (Dimension::Time, "us") => 1e-6,
            (Dimension::Time, "ns") => 1e-9,
            (Dimension::Time, "fs") => 1e-15,
            _ => return None,
        };
        Some(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitError(pub String);

impl fmt::Display for UnitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Raw configuration value before conversion.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Number(f64),
    Text(String),
}

impl From<f64> for Quantity {
    fn from(v: f64) -> Self {
        Quantity::Number(v)
    }
}

impl Quantity {
    pub fn to_cgs(&self, dim: Dimension) -> Result<f64, UnitError> {
        match self {
            Quantity::Number(v) => Ok(*v),
            Quantity::Text(s) => parse_quantity(s, dim),
        }
    }
}

/// Parses `"<number> [unit]"`. A missing unit means CGS.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, UnitError> {
    let text = text.trim();
    let (number, unit) = match text.split_once(char::is_whitespace) {
        Some((n, u)) => (n, u.trim()),
        None => (text, ""),
    };
    let value: f64 = number
        .parse()
        .map_err(|_| UnitError(format!("cannot parse a number from '{text}'")))?;
    if unit.is_empty() {
        return Ok(value);
    }
    let factor = dim.factor(unit).ok_or_else(|| {
        UnitError(format!(
            "unit '{unit}' is not a {} unit (CGS unit is {})",
            format!("{dim:?}").to_lowercase(),
            dim.cgs_unit()
        ))
    })?;
    Ok(value * factor)
}

/// Expresses a CGS value in `unit`.
pub fn from_cgs(value: f64, unit: &str, dim: Dimension) -> Result<f64, UnitError> {
    let factor = dim
        .factor(unit)
        .ok_or_else(|| UnitError(format!("unknown unit '{unit}'")))?;
    Ok(value / factor)
}
