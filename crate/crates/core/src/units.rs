//! Unit-tagged physical quantities.
//!
//! Lengths and times are stored in a fixed base unit and only cross an API
//! boundary through an explicit constructor or accessor, so a millimetre can
//! never be passed where a metre is expected.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// A physical length, stored in millimetres.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct Length(f64);

impl Length {
    pub const ZERO: Length = Length(0.0);

    pub fn from_m(m: f64) -> Self {
        Length(m * 1e3)
    }

    pub fn from_mm(mm: f64) -> Self {
        Length(mm)
    }

    pub fn from_um(um: f64) -> Self {
        Length(um * 1e-3)
    }

    pub fn from_nm(nm: f64) -> Self {
        Length(nm * 1e-6)
    }

    pub fn m(self) -> f64 {
        self.0 * 1e-3
    }

    pub fn mm(self) -> f64 {
        self.0
    }

    pub fn um(self) -> f64 {
        self.0 * 1e3
    }

    pub fn nm(self) -> f64 {
        self.0 * 1e6
    }

    /// Parses a `{value, unit}` pair with a length unit.
    pub fn from_tagged(value: f64, unit: &str) -> Result<Self> {
        let scale = match unit {
            "m" => 1e3,
            "cm" => 10.0,
            "mm" => 1.0,
            "um" | "µm" => 1e-3,
            "nm" => 1e-6,
            "pm" => 1e-9,
            other => return Err(Error::domain(format!("`{other}` is not a length unit"))),
        };
        Ok(Length(value * scale))
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mm", self.0)
    }
}

/// A time interval, stored in picoseconds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct TimeSpan(f64);

impl TimeSpan {
    pub const ZERO: TimeSpan = TimeSpan(0.0);

    pub fn from_ps(ps: f64) -> Self {
        TimeSpan(ps)
    }

    pub fn from_s(s: f64) -> Self {
        TimeSpan(s * 1e12)
    }

    pub fn ps(self) -> f64 {
        self.0
    }

    pub fn s(self) -> f64 {
        self.0 * 1e-12
    }

    pub fn from_tagged(value: f64, unit: &str) -> Result<Self> {
        let scale = match unit {
            "s" => 1e12,
            "ns" => 1e3,
            "ps" => 1.0,
            "fs" => 1e-3,
            other => return Err(Error::domain(format!("`{other}` is not a time unit"))),
        };
        Ok(TimeSpan(value * scale))
    }
}

impl fmt::Display for TimeSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ps", self.0)
    }
}

/// Converts a tagged angle to radians.
pub fn angle_to_rad(value: f64, unit: &str) -> Result<f64> {
    match unit {
        "rad" => Ok(value),
        "deg" => Ok(value.to_radians()),
        other => Err(Error::domain(format!("`{other}` is not an angle unit"))),
    }
}

/// Converts a tagged wavelength to nanometres.
pub fn wavelength_to_nm(value: f64, unit: &str) -> Result<f64> {
    match unit {
        "nm" => Ok(value),
        "pm" => Ok(value * 1e-3),
        "um" | "µm" => Ok(value * 1e3),
        "m" => Ok(value * 1e9),
        other => Err(Error::domain(format!("`{other}` is not a wavelength unit"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_conversions() {
        let l = Length::from_mm(37.0);
        assert!((l.m() - 0.037).abs() < 1e-15);
        assert!((Length::from_tagged(6.95, "m").unwrap().mm() - 6950.0).abs() < 1e-9);
        assert!(Length::from_tagged(1.0, "ps").is_err());
    }

    #[test]
    fn time_conversions() {
        assert_eq!(TimeSpan::from_tagged(9.31, "ps").unwrap().ps(), 9.31);
        assert!((TimeSpan::from_s(9.31e-12).ps() - 9.31).abs() < 1e-12);
        assert!(TimeSpan::from_tagged(1.0, "mm").is_err());
    }

    #[test]
    fn angle_and_wavelength_tags() {
        assert!((angle_to_rad(180.0, "deg").unwrap() - std::f64::consts::PI).abs() < 1e-15);
        assert!((wavelength_to_nm(1.55444, "um").unwrap() - 1554.44).abs() < 1e-9);
        assert!(wavelength_to_nm(1.0, "deg").is_err());
    }
}
