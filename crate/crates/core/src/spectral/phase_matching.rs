use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polarization::PumpConfig;

/// Half-maximum point of sinc²: sin²(x)/x² = 1/2 at x = ±SINC2_HALF_MAX.
pub(crate) const SINC2_HALF_MAX: f64 = 1.391_557_378_251_510_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PmProfile {
    /// sinc amplitude, sinc² intensity: uniform poling.
    SincSquaredAmplitude,
    Gaussian,
}

impl PmProfile {
    /// Amplitude at `u` FWHMs (of the intensity) away from the peak.
    pub fn amplitude(self, u: f64) -> f64 {
        match self {
            PmProfile::SincSquaredAmplitude => sinc(2.0 * SINC2_HALF_MAX * u),
            PmProfile::Gaussian => (-2.0 * LN_2 * u * u).exp(),
        }
    }

    pub fn intensity(self, u: f64) -> f64 {
        self.amplitude(u).powi(2)
    }
}

pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Phase-matching function of one poled waveguide, linearized about the
/// degenerate point.
///
/// In the (λ_s, λ_i) plane the function is a straight ridge through
/// (center, center) at `orientation_deg` from the λ_s axis. `fwhm` is the
/// width of the SHG tuning curve, i.e. of |PM|² along the λ_s = λ_i diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseMatchingSpec {
    /// Degenerate signal/idler wavelength, nm.
    pub center_wavelength: f64,
    /// SHG tuning-curve FWHM at the fundamental, nm.
    pub fwhm: f64,
    pub orientation_deg: f64,
    pub profile: PmProfile,
}

impl PhaseMatchingSpec {
    pub fn new(center_wavelength: f64, fwhm: f64, orientation_deg: f64) -> Result<Self> {
        let pm = PhaseMatchingSpec {
            center_wavelength,
            fwhm,
            orientation_deg,
            profile: PmProfile::SincSquaredAmplitude,
        };
        pm.validate()?;
        Ok(pm)
    }

    pub fn with_profile(mut self, profile: PmProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_fwhm(mut self, fwhm: f64) -> Self {
        self.fwhm = fwhm;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fwhm > 0.0) {
            return Err(Error::domain(format!("PM fwhm must be positive, got {}", self.fwhm)));
        }
        if !(self.orientation_deg > -90.0 && self.orientation_deg < 0.0) {
            return Err(Error::domain(format!(
                "PM orientation must lie in (-90, 0) degrees, got {}",
                self.orientation_deg
            )));
        }
        if !(self.center_wavelength > 0.0) {
            return Err(Error::domain("PM centre wavelength must be positive"));
        }
        Ok(())
    }

    fn angle(&self) -> (f64, f64) {
        self.orientation_deg.to_radians().sin_cos()
    }

    /// Unit normal to the ridge, (n_s, n_i).
    pub(crate) fn normal(&self) -> (f64, f64) {
        let (s, c) = self.angle();
        (-s, c)
    }

    /// Signed distance (nm) of (λ_s, λ_i) from the ridge line.
    pub fn ridge_offset(&self, lambda_s: f64, lambda_i: f64) -> f64 {
        let (ns, ni) = self.normal();
        (lambda_s - self.center_wavelength) * ns + (lambda_i - self.center_wavelength) * ni
    }

    /// FWHM of |PM|² measured perpendicular to the ridge, nm.
    pub fn across_ridge_fwhm(&self) -> f64 {
        let (s, c) = self.angle();
        self.fwhm * (c - s).abs()
    }

    pub fn amplitude(&self, lambda_s: f64, lambda_i: f64) -> f64 {
        self.profile
            .amplitude(self.ridge_offset(lambda_s, lambda_i) / self.across_ridge_fwhm())
    }

    /// Normalized SHG intensity with both fundamental photons at `lambda`.
    pub fn shg_intensity(&self, lambda: f64) -> f64 {
        self.amplitude(lambda, lambda).powi(2)
    }
}

/// Pump spectral amplitude at the pump wavelength fixed by energy
/// conservation, 1/λ_p = 1/λ_s + 1/λ_i.
///
/// Gaussian whose amplitude FWHM equals the pump bandwidth (or the CW
/// linewidth floor).
pub fn pump_amplitude(pump: &PumpConfig, lambda_s: f64, lambda_i: f64) -> f64 {
    let lambda_p = pump_wavelength(lambda_s, lambda_i);
    pump_amplitude_at(pump, lambda_p)
}

pub fn pump_amplitude_at(pump: &PumpConfig, lambda_p: f64) -> f64 {
    let u = (lambda_p - pump.center_wavelength) / pump.effective_bandwidth();
    (-4.0 * LN_2 * u * u).exp()
}

/// Pump wavelength that energy conservation assigns to a signal/idler pair.
pub fn pump_wavelength(lambda_s: f64, lambda_i: f64) -> f64 {
    1.0 / (1.0 / lambda_s + 1.0 / lambda_i)
}
