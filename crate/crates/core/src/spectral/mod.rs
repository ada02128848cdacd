//! Phase matching, SHG tuning curves and joint spectral amplitudes.
//!
//! All spectral axes are wavelengths in nm. Energy conservation is applied
//! exactly (1/λ_p = 1/λ_s + 1/λ_i) rather than in a linearized detuning.

mod jsa;
mod phase_matching;
mod shg;

use serde::{Deserialize, Serialize};

pub use jsa::{
    apply_filter, build_jsa, exchange_overlap, jsa_coverage_widths, pump_envelope, FilterShape,
    FilterSpec, FilteredJsa, GridSpec, JsaGrid,
};
pub use phase_matching::{
    pump_amplitude, pump_amplitude_at, pump_wavelength, PhaseMatchingSpec, PmProfile,
};
pub use shg::{curve_overlap, fit_tuning_curve, shg_curve, wavelength_axis, ShgCurve, TuningFit};

use crate::error::{Error, Result};

/// Whether overlaps are taken between amplitudes or between intensities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapMetric {
    #[default]
    Amplitude,
    Intensity,
}

pub(crate) fn check_axis(axis: &[f64], what: &str) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::domain(format!("{what} needs at least two samples")));
    }
    if axis.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

pub(crate) fn trapezoid(axis: &[f64], values: &[f64]) -> f64 {
    axis.windows(2)
        .zip(values.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}
