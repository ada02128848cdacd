//! Birefringent walk-off on chip and its compensation in
//! polarization-maintaining fibre.
//!
//! Pairs are taken to be born at the centre of the poled section, so the H
//! and V photons share an effective birefringent path `L − L_p/2`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{Length, TimeSpan, SPEED_OF_LIGHT};

/// Group-index difference n_gH − n_gV that reproduces the 9.31 ps walk-off
/// of a 37 mm effective length.
pub const DEFAULT_DELTA_GROUP_INDEX: f64 = 0.07544;

/// PM-fibre birefringence that compensates 9.31 ps with 6.95 m of fibre.
pub const DEFAULT_FIBER_BIREFRINGENCE: f64 = 4.016e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupIndices {
    /// Separate group indices (n_gH, n_gV).
    Pair { h: f64, v: f64 },
    /// The difference n_gH − n_gV only.
    Difference(f64),
}

impl GroupIndices {
    pub fn difference(&self) -> f64 {
        match *self {
            GroupIndices::Pair { h, v } => h - v,
            GroupIndices::Difference(d) => d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkoffSpec {
    pub group_indices: GroupIndices,
    pub chip_length: Length,
    pub poled_length: Length,
    /// Birefringence B of the compensating fibre.
    pub fiber_birefringence: f64,
    pub coherence_time: TimeSpan,
}

impl WalkoffSpec {
    /// The fabricated 49 mm chip with a 24 mm poled section.
    pub fn fabricated(coherence_time: TimeSpan) -> Self {
        WalkoffSpec {
            group_indices: GroupIndices::Difference(DEFAULT_DELTA_GROUP_INDEX),
            chip_length: Length::from_mm(49.0),
            poled_length: Length::from_mm(24.0),
            fiber_birefringence: DEFAULT_FIBER_BIREFRINGENCE,
            coherence_time,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.poled_length.mm() > 0.0) {
            return Err(Error::domain("poled length must be positive"));
        }
        if self.chip_length < self.poled_length {
            return Err(Error::domain("chip length must be at least the poled length"));
        }
        if !(self.fiber_birefringence > 0.0) {
            return Err(Error::domain("fibre birefringence must be positive"));
        }
        if !(self.coherence_time.ps() > 0.0) {
            return Err(Error::domain("coherence time must be positive"));
        }
        Ok(())
    }
}

/// L_eff = L − L_p/2.
pub fn effective_length(spec: &WalkoffSpec) -> Length {
    Length::from_mm(spec.chip_length.mm() - spec.poled_length.mm() / 2.0)
}

/// Δτ = Δn_g · L_eff / c.
pub fn walkoff_delay(spec: &WalkoffSpec) -> TimeSpan {
    TimeSpan::from_s(spec.group_indices.difference() * effective_length(spec).m() / SPEED_OF_LIGHT)
}

/// Fibre length whose H/V delay B·L_f/c cancels `delay`.
pub fn compensation_fiber_length(delay: TimeSpan, birefringence: f64) -> Result<Length> {
    if !(birefringence > 0.0) {
        return Err(Error::domain(format!(
            "fibre birefringence must be positive, got {birefringence}"
        )));
    }
    Ok(Length::from_m(delay.ps().abs() * metres_per_ps(birefringence)))
}

/// Fibre length per picosecond of H/V delay.
fn metres_per_ps(birefringence: f64) -> f64 {
    SPEED_OF_LIGHT / birefringence * 1e-12
}

/// H/V delay accumulated in `length` of fibre with birefringence `birefringence`.
pub fn fiber_delay(length: Length, birefringence: f64) -> TimeSpan {
    TimeSpan::from_ps(length.m() / metres_per_ps(birefringence))
}

/// Uncompensated delay left after the fibre, in ps (sign follows the chip).
pub fn residual_delay(chip_delay: TimeSpan, fiber: Length, birefringence: f64) -> TimeSpan {
    let fiber = fiber_delay(fiber, birefringence).ps();
    let chip = chip_delay.ps();
    TimeSpan::from_ps(chip.signum() * (chip.abs() - fiber))
}

/// Coherence kept when the H/V wavepackets are offset by `residual`:
/// exp(−Δt² / (2 τ_c²)).
pub fn residual_indistinguishability(residual: TimeSpan, coherence_time: TimeSpan) -> Result<f64> {
    if !(coherence_time.ps() > 0.0) {
        return Err(Error::domain("coherence time must be positive"));
    }
    let x = residual.ps() / coherence_time.ps();
    Ok((-0.5 * x * x).exp())
}

/// FWHM duration of a transform-limited Gaussian pulse with spectral FWHM
/// `bandwidth_nm` at `center_nm`.
pub fn transform_limited_coherence_time(center_nm: f64, bandwidth_nm: f64) -> TimeSpan {
    const GAUSSIAN_TBP: f64 = 2.0 * std::f64::consts::LN_2 / std::f64::consts::PI;
    let center = center_nm * 1e-9;
    let dnu = SPEED_OF_LIGHT * bandwidth_nm * 1e-9 / (center * center);
    TimeSpan::from_s(GAUSSIAN_TBP / dnu)
}

/// Every number of the walk-off budget, for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkoffBudget {
    pub chip_length: Length,
    pub poled_length: Length,
    pub effective_length: Length,
    pub delta_group_index: f64,
    pub walkoff_delay: TimeSpan,
    pub fiber_birefringence: f64,
    pub fiber_length: Length,
    pub residual_delay: TimeSpan,
    pub coherence_time: TimeSpan,
    pub residual_indistinguishability: f64,
}

impl WalkoffBudget {
    /// Budget with the given fibre, or the exactly compensating one if `None`.
    pub fn compute(spec: &WalkoffSpec, fiber: Option<Length>) -> Result<Self> {
        spec.validate()?;
        let delay = walkoff_delay(spec);
        let fiber_length = match fiber {
            Some(l) => l,
            None => compensation_fiber_length(delay, spec.fiber_birefringence)?,
        };
        let residual = residual_delay(delay, fiber_length, spec.fiber_birefringence);
        Ok(WalkoffBudget {
            chip_length: spec.chip_length,
            poled_length: spec.poled_length,
            effective_length: effective_length(spec),
            delta_group_index: spec.group_indices.difference(),
            walkoff_delay: delay,
            fiber_birefringence: spec.fiber_birefringence,
            fiber_length,
            residual_delay: residual,
            coherence_time: spec.coherence_time,
            residual_indistinguishability: residual_indistinguishability(residual, spec.coherence_time)?,
        })
    }

    /// `quantity,value,unit` table.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "quantity,value,unit")?;
        let rows: [(&str, f64, &str); 10] = [
            ("chip_length", self.chip_length.mm(), "mm"),
            ("poled_length", self.poled_length.mm(), "mm"),
            ("effective_length", self.effective_length.mm(), "mm"),
            ("delta_group_index", self.delta_group_index, "1"),
            ("walkoff_delay", self.walkoff_delay.ps(), "ps"),
            ("fiber_birefringence", self.fiber_birefringence, "1"),
            ("fiber_length", self.fiber_length.m(), "m"),
            ("residual_delay", self.residual_delay.ps(), "ps"),
            ("coherence_time", self.coherence_time.ps(), "ps"),
            ("residual_indistinguishability", self.residual_indistinguishability, "1"),
        ];
        for (q, v, u) in rows {
            writeln!(w, "{q},{v},{u}")?;
        }
        Ok(())
    }
}
