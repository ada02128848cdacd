//! Forward model for coincidence counting with Poissonian shot noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::density::DensityMatrix2Q;
use super::measurement::{MeasurementRecord, MeasurementSetting};
use crate::error::{Error, Result};

/// Generator for trial `index` of a run seeded with `seed`.
///
/// Each index gets its own ChaCha stream, so parallel trials draw the same
/// numbers whatever order they are scheduled in.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws one Poisson variate; a zero mean gives zero.
pub fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<u64> {
    if mean == 0.0 {
        return Ok(0);
    }
    let dist = Poisson::new(mean).map_err(|e| Error::domain(format!("Poisson mean {mean}: {e}")))?;
    Ok(dist.sample(rng) as u64)
}

fn check_mean_total(mean_total: f64) -> Result<()> {
    if !(mean_total > 0.0) || !mean_total.is_finite() {
        return Err(Error::domain(format!("mean_total must be positive, got {mean_total}")));
    }
    Ok(())
}

/// Expected coincidences mean_total · tr(ρ Π_a⊗Π_b) per setting.
pub fn expected_counts(rho: &DensityMatrix2Q, settings: &[MeasurementSetting], mean_total: f64) -> Result<Vec<f64>> {
    check_mean_total(mean_total)?;
    Ok(settings.iter().map(|s| mean_total * s.probability(rho)).collect())
}

/// Poisson-distributed coincidences, one independent draw per setting.
pub fn simulate_counts(
    rho: &DensityMatrix2Q,
    settings: &[MeasurementSetting],
    mean_total: f64,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    simulate_counts_with_background(rho, settings, mean_total, 0.0, seed)
}

/// As [`simulate_counts`], with `background` accidental coincidences per
/// setting added to every mean.
pub fn simulate_counts_with_background(
    rho: &DensityMatrix2Q,
    settings: &[MeasurementSetting],
    mean_total: f64,
    background: f64,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    if !(background >= 0.0) {
        return Err(Error::domain(format!("background must be non-negative, got {background}")));
    }
    let means = expected_counts(rho, settings, mean_total)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    settings
        .iter()
        .zip(means)
        .map(|(s, m)| {
            Ok(MeasurementRecord {
                setting: *s,
                counts: poisson(m + background, &mut rng)?,
                integration_seconds: 1.0,
            })
        })
        .collect()
}

/// Counts equal to the rounded expectation values: a noise-free data set.
pub fn noiseless_counts(
    rho: &DensityMatrix2Q,
    settings: &[MeasurementSetting],
    mean_total: f64,
) -> Result<Vec<MeasurementRecord>> {
    let means = expected_counts(rho, settings, mean_total)?;
    Ok(settings
        .iter()
        .zip(means)
        .map(|(s, m)| MeasurementRecord {
            setting: *s,
            counts: m.round() as u64,
            integration_seconds: 1.0,
        })
        .collect())
}

/// Removes an accidental rate (coincidences per second) from every record,
/// flooring at zero.
pub fn subtract_background(records: &[MeasurementRecord], rate: f64) -> Result<Vec<MeasurementRecord>> {
    if !(rate >= 0.0) {
        return Err(Error::domain(format!("background rate must be non-negative, got {rate}")));
    }
    Ok(records
        .iter()
        .map(|r| {
            let acc = (rate * r.integration_seconds).round() as u64;
            MeasurementRecord {
                counts: r.counts.saturating_sub(acc),
                ..*r
            }
        })
        .collect())
}
