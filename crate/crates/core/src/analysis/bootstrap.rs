use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chsh::{chsh_fixed, ChshAngles};
use super::counts::{poisson, trial_rng};
use super::density::{fidelity, DensityMatrix2Q, Ket2Q};
use super::measurement::MeasurementRecord;
use super::tomography::{tomography_linear, tomography_mle};
use crate::error::{Error, Result};

/// State estimator used inside the bootstrap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Estimator {
    Linear,
    /// MLE started from the linear estimate.
    MaxLikelihood { tolerance: f64, max_iterations: usize },
}

impl Default for Estimator {
    fn default() -> Self {
        Estimator::MaxLikelihood {
            tolerance: 1e-10,
            max_iterations: 5000,
        }
    }
}

impl Estimator {
    pub fn estimate(&self, records: &[MeasurementRecord]) -> Result<DensityMatrix2Q> {
        let lin = tomography_linear(records)?;
        match *self {
            Estimator::Linear => Ok(lin.rho),
            Estimator::MaxLikelihood {
                tolerance,
                max_iterations,
            } => Ok(tomography_mle(records, &lin.rho, tolerance, max_iterations)?.rho),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBars {
    pub fidelity_sd: f64,
    pub chsh_sd: f64,
    pub samples: usize,
}

/// Parametric bootstrap: every count is redrawn from a Poisson distribution
/// with the observed value as mean, the state re-estimated, and the sample
/// standard deviations of F (to `target`) and fixed-angle S returned.
pub fn error_bars(
    records: &[MeasurementRecord],
    estimator: Estimator,
    target: &Ket2Q,
    angles: &ChshAngles,
    n_bootstrap: usize,
    seed: u64,
) -> Result<ErrorBars> {
    if n_bootstrap < 100 {
        return Err(Error::domain(format!("n_bootstrap must be at least 100, got {n_bootstrap}")));
    }
    let samples: Vec<(f64, f64)> = (0..n_bootstrap)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial as u64);
            let resampled = records
                .iter()
                .map(|r| {
                    Ok(MeasurementRecord {
                        counts: poisson(r.counts as f64, &mut rng)?,
                        ..*r
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let rho = estimator.estimate(&resampled)?;
            Ok((fidelity(&rho, target)?, chsh_fixed(&rho, angles)))
        })
        .collect::<Result<_>>()?;
    let (f, s): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
    Ok(ErrorBars {
        fidelity_sd: sample_sd(&f),
        chsh_sd: sample_sd(&s),
        samples: n_bootstrap,
    })
}

fn sample_sd(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}
