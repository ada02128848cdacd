//! SHG tuning curves of single waveguides and their mutual overlap.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::phase_matching::{PhaseMatchingSpec, PmProfile};
use super::{check_axis, trapezoid, OverlapMetric};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShgCurve {
    pub wavelength_axis: Vec<f64>,
    /// Normalized to a peak sample of 1.
    pub intensity: Vec<f64>,
    pub fitted_center: f64,
    pub fitted_fwhm: f64,
}

/// Uniform wavelength axis of `points` samples over `center ± half_span`.
pub fn wavelength_axis(center: f64, half_span: f64, points: usize) -> Vec<f64> {
    let step = 2.0 * half_span / (points - 1) as f64;
    (0..points)
        .map(|k| center - half_span + k as f64 * step)
        .collect()
}

/// Samples the SHG tuning curve of `pm` on `axis` and fits it.
pub fn shg_curve(pm: &PhaseMatchingSpec, axis: &[f64]) -> Result<ShgCurve> {
    pm.validate()?;
    check_axis(axis, "SHG wavelength axis")?;
    let lo = pm.center_wavelength - 3.0 * pm.fwhm;
    let hi = pm.center_wavelength + 3.0 * pm.fwhm;
    if axis[0] > lo || axis[axis.len() - 1] < hi {
        return Err(Error::domain(format!(
            "axis [{}, {}] does not cover the peak region [{lo}, {hi}] nm",
            axis[0],
            axis[axis.len() - 1]
        )));
    }
    let raw: Vec<f64> = axis.iter().map(|&l| pm.shg_intensity(l)).collect();
    let peak = raw.iter().cloned().fold(0.0, f64::max);
    let intensity: Vec<f64> = raw.iter().map(|v| v / peak).collect();
    let fit = fit_tuning_curve(axis, &intensity, pm.profile)?;
    Ok(ShgCurve {
        wavelength_axis: axis.to_vec(),
        intensity,
        fitted_center: fit.center,
        fitted_fwhm: fit.fwhm,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuningFit {
    pub amplitude: f64,
    pub center: f64,
    pub fwhm: f64,
    /// Sum of squared residuals at the optimum.
    pub residual: f64,
}

/// Least-squares fit of `amplitude · profile((λ − center)/fwhm)` to a
/// measured tuning curve (Levenberg–Marquardt, numerical Jacobian).
pub fn fit_tuning_curve(axis: &[f64], intensity: &[f64], profile: PmProfile) -> Result<TuningFit> {
    if axis.len() != intensity.len() {
        return Err(Error::domain("axis and intensity lengths differ"));
    }
    check_axis(axis, "fit axis")?;
    let (peak_idx, &peak) = intensity
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::domain("empty tuning curve"))?;
    if !(peak > 0.0) {
        return Err(Error::domain("tuning curve has no positive sample"));
    }
    let width0 = half_max_width(axis, intensity, peak_idx)
        .unwrap_or((axis[axis.len() - 1] - axis[0]) / 4.0);

    let model = |p: &Vector3<f64>, l: f64| p[0] * profile.intensity((l - p[1]) / p[2]);
    let cost = |p: &Vector3<f64>| -> f64 {
        axis.iter()
            .zip(intensity)
            .map(|(&l, &y)| (model(p, l) - y).powi(2))
            .sum()
    };

    let mut p = Vector3::new(peak, axis[peak_idx], width0);
    let mut current = cost(&p);
    let mut damping = 1e-3;
    for _ in 0..500 {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&l, &y) in axis.iter().zip(intensity) {
            let r = model(&p, l) - y;
            let mut g = Vector3::zeros();
            for k in 0..3 {
                let h = 1e-7 * p[k].abs().max(1e-6);
                let mut up = p;
                let mut dn = p;
                up[k] += h;
                dn[k] -= h;
                g[k] = (model(&up, l) - model(&dn, l)) / (2.0 * h);
            }
            jtj += g * g.transpose();
            jtr += g * r;
        }
        let mut improved = false;
        while damping < 1e12 {
            let mut a = jtj;
            for k in 0..3 {
                a[(k, k)] += damping * jtj[(k, k)].max(1e-30);
            }
            let Some(step) = a.lu().solve(&(-jtr)) else {
                damping *= 10.0;
                continue;
            };
            let trial = p + step;
            let trial_cost = if trial[2] > 0.0 { cost(&trial) } else { f64::INFINITY };
            if trial_cost < current {
                let rel = step.norm() / p.norm();
                p = trial;
                let done = (current - trial_cost) <= 1e-15 * current.max(1e-300) || rel < 1e-13;
                current = trial_cost;
                damping = (damping / 10.0).max(1e-12);
                improved = true;
                if done {
                    return Ok(TuningFit {
                        amplitude: p[0],
                        center: p[1],
                        fwhm: p[2],
                        residual: current,
                    });
                }
                break;
            }
            damping *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok(TuningFit {
        amplitude: p[0],
        center: p[1],
        fwhm: p[2],
        residual: current,
    })
}

/// Width between the half-maximum crossings around `peak_idx`, linearly
/// interpolated.
pub(crate) fn half_max_width(axis: &[f64], values: &[f64], peak_idx: usize) -> Option<f64> {
    let half = values[peak_idx] / 2.0;
    let left = (1..=peak_idx).rev().find(|&k| values[k - 1] < half).map(|k| {
        let (x0, x1, y0, y1) = (axis[k - 1], axis[k], values[k - 1], values[k]);
        x0 + (half - y0) * (x1 - x0) / (y1 - y0)
    })?;
    let right = (peak_idx..values.len() - 1)
        .find(|&k| values[k + 1] < half)
        .map(|k| {
            let (x0, x1, y0, y1) = (axis[k], axis[k + 1], values[k], values[k + 1]);
            x0 + (half - y0) * (x1 - x0) / (y1 - y0)
        })?;
    Some(right - left)
}

/// Normalized overlap of two tuning curves sampled on a shared axis.
///
/// The amplitude metric is ∫√(I_a I_b) / √(∫I_a ∫I_b); the intensity metric
/// is ∫I_a I_b / √(∫I_a² ∫I_b²).
pub fn curve_overlap(a: &ShgCurve, b: &ShgCurve, metric: OverlapMetric) -> Result<f64> {
    let axis = &a.wavelength_axis;
    if axis.len() != b.wavelength_axis.len()
        || axis
            .iter()
            .zip(&b.wavelength_axis)
            .any(|(x, y)| (x - y).abs() > 1e-9)
    {
        return Err(Error::domain("curves are sampled on different axes"));
    }
    let (num, da, db) = match metric {
        OverlapMetric::Amplitude => {
            let cross: Vec<f64> = a.intensity.iter().zip(&b.intensity).map(|(x, y)| (x * y).sqrt()).collect();
            (
                trapezoid(axis, &cross),
                trapezoid(axis, &a.intensity),
                trapezoid(axis, &b.intensity),
            )
        }
        OverlapMetric::Intensity => {
            let cross: Vec<f64> = a.intensity.iter().zip(&b.intensity).map(|(x, y)| x * y).collect();
            let sa: Vec<f64> = a.intensity.iter().map(|x| x * x).collect();
            let sb: Vec<f64> = b.intensity.iter().map(|x| x * x).collect();
            (trapezoid(axis, &cross), trapezoid(axis, &sa), trapezoid(axis, &sb))
        }
    };
    if !(da > 0.0 && db > 0.0) {
        return Err(Error::domain("a tuning curve integrates to zero"));
    }
    Ok((num / (da * db).sqrt()).clamp(0.0, 1.0))
}
