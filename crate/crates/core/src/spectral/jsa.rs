//! Joint spectral amplitudes on uniform wavelength grids.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::phase_matching::{pump_amplitude, PhaseMatchingSpec};
use super::{check_axis, OverlapMetric};
use crate::error::{Error, Result};
use crate::polarization::{PumpConfig, PumpRegime};

const MIN_AXIS_POINTS: usize = 64;
const MIN_SAMPLES_PER_FWHM: f64 = 8.0;
/// The grid must reach this many FWHMs of the JSA on either side of its centre.
const COVERAGE_WIDTHS: f64 = 1.5;

/// Square wavelength grid shared by the signal and idler axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Grid centre, nm. Normally the degenerate wavelength.
    pub center: f64,
    pub half_span: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(center: f64, half_span: f64, points: usize) -> Result<Self> {
        let g = GridSpec {
            center,
            half_span,
            points,
        };
        g.validate()?;
        Ok(g)
    }

    /// A 1024-point, ±6 nm grid about the degenerate wavelength of `pm`.
    pub fn default_for(pm: &PhaseMatchingSpec) -> Self {
        GridSpec {
            center: pm.center_wavelength,
            half_span: 6.0,
            points: 1024,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < MIN_AXIS_POINTS {
            return Err(Error::domain(format!(
                "grid needs at least {MIN_AXIS_POINTS} points per axis, got {}",
                self.points
            )));
        }
        if !(self.half_span > 0.0) || !(self.center > self.half_span) {
            return Err(Error::domain("grid half-span must be positive and below the centre"));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_span / (self.points - 1) as f64
    }

    pub fn axis(&self) -> Vec<f64> {
        super::wavelength_axis(self.center, self.half_span, self.points)
    }

    /// Same span at twice the sampling density; every other sample coincides.
    pub fn refined(&self) -> Self {
        GridSpec {
            points: 2 * self.points - 1,
            ..*self
        }
    }

    /// Same span at roughly twice the sampling density.
    pub fn doubled(&self) -> Self {
        GridSpec {
            points: 2 * self.points,
            ..*self
        }
    }
}

/// Complex f(λ_s, λ_i), rows indexed by signal and columns by idler,
/// normalized so that ∬|f|² dλ_s dλ_i = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct JsaGrid {
    signal_axis: Vec<f64>,
    idler_axis: Vec<f64>,
    amplitude: DMatrix<Complex64>,
}

fn check_uniform(axis: &[f64], what: &str) -> Result<f64> {
    check_axis(axis, what)?;
    if axis.len() < MIN_AXIS_POINTS {
        return Err(Error::domain(format!(
            "{what} needs at least {MIN_AXIS_POINTS} samples, got {}",
            axis.len()
        )));
    }
    let step = (axis[axis.len() - 1] - axis[0]) / (axis.len() - 1) as f64;
    if axis
        .windows(2)
        .any(|w| ((w[1] - w[0]) - step).abs() > 1e-6 * step)
    {
        return Err(Error::domain(format!("{what} must be uniformly spaced")));
    }
    Ok(step)
}

impl JsaGrid {
    /// Wraps an amplitude array, rescaling it to unit L² norm.
    pub fn new(
        signal_axis: Vec<f64>,
        idler_axis: Vec<f64>,
        amplitude: DMatrix<Complex64>,
    ) -> Result<Self> {
        let hs = check_uniform(&signal_axis, "signal axis")?;
        let hi = check_uniform(&idler_axis, "idler axis")?;
        if amplitude.nrows() != signal_axis.len() || amplitude.ncols() != idler_axis.len() {
            return Err(Error::domain(format!(
                "amplitude is {}x{} but axes are {} and {}",
                amplitude.nrows(),
                amplitude.ncols(),
                signal_axis.len(),
                idler_axis.len()
            )));
        }
        let norm = (amplitude.iter().map(|z| z.norm_sqr()).sum::<f64>() * hs * hi).sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegenerateState("joint spectral amplitude vanishes on the grid".into()));
        }
        Ok(JsaGrid {
            signal_axis,
            idler_axis,
            amplitude: amplitude / Complex64::from(norm),
        })
    }

    /// Samples `f` on the grid (rows in parallel) and normalizes.
    pub fn from_fn<F>(signal_axis: Vec<f64>, idler_axis: Vec<f64>, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let rows: Vec<Vec<Complex64>> = signal_axis
            .par_iter()
            .map(|&ls| idler_axis.iter().map(|&li| f(ls, li)).collect())
            .collect();
        let data: Vec<Complex64> = rows.into_iter().flatten().collect();
        let amplitude = DMatrix::from_row_slice(signal_axis.len(), idler_axis.len(), &data);
        JsaGrid::new(signal_axis, idler_axis, amplitude)
    }

    pub fn signal_axis(&self) -> &[f64] {
        &self.signal_axis
    }

    pub fn idler_axis(&self) -> &[f64] {
        &self.idler_axis
    }

    pub fn amplitude(&self) -> &DMatrix<Complex64> {
        &self.amplitude
    }

    fn cell_area(&self) -> f64 {
        let step = |a: &[f64]| (a[a.len() - 1] - a[0]) / (a.len() - 1) as f64;
        step(&self.signal_axis) * step(&self.idler_axis)
    }

    /// ∬|f|² by grid quadrature; 1 up to rounding after construction.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitude.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell_area()
    }

    fn same_axes(&self, other: &JsaGrid) -> bool {
        let eq = |a: &[f64], b: &[f64]| {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9)
        };
        eq(&self.signal_axis, &other.signal_axis) && eq(&self.idler_axis, &other.idler_axis)
    }

    fn is_square(&self) -> bool {
        self.signal_axis.len() == self.idler_axis.len()
            && self
                .signal_axis
                .iter()
                .zip(&self.idler_axis)
                .all(|(x, y)| (x - y).abs() <= 1e-9)
    }

    /// |⟨f|g⟩| between two JSAs on the same grid.
    pub fn overlap(&self, other: &JsaGrid) -> Result<f64> {
        if !self.same_axes(other) {
            return Err(Error::domain("JSAs are sampled on different grids"));
        }
        let cross: Complex64 = self
            .amplitude
            .iter()
            .zip(other.amplitude.iter())
            .map(|(f, g)| f.conj() * g)
            .sum();
        let nf: f64 = self.amplitude.iter().map(|z| z.norm_sqr()).sum();
        let ng: f64 = other.amplitude.iter().map(|z| z.norm_sqr()).sum();
        Ok((cross.norm() / (nf * ng).sqrt()).min(1.0))
    }

    /// Orientation (degrees from the signal axis, in (−90, 90]) of the major
    /// principal axis of |f|².
    pub fn principal_axis_deg(&self) -> f64 {
        let mut w_sum = 0.0;
        let (mut mx, mut my) = (0.0, 0.0);
        for (i, &x) in self.signal_axis.iter().enumerate() {
            for (j, &y) in self.idler_axis.iter().enumerate() {
                let w = self.amplitude[(i, j)].norm_sqr();
                w_sum += w;
                mx += w * x;
                my += w * y;
            }
        }
        mx /= w_sum;
        my /= w_sum;
        let (mut cxx, mut cyy, mut cxy) = (0.0, 0.0, 0.0);
        for (i, &x) in self.signal_axis.iter().enumerate() {
            for (j, &y) in self.idler_axis.iter().enumerate() {
                let w = self.amplitude[(i, j)].norm_sqr();
                cxx += w * (x - mx) * (x - mx);
                cyy += w * (y - my) * (y - my);
                cxy += w * (x - mx) * (y - my);
            }
        }
        let angle = 0.5 * (2.0 * cxy).atan2(cxx - cyy).to_degrees();
        if angle <= -90.0 {
            angle + 180.0
        } else {
            angle
        }
    }

    /// Schmidt number K = 1 / Tr(ρ_s²) of the discretized two-photon state.
    pub fn schmidt_number(&self) -> f64 {
        let total: f64 = self.amplitude.iter().map(|z| z.norm_sqr()).sum();
        let f = &self.amplitude / Complex64::from(total.sqrt());
        let rho = &f * f.adjoint();
        1.0 / rho.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Marginal spectrum ∫|f|² dλ_i over the signal axis.
    pub fn signal_marginal(&self) -> Vec<f64> {
        let area = self.cell_area();
        self.amplitude
            .row_iter()
            .map(|r| r.iter().map(|z| z.norm_sqr()).sum::<f64>() * area)
            .collect()
    }

    /// Every `stride`-th sample along both axes, renormalized. Meant for
    /// plot output, not for overlaps.
    pub fn decimated(&self, stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(Error::domain("decimation stride must be positive"));
        }
        let pick = |a: &[f64]| a.iter().step_by(stride).copied().collect::<Vec<_>>();
        let (s, i) = (pick(&self.signal_axis), pick(&self.idler_axis));
        let amp = DMatrix::from_fn(s.len(), i.len(), |r, c| self.amplitude[(r * stride, c * stride)]);
        JsaGrid::new(s, i, amp)
    }

    /// Writes the grid as CSV: two header rows holding the signal and idler
    /// axes, then one row per signal sample of `re,im` pairs over the idler
    /// axis.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let join = |a: &[f64]| a.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",");
        writeln!(w, "signal_nm,{}", join(&self.signal_axis))?;
        writeln!(w, "idler_nm,{}", join(&self.idler_axis))?;
        for row in self.amplitude.row_iter() {
            let line = row
                .iter()
                .map(|z| format!("{:e},{:e}", z.re, z.im))
                .collect::<Vec<_>>()
                .join(",");
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let bad = |detail: String| Error::Parse {
            what: "JSA CSV",
            detail,
        };
        let mut lines = r.lines();
        let mut header = |tag: &str| -> Result<Vec<f64>> {
            let line = lines
                .next()
                .ok_or_else(|| bad(format!("missing `{tag}` header")))?
                .map_err(|e| bad(e.to_string()))?;
            let mut fields = line.split(',');
            if fields.next() != Some(tag) {
                return Err(bad(format!("expected `{tag}` header row")));
            }
            fields
                .map(|f| f.trim().parse::<f64>().map_err(|e| bad(format!("{tag}: {e}"))))
                .collect()
        };
        let signal_axis = header("signal_nm")?;
        let idler_axis = header("idler_nm")?;
        let mut data = Vec::with_capacity(signal_axis.len() * idler_axis.len());
        for (k, line) in lines.enumerate() {
            let line = line.map_err(|e| bad(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let values: Vec<f64> = line
                .split(',')
                .map(|f| f.trim().parse::<f64>().map_err(|e| bad(format!("row {k}: {e}"))))
                .collect::<Result<_>>()?;
            if values.len() != 2 * idler_axis.len() {
                return Err(bad(format!(
                    "row {k} has {} values, expected {}",
                    values.len(),
                    2 * idler_axis.len()
                )));
            }
            data.extend(values.chunks(2).map(|p| Complex64::new(p[0], p[1])));
        }
        if data.len() != signal_axis.len() * idler_axis.len() {
            return Err(bad(format!(
                "expected {} amplitude rows",
                signal_axis.len()
            )));
        }
        let amplitude = DMatrix::from_row_slice(signal_axis.len(), idler_axis.len(), &data);
        JsaGrid::new(signal_axis, idler_axis, amplitude)
    }
}

/// Pump envelope sampled over a signal × idler grid.
///
/// Each value depends only on the energy-conserving pump wavelength of the
/// pair.
pub fn pump_envelope(pump: &PumpConfig, signal_axis: &[f64], idler_axis: &[f64]) -> Result<DMatrix<f64>> {
    pump.validate()?;
    Ok(DMatrix::from_fn(signal_axis.len(), idler_axis.len(), |i, j| {
        pump_amplitude(pump, signal_axis[i], idler_axis[j])
    }))
}

/// Half-maximum widths (signal, idler) of the JSA intensity, in nm, from a
/// Gaussian approximation of the product of the two ridges.
///
/// Fails when the ridges are parallel and the JSA is unbounded.
pub fn jsa_coverage_widths(pm: &PhaseMatchingSpec, pump: &PumpConfig) -> Result<(f64, f64)> {
    let (ns, ni) = pm.normal();
    let dfw = pm.across_ridge_fwhm();
    // pump intensity FWHM measured in λ_s + λ_i near degeneracy
    let pump_sum_fwhm = 4.0 * pump.effective_bandwidth() / 2f64.sqrt();
    let p2 = pump_sum_fwhm * pump_sum_fwhm;
    let a = ns * ns / (dfw * dfw) + 1.0 / p2;
    let b = ns * ni / (dfw * dfw) + 1.0 / p2;
    let c = ni * ni / (dfw * dfw) + 1.0 / p2;
    let det = a * c - b * b;
    if !(det > 1e-12 * a * c) {
        return Err(Error::domain(
            "phase-matching ridge is parallel to the pump ridge; the JSA is unbounded",
        ));
    }
    Ok(((c / det).sqrt(), (a / det).sqrt()))
}

/// JSA = phase-matching amplitude × pump envelope on a square grid.
pub fn build_jsa(pm: &PhaseMatchingSpec, pump: &PumpConfig, grid: &GridSpec) -> Result<JsaGrid> {
    pm.validate()?;
    pump.validate()?;
    grid.validate()?;

    let (ws, wi) = jsa_coverage_widths(pm, pump)?;
    let needed = COVERAGE_WIDTHS * ws.max(wi);
    let lo = grid.center - grid.half_span;
    let hi = grid.center + grid.half_span;
    if lo > pm.center_wavelength - needed || hi < pm.center_wavelength + needed {
        return Err(Error::domain(format!(
            "grid [{lo}, {hi}] nm does not cover ±{needed:.4} nm about the degenerate wavelength"
        )));
    }

    // The CW ridge is deliberately narrower than any practical grid step;
    // only the phase-matching and pulsed-pump widths must be resolved.
    let (ns, ni) = pm.normal();
    let dfw = pm.across_ridge_fwhm();
    let mut narrowest = dfw / ns.abs().max(ni.abs());
    if pump.regime == PumpRegime::Pulsed {
        narrowest = narrowest.min(4.0 * pump.effective_bandwidth() / 2f64.sqrt());
    }
    let samples = narrowest / grid.step();
    if samples < MIN_SAMPLES_PER_FWHM {
        return Err(Error::Resolution(format!(
            "{samples:.2} samples per narrowest FWHM ({narrowest:.4} nm); need at least {MIN_SAMPLES_PER_FWHM}"
        )));
    }

    let axis = grid.axis();
    JsaGrid::from_fn(axis.clone(), axis, |ls, li| {
        Complex64::from(pm.amplitude(ls, li) * pump_amplitude(pump, ls, li))
    })
}

/// Overlap between a JSA and its mirror image under signal ↔ idler exchange.
///
/// Amplitude metric: |∬ f(λ_s,λ_i) f*(λ_i,λ_s)|. Intensity metric:
/// ∬|f(λ_s,λ_i)|²|f(λ_i,λ_s)|² / ∬|f|⁴.
pub fn exchange_overlap(jsa: &JsaGrid, metric: OverlapMetric) -> Result<f64> {
    if !jsa.is_square() {
        return Err(Error::domain(
            "exchange overlap needs identical signal and idler axes",
        ));
    }
    let f = &jsa.amplitude;
    let n = f.nrows();
    let value = match metric {
        OverlapMetric::Amplitude => {
            let (cross, norm) = (0..n)
                .into_par_iter()
                .map(|i| {
                    let mut cross = Complex64::default();
                    let mut norm = 0.0;
                    for j in 0..n {
                        cross += f[(i, j)] * f[(j, i)].conj();
                        norm += f[(i, j)].norm_sqr();
                    }
                    (cross, norm)
                })
                .collect::<Vec<_>>()
                .into_iter()
                .fold((Complex64::default(), 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
            cross.norm() / norm
        }
        OverlapMetric::Intensity => {
            let (cross, norm) = (0..n)
                .map(|i| {
                    (0..n).fold((0.0, 0.0), |(c, m), j| {
                        let a = f[(i, j)].norm_sqr();
                        (c + a * f[(j, i)].norm_sqr(), m + a * a)
                    })
                })
                .fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
            cross / norm
        }
    };
    Ok(value.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterShape {
    Rectangular,
    Gaussian,
}

/// Band-pass filter acting on one photon's wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec {
    pub center_wavelength: f64,
    /// Full passband width (rectangular) or intensity FWHM (Gaussian), nm.
    pub bandwidth_fwhm: f64,
    pub shape: FilterShape,
}

impl FilterSpec {
    pub fn new(center_wavelength: f64, bandwidth_fwhm: f64, shape: FilterShape) -> Result<Self> {
        if !(bandwidth_fwhm > 0.0) {
            return Err(Error::domain(format!(
                "filter bandwidth must be positive, got {bandwidth_fwhm}"
            )));
        }
        Ok(FilterSpec {
            center_wavelength,
            bandwidth_fwhm,
            shape,
        })
    }

    /// Field transmission at `lambda`.
    pub fn amplitude(&self, lambda: f64) -> f64 {
        let u = (lambda - self.center_wavelength) / self.bandwidth_fwhm;
        match self.shape {
            FilterShape::Rectangular => {
                if u.abs() <= 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            FilterShape::Gaussian => (-2.0 * std::f64::consts::LN_2 * u * u).exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilteredJsa {
    pub jsa: JsaGrid,
    /// Fraction of pair probability passing both filters.
    pub heralding_transmission: f64,
}

/// Multiplies the JSA by the two filter transmissions and renormalizes.
pub fn apply_filter(jsa: &JsaGrid, filter_s: &FilterSpec, filter_i: &FilterSpec) -> Result<FilteredJsa> {
    for (name, filter, axis) in [
        ("signal", filter_s, &jsa.signal_axis),
        ("idler", filter_i, &jsa.idler_axis),
    ] {
        if !(filter.bandwidth_fwhm > 0.0) {
            return Err(Error::domain(format!("{name} filter bandwidth must be positive")));
        }
        let (lo, hi) = (axis[0], axis[axis.len() - 1]);
        if filter.center_wavelength < lo || filter.center_wavelength > hi {
            return Err(Error::domain(format!(
                "{name} filter centre {} nm lies outside the grid [{lo}, {hi}]",
                filter.center_wavelength
            )));
        }
    }
    let ts: Vec<f64> = jsa.signal_axis.iter().map(|&l| filter_s.amplitude(l)).collect();
    let ti: Vec<f64> = jsa.idler_axis.iter().map(|&l| filter_i.amplitude(l)).collect();
    let filtered = DMatrix::from_fn(ts.len(), ti.len(), |i, j| jsa.amplitude[(i, j)] * (ts[i] * ti[j]));
    let before: f64 = jsa.amplitude.iter().map(|z| z.norm_sqr()).sum();
    let after: f64 = filtered.iter().map(|z| z.norm_sqr()).sum();
    if !(after > 0.0) {
        return Err(Error::domain("filters pass no part of the JSA"));
    }
    Ok(FilteredJsa {
        jsa: JsaGrid::new(jsa.signal_axis.clone(), jsa.idler_axis.clone(), filtered)?,
        heralding_transmission: after / before,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA0: f64 = 1554.44;

    fn pm() -> PhaseMatchingSpec {
        PhaseMatchingSpec::new(LAMBDA0, 0.3325, -33.5).unwrap()
    }

    fn small_grid() -> GridSpec {
        GridSpec::new(LAMBDA0, 6.0, 256).unwrap()
    }

    #[test]
    fn construction_normalizes() {
        let jsa = build_jsa(&pm(), &PumpConfig::pulsed(777.22, 0.3), &small_grid()).unwrap();
        assert!((jsa.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coarse_grid_is_a_resolution_error() {
        let grid = GridSpec::new(LAMBDA0, 6.0, 64).unwrap();
        let err = build_jsa(&pm(), &PumpConfig::pulsed(777.22, 0.3), &grid).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)), "{err}");
    }

    #[test]
    fn narrow_grid_fails_coverage() {
        let grid = GridSpec::new(LAMBDA0, 2.0, 512).unwrap();
        assert!(matches!(
            build_jsa(&pm(), &PumpConfig::pulsed(777.22, 0.3), &grid),
            Err(Error::InputDomain(_))
        ));
    }

    #[test]
    fn axes_must_be_long_enough() {
        let axis: Vec<f64> = (0..10).map(|k| 1550.0 + k as f64).collect();
        let amp = DMatrix::from_element(10, 10, Complex64::from(1.0));
        assert!(JsaGrid::new(axis.clone(), axis, amp).is_err());
    }

    #[test]
    fn non_square_grid_rejected_by_exchange_overlap() {
        let s = GridSpec::new(LAMBDA0, 6.0, 128).unwrap().axis();
        let i = GridSpec::new(LAMBDA0, 6.0, 100).unwrap().axis();
        let jsa = JsaGrid::from_fn(s, i, |a, b| Complex64::from((-(a - LAMBDA0).powi(2) - (b - LAMBDA0).powi(2)).exp()))
            .unwrap();
        assert!(matches!(
            exchange_overlap(&jsa, OverlapMetric::Amplitude),
            Err(Error::InputDomain(_))
        ));
    }

    #[test]
    fn filter_outside_grid_rejected() {
        let jsa = build_jsa(&pm(), &PumpConfig::pulsed(777.22, 0.3), &small_grid()).unwrap();
        let f = FilterSpec::new(1500.0, 0.25, FilterShape::Rectangular).unwrap();
        let ok = FilterSpec::new(LAMBDA0, 0.25, FilterShape::Rectangular).unwrap();
        assert!(apply_filter(&jsa, &f, &ok).is_err());
        assert!(apply_filter(&jsa, &ok, &f).is_err());
        assert!(FilterSpec::new(LAMBDA0, 0.0, FilterShape::Gaussian).is_err());
    }

    #[test]
    fn all_pass_filter_is_identity() {
        let jsa = build_jsa(&pm(), &PumpConfig::pulsed(777.22, 0.3), &small_grid()).unwrap();
        let wide = FilterSpec::new(LAMBDA0, 1000.0, FilterShape::Rectangular).unwrap();
        let out = apply_filter(&jsa, &wide, &wide).unwrap();
        assert_eq!(out.heralding_transmission, 1.0);
        assert!((out.jsa.overlap(&jsa).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let grid = GridSpec::new(LAMBDA0, 6.0, 128).unwrap();
        let pump = PumpConfig::pulsed(777.22, 0.3);
        let pm = pm().with_fwhm(0.5);
        let jsa = build_jsa(&pm, &pump, &grid).unwrap();
        let mut buf = Vec::new();
        jsa.write_csv(&mut buf).unwrap();
        let back = JsaGrid::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.signal_axis(), jsa.signal_axis());
        assert!((back.overlap(&jsa).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn malformed_csv_reports_parse_error() {
        let text = "signal_nm,1,2\nidler_nm,1,2\n0,0,1\n";
        assert!(matches!(
            JsaGrid::read_csv(text.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }
}
