//! Source configuration: JSON text with every physical quantity written as a
//! `{"value": .., "unit": ..}` pair.
//!
//! Validation walks the whole document and collects every problem before
//! giving up, so a bad file is reported in one pass.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::polarization::{PumpConfig, PumpRegime, SplitterParams, CW_LINEWIDTH_FLOOR_NM};
use crate::spectral::{FilterShape, FilterSpec, GridSpec, PhaseMatchingSpec, PmProfile};
use crate::temporal::{transform_limited_coherence_time, GroupIndices, WalkoffSpec};
use crate::units::{angle_to_rad, wavelength_to_nm, Length, TimeSpan};

/// One validation failure, addressed by its dotted field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigIssue {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.path, self.message)
    }
}

/// Which quantity stands for the spectral mismatch of the two waveguides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterWaveguideOverlap {
    /// Amplitude overlap of the two SHG tuning curves.
    #[default]
    ShgCurve,
    /// |⟨f₁|f₂⟩| of the two (filtered) JSAs.
    Jsa,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterPair {
    pub signal: FilterSpec,
    pub idler: FilterSpec,
}

/// Fabrication parameters kept for reference. Nothing is computed from them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChipGeometry {
    pub poling_period: Length,
    pub waveguide_width: Length,
    pub coupler_length: Length,
    pub branch_angle_deg: f64,
    pub input_pitch: Length,
    pub output_pitch: Length,
}

impl Default for ChipGeometry {
    fn default() -> Self {
        ChipGeometry {
            poling_period: Length::from_um(9.08),
            waveguide_width: Length::from_um(7.0),
            coupler_length: Length::from_um(480.0),
            branch_angle_deg: 0.6,
            input_pitch: Length::from_um(80.0),
            output_pitch: Length::from_um(127.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Expected coincidences per analysis setting summed over its basis.
    pub mean_total: f64,
    /// Accidental coincidences per setting.
    pub background: f64,
    pub seed: u64,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig {
            mean_total: 1e5,
            background: 0.0,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub name: String,
    pub splitter: SplitterParams,
    pub pump: PumpConfig,
    pub pm_wg1: PhaseMatchingSpec,
    pub pm_wg2: PhaseMatchingSpec,
    pub filters: Option<FilterPair>,
    pub walkoff: WalkoffSpec,
    /// Compensating fibre; `None` cuts it to cancel the chip walk-off exactly.
    pub fiber_length: Option<Length>,
    pub grid: GridSpec,
    pub inter_waveguide: InterWaveguideOverlap,
    pub chip_geometry: ChipGeometry,
    pub detection: DetectionConfig,
}

pub const DEGENERATE_WAVELENGTH_NM: f64 = 1554.44;
pub const PUMP_WAVELENGTH_NM: f64 = 777.22;

impl SourceConfig {
    /// The fabricated chip under 0.3 nm pulsed pumping with 0.25 nm filters.
    pub fn paper_pulsed() -> Self {
        let filter = FilterSpec {
            center_wavelength: DEGENERATE_WAVELENGTH_NM,
            bandwidth_fwhm: 0.25,
            shape: FilterShape::Rectangular,
        };
        SourceConfig {
            name: "paper_pulsed".into(),
            pump: PumpConfig::pulsed(PUMP_WAVELENGTH_NM, 0.3),
            filters: Some(FilterPair {
                signal: filter,
                idler: filter,
            }),
            walkoff: WalkoffSpec::fabricated(transform_limited_coherence_time(DEGENERATE_WAVELENGTH_NM, 0.25)),
            ..Self::paper_cw()
        }
    }

    /// The fabricated chip under CW pumping, unfiltered.
    pub fn paper_cw() -> Self {
        let pm = |fwhm| PhaseMatchingSpec {
            center_wavelength: DEGENERATE_WAVELENGTH_NM,
            fwhm,
            orientation_deg: -33.5,
            profile: PmProfile::SincSquaredAmplitude,
        };
        SourceConfig {
            name: "paper_cw".into(),
            splitter: SplitterParams::fabricated(),
            pump: PumpConfig::cw(PUMP_WAVELENGTH_NM),
            pm_wg1: pm(0.306),
            pm_wg2: pm(0.359),
            filters: None,
            walkoff: WalkoffSpec::fabricated(transform_limited_coherence_time(
                DEGENERATE_WAVELENGTH_NM,
                0.5 * (0.306 + 0.359),
            )),
            fiber_length: None,
            grid: GridSpec {
                center: DEGENERATE_WAVELENGTH_NM,
                half_span: 6.0,
                points: 1024,
            },
            inter_waveguide: InterWaveguideOverlap::ShgCurve,
            chip_geometry: ChipGeometry::default(),
            detection: DetectionConfig::default(),
        }
    }

    /// Mean of the two waveguides' phase matching, used for the exchange
    /// symmetry of the pair spectrum.
    pub fn pm_mean(&self) -> PhaseMatchingSpec {
        PhaseMatchingSpec {
            center_wavelength: 0.5 * (self.pm_wg1.center_wavelength + self.pm_wg2.center_wavelength),
            fwhm: 0.5 * (self.pm_wg1.fwhm + self.pm_wg2.fwhm),
            orientation_deg: 0.5 * (self.pm_wg1.orientation_deg + self.pm_wg2.orientation_deg),
            profile: self.pm_wg1.profile,
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_config(&self.to_json().to_string()).map(|_| ())
    }

    /// The configuration in the file schema read by [`validate_config`].
    pub fn to_json(&self) -> Value {
        let q = |v: f64, unit: &str| json!({"value": v, "unit": unit});
        let pm = |p: &PhaseMatchingSpec| {
            json!({
                "center_wavelength": q(p.center_wavelength, "nm"),
                "fwhm": q(p.fwhm, "nm"),
                "orientation": q(p.orientation_deg, "deg"),
                "profile": p.profile,
            })
        };
        let filter = |f: &FilterSpec| {
            json!({
                "center_wavelength": q(f.center_wavelength, "nm"),
                "bandwidth_fwhm": q(f.bandwidth_fwhm, "nm"),
                "shape": f.shape,
            })
        };
        let mut walkoff = json!({
            "chip_length": q(self.walkoff.chip_length.mm(), "mm"),
            "poled_length": q(self.walkoff.poled_length.mm(), "mm"),
            "fiber_birefringence": self.walkoff.fiber_birefringence,
            "coherence_time": q(self.walkoff.coherence_time.ps(), "ps"),
        });
        match self.walkoff.group_indices {
            GroupIndices::Difference(d) => walkoff["delta_group_index"] = json!(d),
            GroupIndices::Pair { h, v } => {
                walkoff["group_index_h"] = json!(h);
                walkoff["group_index_v"] = json!(v);
            }
        }
        if let Some(l) = self.fiber_length {
            walkoff["fiber_length"] = q(l.mm(), "mm");
        }
        let g = &self.chip_geometry;
        json!({
            "name": self.name,
            "splitter": {"t_h": self.splitter.t_h(), "t_v": self.splitter.t_v()},
            "pump": {
                "regime": self.pump.regime,
                "center_wavelength": q(self.pump.center_wavelength, "nm"),
                "bandwidth_fwhm": q(self.pump.bandwidth_fwhm, "nm"),
                "cw_linewidth": q(self.pump.cw_linewidth, "nm"),
                "phase": q(self.pump.phase, "rad"),
                "weight_1": self.pump.weight_1,
                "weight_2": self.pump.weight_2,
            },
            "pm_wg1": pm(&self.pm_wg1),
            "pm_wg2": pm(&self.pm_wg2),
            "filters": self.filters.map(|f| json!({"signal": filter(&f.signal), "idler": filter(&f.idler)})),
            "walkoff": walkoff,
            "grid": {"half_span": q(self.grid.half_span, "nm"), "points": self.grid.points},
            "inter_waveguide_overlap": self.inter_waveguide,
            "chip_geometry": {
                "poling_period": q(g.poling_period.mm(), "mm"),
                "waveguide_width": q(g.waveguide_width.mm(), "mm"),
                "coupler_length": q(g.coupler_length.mm(), "mm"),
                "branch_angle": q(g.branch_angle_deg, "deg"),
                "input_pitch": q(g.input_pitch.mm(), "mm"),
                "output_pitch": q(g.output_pitch.mm(), "mm"),
            },
            "detection": {
                "mean_total": self.detection.mean_total,
                "background": self.detection.background,
                "seed": self.detection.seed,
            },
        })
    }
}

pub fn load_config(path: &Path) -> Result<SourceConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    validate_config(&text)
}

/// Parses and checks a configuration, returning either a complete
/// [`SourceConfig`] or every problem found.
pub fn validate_config(text: &str) -> Result<SourceConfig> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        Error::Config(vec![ConfigIssue {
            path: "<document>".into(),
            message: format!("is not valid JSON: {e}"),
        }])
    })?;
    let mut cx = Walker::default();
    let cfg = cx.source(&root);
    match cfg {
        Some(cfg) if cx.issues.is_empty() => Ok(cfg),
        _ => {
            if cx.issues.is_empty() {
                cx.issue("<document>", "could not be interpreted");
            }
            Err(Error::Config(cx.issues))
        }
    }
}

#[derive(Clone, Copy)]
enum Dim {
    Wavelength,
    Length,
    Degrees,
    Radians,
    Time,
}

#[derive(Default)]
struct Walker {
    issues: Vec<ConfigIssue>,
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

impl Walker {
    fn issue(&mut self, path: &str, message: impl Into<String>) {
        self.issues.push(ConfigIssue {
            path: path.to_string(),
            message: message.into(),
        });
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str, allowed: &[&str]) -> Option<&'a Map<String, Value>> {
        let Some(map) = v.as_object() else {
            self.issue(path, "must be an object");
            return None;
        };
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                self.issue(&join(path, key), "is not a recognized field");
            }
        }
        Some(map)
    }

    fn child<'a>(&mut self, map: &'a Map<String, Value>, path: &str, key: &str) -> Option<&'a Value> {
        match map.get(key) {
            Some(v) if !v.is_null() => Some(v),
            _ => {
                self.issue(&join(path, key), "is required but missing");
                None
            }
        }
    }

    fn number(&mut self, map: &Map<String, Value>, path: &str, key: &str) -> Option<f64> {
        let v = self.child(map, path, key)?;
        self.as_number(v, &join(path, key))
    }

    fn as_number(&mut self, v: &Value, path: &str) -> Option<f64> {
        match v.as_f64() {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.issue(path, "must be a finite number");
                None
            }
        }
    }

    fn optional_number(&mut self, map: &Map<String, Value>, path: &str, key: &str, default: f64) -> Option<f64> {
        match map.get(key) {
            None | Some(Value::Null) => Some(default),
            Some(v) => self.as_number(v, &join(path, key)),
        }
    }

    fn in_range(&mut self, v: Option<f64>, path: &str, lo: f64, hi: f64) -> Option<f64> {
        let v = v?;
        if (lo..=hi).contains(&v) {
            Some(v)
        } else {
            self.issue(path, format!("must lie in [{lo},{hi}]"));
            None
        }
    }

    fn positive(&mut self, v: Option<f64>, path: &str) -> Option<f64> {
        let v = v?;
        if v > 0.0 {
            Some(v)
        } else {
            self.issue(path, "must be positive");
            None
        }
    }

    /// A `{value, unit}` pair converted to the base unit of `dim`
    /// (nm, mm, ps, and deg or rad).
    fn quantity(&mut self, map: &Map<String, Value>, path: &str, key: &str, dim: Dim) -> Option<f64> {
        let v = self.child(map, path, key)?;
        self.as_quantity(v, &join(path, key), dim)
    }

    fn as_quantity(&mut self, v: &Value, path: &str, dim: Dim) -> Option<f64> {
        let obj = self.object(v, path, &["value", "unit"])?;
        let value = self.number(obj, path, "value");
        let unit = match obj.get("unit").and_then(Value::as_str) {
            Some(u) => u,
            None => {
                self.issue(&join(path, "unit"), "must be a unit string");
                return None;
            }
        };
        let value = value?;
        let converted = match dim {
            Dim::Wavelength => wavelength_to_nm(value, unit),
            Dim::Length => Length::from_tagged(value, unit).map(Length::mm),
            Dim::Degrees if unit == "deg" => Ok(value),
            Dim::Degrees => angle_to_rad(value, unit).map(f64::to_degrees),
            Dim::Radians => angle_to_rad(value, unit),
            Dim::Time => TimeSpan::from_tagged(value, unit).map(TimeSpan::ps),
        };
        match converted {
            Ok(x) => Some(x),
            Err(_) => {
                let expected = match dim {
                    Dim::Wavelength => "a wavelength unit (nm, pm, um, m)",
                    Dim::Length => "a length unit (m, cm, mm, um, nm, pm)",
                    Dim::Degrees | Dim::Radians => "an angle unit (deg, rad)",
                    Dim::Time => "a time unit (s, ns, ps, fs)",
                };
                self.issue(&join(path, "unit"), format!("must be {expected}, got `{unit}`"));
                None
            }
        }
    }

    fn enumerated<T: serde::de::DeserializeOwned>(&mut self, v: &Value, path: &str, choices: &str) -> Option<T> {
        match serde_json::from_value(v.clone()) {
            Ok(x) => Some(x),
            Err(_) => {
                self.issue(path, format!("must be one of {choices}"));
                None
            }
        }
    }

    fn source(&mut self, root: &Value) -> Option<SourceConfig> {
        let top = self.object(
            root,
            "",
            &[
                "name",
                "splitter",
                "pump",
                "pm_wg1",
                "pm_wg2",
                "filters",
                "walkoff",
                "grid",
                "inter_waveguide_overlap",
                "chip_geometry",
                "detection",
            ],
        )?;
        let name = match top.get("name") {
            None | Some(Value::Null) => "unnamed".to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => {
                self.issue("name", "must be a string");
                String::new()
            }
        };
        let splitter = self.child(top, "", "splitter").and_then(|v| self.splitter(v));
        let pump = self.child(top, "", "pump").and_then(|v| self.pump(v));
        let pm_wg1 = self.child(top, "", "pm_wg1").and_then(|v| self.pm(v, "pm_wg1"));
        let pm_wg2 = self.child(top, "", "pm_wg2").and_then(|v| self.pm(v, "pm_wg2"));
        let filters = match top.get("filters") {
            None | Some(Value::Null) => Some(None),
            Some(v) => self.filters(v).map(Some),
        };
        let default_coherence = {
            let bw = match (&filters, &pm_wg1, &pm_wg2) {
                (Some(Some(f)), _, _) => Some(f.signal.bandwidth_fwhm.min(f.idler.bandwidth_fwhm)),
                (_, Some(a), Some(b)) => Some(0.5 * (a.fwhm + b.fwhm)),
                _ => None,
            };
            let center = pm_wg1.map(|p| p.center_wavelength).unwrap_or(DEGENERATE_WAVELENGTH_NM);
            bw.map(|bw| transform_limited_coherence_time(center, bw))
        };
        let walkoff = self
            .child(top, "", "walkoff")
            .and_then(|v| self.walkoff(v, default_coherence));
        let center = pm_wg1.map(|p| p.center_wavelength);
        let grid = match top.get("grid") {
            None | Some(Value::Null) => center.map(|c| GridSpec {
                center: c,
                half_span: 6.0,
                points: 1024,
            }),
            Some(v) => self.grid(v, center),
        };
        let inter_waveguide = match top.get("inter_waveguide_overlap") {
            None | Some(Value::Null) => Some(InterWaveguideOverlap::default()),
            Some(v) => self.enumerated(v, "inter_waveguide_overlap", "`shg_curve`, `jsa`"),
        };
        let chip_geometry = match top.get("chip_geometry") {
            None | Some(Value::Null) => Some(ChipGeometry::default()),
            Some(v) => self.geometry(v),
        };
        let detection = match top.get("detection") {
            None | Some(Value::Null) => Some(DetectionConfig::default()),
            Some(v) => self.detection(v),
        };

        if let (Some(a), Some(b)) = (&pm_wg1, &pm_wg2) {
            if (a.center_wavelength - b.center_wavelength).abs() > 0.5 * (a.fwhm + b.fwhm) {
                self.issue("pm_wg2.center_wavelength", "must lie within one FWHM of pm_wg1.center_wavelength");
            }
            if a.profile != b.profile {
                self.issue("pm_wg2.profile", "must match pm_wg1.profile");
            }
        }
        let (walkoff, fiber_length) = walkoff?;
        Some(SourceConfig {
            name,
            splitter: splitter?,
            pump: pump?,
            pm_wg1: pm_wg1?,
            pm_wg2: pm_wg2?,
            filters: filters?,
            walkoff,
            fiber_length,
            grid: grid?,
            inter_waveguide: inter_waveguide?,
            chip_geometry: chip_geometry?,
            detection: detection?,
        })
    }

    fn splitter(&mut self, v: &Value) -> Option<SplitterParams> {
        let m = self.object(v, "splitter", &["t_h", "t_v"])?;
        let t_h = self.number(m, "splitter", "t_h");
        let t_h = self.in_range(t_h, "splitter.t_h", 0.0, 1.0);
        let t_v = self.number(m, "splitter", "t_v");
        let t_v = self.in_range(t_v, "splitter.t_v", 0.0, 1.0);
        SplitterParams::new(t_h?, t_v?).ok()
    }

    fn pump(&mut self, v: &Value) -> Option<PumpConfig> {
        let p = "pump";
        let m = self.object(
            v,
            p,
            &[
                "regime",
                "center_wavelength",
                "bandwidth_fwhm",
                "cw_linewidth",
                "phase",
                "weight_1",
                "weight_2",
            ],
        )?;
        let regime: Option<PumpRegime> = self
            .child(m, p, "regime")
            .and_then(|r| self.enumerated(r, "pump.regime", "`cw`, `pulsed`"));
        let center = self.quantity(m, p, "center_wavelength", Dim::Wavelength);
        let center = self.positive(center, "pump.center_wavelength");
        let phase = self.quantity(m, p, "phase", Dim::Radians);
        let w1 = self.optional_number(m, p, "weight_1", 1.0);
        let w1 = self.in_range(w1, "pump.weight_1", 0.0, f64::MAX);
        let w2 = self.optional_number(m, p, "weight_2", 1.0);
        let w2 = self.in_range(w2, "pump.weight_2", 0.0, f64::MAX);
        if let (Some(a), Some(b)) = (w1, w2) {
            if a == 0.0 && b == 0.0 {
                self.issue("pump.weight_2", "must be positive when pump.weight_1 is zero");
            }
        }
        let linewidth = match m.get("cw_linewidth") {
            None | Some(Value::Null) => Some(CW_LINEWIDTH_FLOOR_NM),
            Some(v) => {
                let x = self.as_quantity(v, "pump.cw_linewidth", Dim::Wavelength);
                self.positive(x, "pump.cw_linewidth")
            }
        };
        let bandwidth = match (regime?, m.get("bandwidth_fwhm")) {
            (PumpRegime::Cw, None | Some(Value::Null)) => Some(0.0),
            (PumpRegime::Cw, Some(v)) => {
                let x = self.as_quantity(v, "pump.bandwidth_fwhm", Dim::Wavelength);
                self.in_range(x, "pump.bandwidth_fwhm", 0.0, 0.0)
            }
            (PumpRegime::Pulsed, _) => {
                let x = self.quantity(m, p, "bandwidth_fwhm", Dim::Wavelength);
                self.positive(x, "pump.bandwidth_fwhm")
            }
        };
        let pump = PumpConfig {
            phase: phase?,
            weight_1: w1?,
            weight_2: w2?,
            center_wavelength: center?,
            bandwidth_fwhm: bandwidth?,
            regime: regime?,
            cw_linewidth: linewidth?,
        };
        pump.validate().ok()?;
        Some(pump)
    }

    fn pm(&mut self, v: &Value, p: &str) -> Option<PhaseMatchingSpec> {
        let m = self.object(v, p, &["center_wavelength", "fwhm", "orientation", "profile"])?;
        let center = self.quantity(m, p, "center_wavelength", Dim::Wavelength);
        let center = self.positive(center, &join(p, "center_wavelength"));
        let fwhm = self.quantity(m, p, "fwhm", Dim::Wavelength);
        let fwhm = self.positive(fwhm, &join(p, "fwhm"));
        let orientation = self.quantity(m, p, "orientation", Dim::Degrees);
        let orientation = match orientation {
            Some(o) if o > -90.0 && o < 0.0 => Some(o),
            Some(_) => {
                self.issue(&join(p, "orientation"), "must lie in (-90,0) deg");
                None
            }
            None => None,
        };
        let profile = match m.get("profile") {
            None | Some(Value::Null) => Some(PmProfile::SincSquaredAmplitude),
            Some(v) => self.enumerated(v, &join(p, "profile"), "`sinc_squared_amplitude`, `gaussian`"),
        };
        PhaseMatchingSpec::new(center?, fwhm?, orientation?)
            .ok()
            .map(|pm| pm.with_profile(profile.unwrap_or(PmProfile::SincSquaredAmplitude)))
            .filter(|_| profile.is_some())
    }

    fn filter(&mut self, v: &Value, p: &str) -> Option<FilterSpec> {
        let m = self.object(v, p, &["center_wavelength", "bandwidth_fwhm", "shape"])?;
        let center = self.quantity(m, p, "center_wavelength", Dim::Wavelength);
        let center = self.positive(center, &join(p, "center_wavelength"));
        let bw = self.quantity(m, p, "bandwidth_fwhm", Dim::Wavelength);
        let bw = self.positive(bw, &join(p, "bandwidth_fwhm"));
        let shape = match m.get("shape") {
            None | Some(Value::Null) => Some(FilterShape::Rectangular),
            Some(v) => self.enumerated(v, &join(p, "shape"), "`rectangular`, `gaussian`"),
        };
        FilterSpec::new(center?, bw?, shape?).ok()
    }

    fn filters(&mut self, v: &Value) -> Option<FilterPair> {
        let m = self.object(v, "filters", &["signal", "idler"])?;
        let signal = self.child(m, "filters", "signal").and_then(|v| self.filter(v, "filters.signal"));
        let idler = self.child(m, "filters", "idler").and_then(|v| self.filter(v, "filters.idler"));
        Some(FilterPair {
            signal: signal?,
            idler: idler?,
        })
    }

    fn walkoff(&mut self, v: &Value, default_coherence: Option<TimeSpan>) -> Option<(WalkoffSpec, Option<Length>)> {
        let p = "walkoff";
        let m = self.object(
            v,
            p,
            &[
                "delta_group_index",
                "group_index_h",
                "group_index_v",
                "chip_length",
                "poled_length",
                "fiber_birefringence",
                "fiber_length",
                "coherence_time",
            ],
        )?;
        let group_indices = match (m.get("delta_group_index"), m.get("group_index_h"), m.get("group_index_v")) {
            (Some(d), None, None) => self.as_number(d, "walkoff.delta_group_index").map(GroupIndices::Difference),
            (None, Some(h), Some(v)) => {
                let h = self.as_number(h, "walkoff.group_index_h");
                let v = self.as_number(v, "walkoff.group_index_v");
                Some(GroupIndices::Pair { h: h?, v: v? })
            }
            _ => {
                self.issue(
                    "walkoff.delta_group_index",
                    "is required (or both walkoff.group_index_h and walkoff.group_index_v instead)",
                );
                None
            }
        };
        let chip = self.quantity(m, p, "chip_length", Dim::Length);
        let chip = self.positive(chip, "walkoff.chip_length");
        let poled = self.quantity(m, p, "poled_length", Dim::Length);
        let poled = self.positive(poled, "walkoff.poled_length");
        if let (Some(c), Some(l)) = (chip, poled) {
            if l > c {
                self.issue("walkoff.poled_length", "must not exceed walkoff.chip_length");
            }
        }
        let biref = self.number(m, p, "fiber_birefringence");
        let biref = self.positive(biref, "walkoff.fiber_birefringence");
        let fiber = match m.get("fiber_length") {
            None | Some(Value::Null) => Some(None),
            Some(Value::String(s)) if s == "auto" => Some(None),
            Some(v) => {
                let x = self.as_quantity(v, "walkoff.fiber_length", Dim::Length);
                self.in_range(x, "walkoff.fiber_length", 0.0, f64::MAX)
                    .map(|mm| Some(Length::from_mm(mm)))
            }
        };
        let coherence = match m.get("coherence_time") {
            None | Some(Value::Null) => default_coherence,
            Some(v) => {
                let x = self.as_quantity(v, "walkoff.coherence_time", Dim::Time);
                self.positive(x, "walkoff.coherence_time").map(TimeSpan::from_ps)
            }
        };
        let spec = WalkoffSpec {
            group_indices: group_indices?,
            chip_length: Length::from_mm(chip?),
            poled_length: Length::from_mm(poled?),
            fiber_birefringence: biref?,
            coherence_time: coherence?,
        };
        spec.validate().ok()?;
        Some((spec, fiber?))
    }

    fn grid(&mut self, v: &Value, center: Option<f64>) -> Option<GridSpec> {
        let m = self.object(v, "grid", &["half_span", "points"])?;
        let span = self.quantity(m, "grid", "half_span", Dim::Wavelength);
        let span = self.positive(span, "grid.half_span");
        let points = match m.get("points").map(Value::as_u64) {
            Some(Some(n)) if n >= 64 => Some(n as usize),
            Some(_) => {
                self.issue("grid.points", "must be an integer of at least 64");
                None
            }
            None => {
                self.issue("grid.points", "is required but missing");
                None
            }
        };
        GridSpec::new(center?, span?, points?).ok()
    }

    fn geometry(&mut self, v: &Value) -> Option<ChipGeometry> {
        let p = "chip_geometry";
        let m = self.object(
            v,
            p,
            &[
                "poling_period",
                "waveguide_width",
                "coupler_length",
                "branch_angle",
                "input_pitch",
                "output_pitch",
            ],
        )?;
        let len = |cx: &mut Self, key: &str| {
            let x = cx.quantity(m, p, key, Dim::Length);
            cx.positive(x, &join(p, key)).map(Length::from_mm)
        };
        let poling_period = len(self, "poling_period");
        let waveguide_width = len(self, "waveguide_width");
        let coupler_length = len(self, "coupler_length");
        let input_pitch = len(self, "input_pitch");
        let output_pitch = len(self, "output_pitch");
        let angle = self.quantity(m, p, "branch_angle", Dim::Degrees);
        Some(ChipGeometry {
            poling_period: poling_period?,
            waveguide_width: waveguide_width?,
            coupler_length: coupler_length?,
            branch_angle_deg: angle?,
            input_pitch: input_pitch?,
            output_pitch: output_pitch?,
        })
    }

    fn detection(&mut self, v: &Value) -> Option<DetectionConfig> {
        let p = "detection";
        let m = self.object(v, p, &["mean_total", "background", "seed"])?;
        let mean_total = self.number(m, p, "mean_total");
        let mean_total = self.positive(mean_total, "detection.mean_total");
        let background = self.optional_number(m, p, "background", 0.0);
        let background = self.in_range(background, "detection.background", 0.0, f64::MAX);
        let seed = match m.get("seed") {
            None | Some(Value::Null) => Some(1),
            Some(v) => match v.as_u64() {
                Some(s) => Some(s),
                None => {
                    self.issue("detection.seed", "must be a non-negative integer");
                    None
                }
            },
        };
        Some(DetectionConfig {
            mean_total: mean_total?,
            background: background?,
            seed: seed?,
        })
    }
}
