//! Named end-to-end runs. Each writes its data files and a `summary.csv` /
//! `summary.json` check table into `<out>/<scenario>/`.

use std::f64::consts::PI;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::config::SourceConfig;
use super::manifest::{manifest, Check};
use super::predict::{predict_with_spectrum, shg_pair, spectral_model, PredictedState, SpectralModel};
use crate::analysis::{
    chsh_fixed, chsh_optimal, correlation, error_bars, fidelity, simulate_counts_with_background, standard_settings,
    subtract_background, trial_rng, write_density_csv, write_records_csv, ChshAngles, DensityMatrix2Q, Estimator,
    MeasurementRecord,
};
use crate::error::{Error, Result};
use crate::polarization::{bell_projection_probability, output_state, BellState, PumpRegime, SplitterParams};
use crate::spectral::{build_jsa, curve_overlap, exchange_overlap, JsaGrid, OverlapMetric};
use crate::temporal::{transform_limited_coherence_time, WalkoffBudget};

/// JSA files are decimated to at most this many samples per axis.
const JSA_PLOT_POINTS: usize = 256;
/// Samples per axis of the splitter probability surfaces.
const SURFACE_POINTS: usize = 50;
const BOOTSTRAP_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    SplitterSweep,
    WalkoffBudget,
    ShgOverlap,
    JsaPulsed,
    JsaCw,
    TomographyPulsed,
    TomographyCw,
    ChshPulsed,
    ChshCw,
    FullPaperTable,
}

impl Scenario {
    pub const ALL: [Scenario; 10] = [
        Scenario::SplitterSweep,
        Scenario::WalkoffBudget,
        Scenario::ShgOverlap,
        Scenario::JsaPulsed,
        Scenario::JsaCw,
        Scenario::TomographyPulsed,
        Scenario::TomographyCw,
        Scenario::ChshPulsed,
        Scenario::ChshCw,
        Scenario::FullPaperTable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::SplitterSweep => "splitter_sweep",
            Scenario::WalkoffBudget => "walkoff_budget",
            Scenario::ShgOverlap => "shg_overlap",
            Scenario::JsaPulsed => "jsa_pulsed",
            Scenario::JsaCw => "jsa_cw",
            Scenario::TomographyPulsed => "tomography_pulsed",
            Scenario::TomographyCw => "tomography_cw",
            Scenario::ChshPulsed => "chsh_pulsed",
            Scenario::ChshCw => "chsh_cw",
            Scenario::FullPaperTable => "full_paper_table",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::SplitterSweep => "Bell-state probabilities over the splitter transmissivities",
            Scenario::WalkoffBudget => "chip walk-off and the compensating PM fibre",
            Scenario::ShgOverlap => "SHG tuning curves of both waveguides and their overlap",
            Scenario::JsaPulsed => "pulsed-pump JSA, exchange overlap with and without filters",
            Scenario::JsaCw => "CW-pump JSA and its exchange overlap",
            Scenario::TomographyPulsed => "predicted state, simulated tomography and MLE, pulsed with filters",
            Scenario::TomographyCw => "predicted state, simulated tomography and MLE, CW without filters",
            Scenario::ChshPulsed => "CHSH value of the simulated pulsed state against the Werner line",
            Scenario::ChshCw => "CHSH value of the simulated CW state against the Werner line",
            Scenario::FullPaperTable => "every scenario above, aggregated into one table",
        }
    }

    fn index(self) -> u64 {
        Scenario::ALL.iter().position(|s| *s == self).unwrap() as u64
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::UnknownScenario {
                name: s.to_string(),
                valid: Scenario::ALL.iter().map(|sc| sc.name()).collect(),
            })
    }
}

/// Overrides applied on top of the configuration's detection block.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub mean_total: Option<f64>,
}

impl RunOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunOptions {
            out_dir: out_dir.into(),
            seed: None,
            mean_total: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub config: String,
    pub seed: u64,
    pub mean_total: f64,
    pub checks: Vec<Check>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// The configuration with a pulsed pump, or an error if it is CW.
pub fn pulsed_variant(cfg: &SourceConfig) -> Result<SourceConfig> {
    if cfg.pump.regime != PumpRegime::Pulsed {
        return Err(Error::domain(format!(
            "pulsed scenarios need a pulsed pump, but configuration `{}` is CW",
            cfg.name
        )));
    }
    Ok(cfg.clone())
}

/// The configuration pumped CW at the same wavelength with the filters
/// removed. A pulsed configuration's coherence time is replaced by the
/// transform limit of the mean phase-matching width.
pub fn cw_variant(cfg: &SourceConfig) -> SourceConfig {
    if cfg.pump.regime == PumpRegime::Cw && cfg.filters.is_none() {
        return cfg.clone();
    }
    let mut c = cfg.clone();
    c.pump.regime = PumpRegime::Cw;
    c.pump.bandwidth_fwhm = 0.0;
    c.filters = None;
    let pm = cfg.pm_mean();
    c.walkoff.coherence_time = transform_limited_coherence_time(pm.center_wavelength, pm.fwhm);
    c
}

struct Measured {
    records: Vec<MeasurementRecord>,
    corrected: Vec<MeasurementRecord>,
    rho: DensityMatrix2Q,
}

struct Runner<'a> {
    cfg: &'a SourceConfig,
    out_dir: &'a Path,
    seed: u64,
    mean_total: f64,
    pulsed: Option<(SourceConfig, SpectralModel)>,
    cw: Option<(SourceConfig, SpectralModel)>,
}

/// Runs `scenario` and writes its files under `<out_dir>/<scenario>/`.
/// For [`Scenario::FullPaperTable`] every other scenario writes its own
/// directory as well.
pub fn run_scenario(scenario: Scenario, cfg: &SourceConfig, opts: &RunOptions) -> Result<Vec<ScenarioReport>> {
    cfg.validate()?;
    let mut runner = Runner {
        cfg,
        out_dir: &opts.out_dir,
        seed: opts.seed.unwrap_or(cfg.detection.seed),
        mean_total: opts.mean_total.unwrap_or(cfg.detection.mean_total),
        pulsed: None,
        cw: None,
    };
    if !(runner.mean_total > 0.0) || !runner.mean_total.is_finite() {
        return Err(Error::domain(format!("mean_total must be positive, got {}", runner.mean_total)));
    }
    if scenario != Scenario::FullPaperTable {
        return Ok(vec![runner.run(scenario)?]);
    }
    let reports = Scenario::ALL[..Scenario::ALL.len() - 1]
        .iter()
        .map(|s| runner.run(*s))
        .collect::<Result<Vec<_>>>()?;
    let dir = runner.dir(Scenario::FullPaperTable)?;
    write_with(&dir.join("summary.csv"), |w| write_table(&reports, w))?;
    write_json(&dir.join("summary.json"), &reports)?;
    Ok(reports)
}

impl Runner<'_> {
    fn dir(&self, scenario: Scenario) -> Result<PathBuf> {
        let d = self.out_dir.join(scenario.name());
        fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
        Ok(d)
    }

    fn scenario_seed(&self, scenario: Scenario) -> u64 {
        trial_rng(self.seed, scenario.index()).next_u64()
    }

    fn pulsed(&mut self) -> Result<&(SourceConfig, SpectralModel)> {
        if self.pulsed.is_none() {
            let c = pulsed_variant(self.cfg)?;
            let m = spectral_model(&c)?;
            self.pulsed = Some((c, m));
        }
        Ok(self.pulsed.as_ref().unwrap())
    }

    fn cw(&mut self) -> Result<&(SourceConfig, SpectralModel)> {
        if self.cw.is_none() {
            let c = cw_variant(self.cfg);
            let m = spectral_model(&c)?;
            self.cw = Some((c, m));
        }
        Ok(self.cw.as_ref().unwrap())
    }

    fn run(&mut self, scenario: Scenario) -> Result<ScenarioReport> {
        let dir = self.dir(scenario)?;
        let checks = match scenario {
            Scenario::SplitterSweep => self.splitter_sweep(&dir)?,
            Scenario::WalkoffBudget => self.walkoff_budget(&dir)?,
            Scenario::ShgOverlap => self.shg_overlap(&dir)?,
            Scenario::JsaPulsed => self.jsa_pulsed(&dir)?,
            Scenario::JsaCw => self.jsa_cw(&dir)?,
            Scenario::TomographyPulsed | Scenario::TomographyCw => self.tomography(scenario, &dir)?,
            Scenario::ChshPulsed | Scenario::ChshCw => self.chsh(scenario, &dir)?,
            Scenario::FullPaperTable => unreachable!("aggregated in run_scenario"),
        };
        let report = ScenarioReport {
            scenario: scenario.name().to_string(),
            config: self.cfg.name.clone(),
            seed: self.seed,
            mean_total: self.mean_total,
            checks,
        };
        write_with(&dir.join("summary.csv"), |w| write_table(std::slice::from_ref(&report), w))?;
        write_json(&dir.join("summary.json"), &report)?;
        Ok(report)
    }

    fn splitter_sweep(&self, dir: &Path) -> Result<Vec<Check>> {
        let pump0 = self.cfg.pump.with_phase(0.0);
        let pump_pi = self.cfg.pump.with_phase(PI);
        let probs = |s: &SplitterParams| -> Result<(f64, f64)> {
            Ok((
                bell_projection_probability(&output_state(&pump0, s)?, BellState::PsiMinus),
                bell_projection_probability(&output_state(&pump_pi, s)?, BellState::PsiPlus),
            ))
        };
        let n = SURFACE_POINTS - 1;
        let mut rows = Vec::with_capacity(SURFACE_POINTS * SURFACE_POINTS);
        let mut violations = 0u32;
        for i in 0..=n {
            let t_h = 1.0 - 0.1 * (n - i) as f64 / n as f64;
            let (m0, p0) = probs(&SplitterParams::new(t_h, 0.0)?)?;
            for j in 0..=n {
                let t_v = 0.1 * j as f64 / n as f64;
                let (m, p) = probs(&SplitterParams::new(t_h, t_v)?)?;
                let ordered = if t_h == 1.0 {
                    (m - p).abs() <= 1e-12
                } else if j == 0 {
                    true
                } else {
                    m0 - m > p0 - p
                };
                violations += u32::from(!ordered);
                rows.push((t_h, t_v, m, p));
            }
        }
        write_with(&dir.join("surfaces.csv"), |w| {
            writeln!(w, "t_h,t_v,p_psi_minus_phi0,p_psi_plus_phipi")?;
            for (th, tv, m, p) in &rows {
                writeln!(w, "{th},{tv},{m},{p}")?;
            }
            Ok(())
        })?;
        let (singlet, triplet) = probs(&self.cfg.splitter)?;
        let (ideal, _) = probs(&SplitterParams::ideal())?;
        Ok(vec![
            Check::evaluate("singlet_probability", singlet, None)?,
            Check::evaluate("triplet_probability", triplet, None)?,
            Check::evaluate("ideal_probability", ideal, None)?,
            Check::evaluate("surface_ordering_violations", f64::from(violations), None)?,
        ])
    }

    fn walkoff_budget(&self, dir: &Path) -> Result<Vec<Check>> {
        let b = WalkoffBudget::compute(&self.cfg.walkoff, self.cfg.fiber_length)?;
        write_with(&dir.join("walkoff_budget.csv"), |w| b.write_csv(w))?;
        Ok(vec![
            Check::evaluate("effective_length_mm", b.effective_length.mm(), None)?,
            Check::evaluate("walkoff_delay_ps", b.walkoff_delay.ps(), None)?,
            Check::evaluate("fiber_length_m", b.fiber_length.m(), None)?,
            Check::evaluate("residual_delay_ps", b.residual_delay.ps(), None)?,
        ])
    }

    fn shg_overlap(&self, dir: &Path) -> Result<Vec<Check>> {
        let (a, b) = shg_pair(self.cfg)?;
        write_with(&dir.join("shg_curves.csv"), |w| {
            writeln!(w, "wavelength_nm,shg_wg1,shg_wg2")?;
            for ((l, x), y) in a.wavelength_axis.iter().zip(&a.intensity).zip(&b.intensity) {
                writeln!(w, "{l},{x},{y}")?;
            }
            Ok(())
        })?;
        Ok(vec![
            Check::evaluate("shg_fwhm_wg1_nm", a.fitted_fwhm, None)?,
            Check::evaluate("shg_fwhm_wg2_nm", b.fitted_fwhm, None)?,
            Check::evaluate("shg_curve_overlap", curve_overlap(&a, &b, OverlapMetric::Amplitude)?, None)?,
        ])
    }

    fn jsa_pulsed(&mut self, dir: &Path) -> Result<Vec<Check>> {
        let (cfg, model) = self.pulsed()?.clone();
        let unfiltered = exchange_overlap(&model.jsa, OverlapMetric::Amplitude)?;
        let refined = build_jsa(&cfg.pm_mean(), &cfg.pump, &cfg.grid.refined())?;
        let change = (exchange_overlap(&refined, OverlapMetric::Amplitude)? - unfiltered).abs();
        let mut bare = cfg.clone();
        bare.filters = None;
        let bare_state = predict_with_spectrum(&bare, &spectral_model(&bare)?)?;
        write_jsa(&dir.join("jsa_pulsed.csv"), &model.jsa)?;
        if let Some(f) = &model.filtered {
            write_jsa(&dir.join("jsa_pulsed_filtered.csv"), &f.jsa)?;
        }
        Ok(vec![
            Check::evaluate("exchange_overlap_pulsed", unfiltered, None)?,
            Check::evaluate("exchange_overlap_refinement_change", change, None)?,
            Check::evaluate("exchange_overlap_filtered", model.exchange_overlap, None)?,
            Check::evaluate("fidelity_unfiltered_predicted", bare_state.target_fidelity(), None)?,
        ])
    }

    fn jsa_cw(&mut self, dir: &Path) -> Result<Vec<Check>> {
        let (_, model) = self.cw()?;
        write_jsa(&dir.join("jsa_cw.csv"), &model.jsa)?;
        Ok(vec![
            Check::evaluate("exchange_overlap_cw", model.exchange_overlap, None)?,
            Check::evaluate("jsa_cw_principal_axis_deg", model.jsa.principal_axis_deg(), None)?,
        ])
    }

    fn predicted(&mut self, pulsed: bool) -> Result<PredictedState> {
        let (cfg, model) = if pulsed { self.pulsed()? } else { self.cw()? };
        predict_with_spectrum(cfg, model)
    }

    /// Simulated tomography counts of the predicted state and their MLE
    /// reconstruction, background-subtracted if the config has background.
    fn measure(&self, rho: &DensityMatrix2Q, seed: u64) -> Result<Measured> {
        let background = self.cfg.detection.background;
        let records = simulate_counts_with_background(rho, &standard_settings(), self.mean_total, background, seed)?;
        let corrected = if background > 0.0 {
            subtract_background(&records, background)?
        } else {
            records.clone()
        };
        let rho = Estimator::default().estimate(&corrected)?;
        Ok(Measured { records, corrected, rho })
    }

    fn tomography(&mut self, scenario: Scenario, dir: &Path) -> Result<Vec<Check>> {
        let pulsed = scenario == Scenario::TomographyPulsed;
        let pred = self.predicted(pulsed)?;
        let seed = self.scenario_seed(scenario);
        let m = self.measure(&pred.rho, seed)?;
        let rec = m.rho;
        let target = pred.target.vector();
        let f_pred = pred.target_fidelity();
        let f_rec = fidelity(&rec, &target)?;
        let bars = error_bars(
            &m.corrected,
            Estimator::default(),
            &target,
            &ChshAngles::default(),
            BOOTSTRAP_SAMPLES,
            seed,
        )?;
        write_with(&dir.join("predicted_rho.csv"), |w| write_density_csv(&pred.rho, w))?;
        write_with(&dir.join("reconstructed_rho.csv"), |w| write_density_csv(&rec, w))?;
        write_records(&dir.join("counts.csv"), &m.records)?;
        write_json(&dir.join("prediction.json"), &prediction_json(&pred))?;
        Ok(if pulsed {
            vec![
                Check::evaluate("fidelity_pulsed_predicted", f_pred, None)?,
                Check::evaluate("fidelity_pulsed_predicted_min", f_pred, None)?,
                Check::evaluate("fidelity_pulsed_reconstructed", f_rec, Some(f_pred))?,
                Check::evaluate("fidelity_pulsed_bootstrap_sd", bars.fidelity_sd, None)?,
            ]
        } else {
            vec![
                Check::evaluate("fidelity_cw_predicted", f_pred, None)?,
                Check::evaluate("fidelity_cw_reconstructed", f_rec, Some(f_pred))?,
                Check::evaluate("fidelity_cw_bootstrap_sd", bars.fidelity_sd, None)?,
            ]
        })
    }

    fn chsh(&mut self, scenario: Scenario, dir: &Path) -> Result<Vec<Check>> {
        let pulsed = scenario == Scenario::ChshPulsed;
        let pred = self.predicted(pulsed)?;
        let rec = self.measure(&pred.rho, self.scenario_seed(scenario))?.rho;
        let angles = ChshAngles::default();
        let s_rec = chsh_fixed(&rec, &angles);
        let s_werner = werner_line_chsh(pred.target_fidelity())?;
        write_with(&dir.join("correlations.csv"), |w| {
            writeln!(w, "alpha_deg,beta_deg,e_predicted,e_reconstructed")?;
            for a in [angles.a, angles.a_prime] {
                for b in [angles.b, angles.b_prime] {
                    writeln!(w, "{a},{b},{},{}", correlation(&pred.rho, a, b), correlation(&rec, a, b))?;
                }
            }
            Ok(())
        })?;
        let published = manifest().published;
        let (f_pub, tag) = if pulsed {
            (published.fidelity_pulsed, "pulsed")
        } else {
            (published.fidelity_cw, "cw")
        };
        let s_pub_line = werner_line_chsh(f_pub)?;
        Ok(vec![
            Check::evaluate(&format!("chsh_{tag}_reconstructed"), s_rec, Some(s_werner))?,
            Check::evaluate(&format!("werner_s_opt_{tag}"), s_pub_line, None)?,
            Check::evaluate(&format!("published_s_bound_{tag}"), s_pub_line, None)?,
            Check::evaluate(&format!("chsh_{tag}_vs_measured"), s_rec, None)?,
        ])
    }
}

/// Optimal CHSH value of the Werner state with singlet fidelity `f`.
pub fn werner_line_chsh(f: f64) -> Result<f64> {
    Ok(chsh_optimal(&DensityMatrix2Q::werner((4.0 * f - 1.0) / 3.0)?))
}

fn prediction_json(p: &PredictedState) -> serde_json::Value {
    serde_json::json!({
        "target": format!("{:?}", p.target),
        "coherence_factor": p.coherence_factor,
        "factors": p.factors,
        "success_probability": p.success_probability(),
        "metrics": p.metrics,
        "walkoff": p.walkoff,
    })
}

#[derive(Serialize)]
struct TableRow<'a> {
    scenario: &'a str,
    id: &'a str,
    quantity: &'a str,
    computed: f64,
    reference: Option<f64>,
    tolerance: Option<f64>,
    kind: super::manifest::CheckKind,
    status: super::manifest::Status,
}

fn write_table(reports: &[ScenarioReport], w: &mut dyn Write) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        for c in &r.checks {
            out.serialize(TableRow {
                scenario: &r.scenario,
                id: &c.id,
                quantity: &c.quantity,
                computed: c.computed,
                reference: c.reference,
                tolerance: c.tolerance,
                kind: c.kind,
                status: c.status,
            })
            .map_err(std::io::Error::other)?;
        }
    }
    out.flush()
}

fn write_jsa(path: &Path, jsa: &JsaGrid) -> Result<()> {
    let stride = jsa.signal_axis().len().div_ceil(JSA_PLOT_POINTS);
    let plot = jsa.decimated(stride)?;
    write_with(path, |w| plot.write_csv(w))
}

fn write_records(path: &Path, records: &[MeasurementRecord]) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_records_csv(records, BufWriter::new(f))
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    write_with(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(std::io::Error::other)?;
        writeln!(w)
    })
}

fn write_with<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
        }
        match "nope".parse::<Scenario>() {
            Err(Error::UnknownScenario { valid, .. }) => assert_eq!(valid.len(), 10),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn every_manifest_row_belongs_to_a_scenario() {
        for r in &manifest().rows {
            assert!(r.scenario.parse::<Scenario>().is_ok(), "{}", r.scenario);
        }
    }

    #[test]
    fn cw_variant_drops_filters() {
        let c = cw_variant(&SourceConfig::paper_pulsed());
        assert_eq!(c.pump.regime, PumpRegime::Cw);
        assert!(c.filters.is_none());
        assert!(pulsed_variant(&SourceConfig::paper_cw()).is_err());
    }

    #[test]
    fn werner_line_values() {
        assert!((werner_line_chsh(1.0).unwrap() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(werner_line_chsh(0.25).unwrap().abs() < 1e-12);
    }

    #[test]
    fn walkoff_scenario_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let reports = run_scenario(Scenario::WalkoffBudget, &SourceConfig::paper_pulsed(), &RunOptions::new(dir.path())).unwrap();
        assert!(reports[0].passed(), "{:?}", reports[0].checks);
        for f in ["walkoff_budget.csv", "summary.csv", "summary.json"] {
            assert!(dir.path().join("walkoff_budget").join(f).exists());
        }
    }
}
