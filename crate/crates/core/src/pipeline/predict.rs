//! From device parameters to the predicted two-photon polarization state.

use serde::{Deserialize, Serialize};

use super::config::{InterWaveguideOverlap, SourceConfig};
use crate::analysis::{chsh_fixed, chsh_optimal, fidelity, ChshAngles, DensityMatrix2Q};
use crate::error::{Error, Result};
use crate::polarization::{output_state, postselect_coincidence, BellState, CoincidenceState, PairAmplitudes};
use crate::spectral::{
    apply_filter, build_jsa, curve_overlap, exchange_overlap, shg_curve, wavelength_axis, FilteredJsa, JsaGrid,
    OverlapMetric, PhaseMatchingSpec, ShgCurve,
};
use crate::temporal::WalkoffBudget;

/// SHG tuning curves are sampled at this many points per FWHM of the
/// narrower curve.
const SHG_SAMPLES_PER_FWHM: f64 = 50.0;

/// SHG tuning curves of both waveguides on a common axis spanning the JSA grid.
pub fn shg_pair(cfg: &SourceConfig) -> Result<(ShgCurve, ShgCurve)> {
    let center = 0.5 * (cfg.pm_wg1.center_wavelength + cfg.pm_wg2.center_wavelength);
    let step = cfg.pm_wg1.fwhm.min(cfg.pm_wg2.fwhm) / SHG_SAMPLES_PER_FWHM;
    let points = (2.0 * cfg.grid.half_span / step).ceil() as usize + 1;
    let axis = wavelength_axis(center, cfg.grid.half_span, points | 1);
    Ok((shg_curve(&cfg.pm_wg1, &axis)?, shg_curve(&cfg.pm_wg2, &axis)?))
}

/// Pair spectrum of the source and the overlaps derived from it.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    /// JSA of the mean phase matching of the two waveguides, unfiltered.
    pub jsa: JsaGrid,
    pub filtered: Option<FilteredJsa>,
    /// Signal/idler exchange overlap of the (filtered) JSA.
    pub exchange_overlap: f64,
    pub inter_waveguide_overlap: f64,
}

impl SpectralModel {
    /// The JSA the photons actually leave the setup with.
    pub fn detected_jsa(&self) -> &JsaGrid {
        self.filtered.as_ref().map_or(&self.jsa, |f| &f.jsa)
    }
}

fn filtered(cfg: &SourceConfig, pm: &PhaseMatchingSpec) -> Result<(JsaGrid, Option<FilteredJsa>)> {
    let jsa = build_jsa(pm, &cfg.pump, &cfg.grid)?;
    let f = match &cfg.filters {
        Some(fp) => Some(apply_filter(&jsa, &fp.signal, &fp.idler)?),
        None => None,
    };
    Ok((jsa, f))
}

pub fn spectral_model(cfg: &SourceConfig) -> Result<SpectralModel> {
    let (jsa, filt) = filtered(cfg, &cfg.pm_mean())?;
    let detected = filt.as_ref().map_or(&jsa, |f| &f.jsa);
    let exchange = exchange_overlap(detected, OverlapMetric::Amplitude)?;
    let inter = match cfg.inter_waveguide {
        InterWaveguideOverlap::ShgCurve => {
            let (a, b) = shg_pair(cfg)?;
            curve_overlap(&a, &b, OverlapMetric::Amplitude)?
        }
        InterWaveguideOverlap::Jsa => {
            let (j1, f1) = filtered(cfg, &cfg.pm_wg1)?;
            let (j2, f2) = filtered(cfg, &cfg.pm_wg2)?;
            match (f1, f2) {
                (Some(a), Some(b)) => a.jsa.overlap(&b.jsa)?,
                _ => j1.overlap(&j2)?,
            }
        }
    };
    Ok(SpectralModel {
        jsa,
        filtered: filt,
        exchange_overlap: exchange,
        inter_waveguide_overlap: inter,
    })
}

/// The three factors whose product damps the polarization coherence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceFactors {
    pub exchange_overlap: f64,
    pub inter_waveguide_overlap: f64,
    pub temporal: f64,
}

impl CoherenceFactors {
    pub fn product(&self) -> f64 {
        (self.exchange_overlap * self.inter_waveguide_overlap * self.temporal).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateMetrics {
    pub fidelity_psi_minus: f64,
    pub fidelity_psi_plus: f64,
    pub chsh_fixed: f64,
    pub chsh_optimal: f64,
}

impl StateMetrics {
    pub fn compute(rho: &DensityMatrix2Q, angles: &ChshAngles) -> Result<Self> {
        Ok(StateMetrics {
            fidelity_psi_minus: fidelity(rho, &BellState::PsiMinus.vector())?,
            fidelity_psi_plus: fidelity(rho, &BellState::PsiPlus.vector())?,
            chsh_fixed: chsh_fixed(rho, angles),
            chsh_optimal: chsh_optimal(rho),
        })
    }

    pub fn fidelity_to(&self, target: BellState) -> f64 {
        match target {
            BellState::PsiMinus => self.fidelity_psi_minus,
            BellState::PsiPlus => self.fidelity_psi_plus,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictedState {
    pub rho: DensityMatrix2Q,
    pub coherence_factor: f64,
    pub factors: CoherenceFactors,
    pub pair_amplitudes: PairAmplitudes,
    pub coincidence: CoincidenceState,
    /// Bell state the pump phase aims at.
    pub target: BellState,
    pub metrics: StateMetrics,
    pub walkoff: WalkoffBudget,
}

impl PredictedState {
    pub fn success_probability(&self) -> f64 {
        self.coincidence.success_probability
    }

    pub fn target_fidelity(&self) -> f64 {
        self.metrics.fidelity_to(self.target)
    }
}

/// The post-selected pure state with its HV/VH coherence scaled by
/// `coherence_factor` (pure dephasing).
pub fn dephased_coincidence_state(coincidence: &CoincidenceState, coherence_factor: f64) -> Result<DensityMatrix2Q> {
    if !(0.0..=1.0).contains(&coherence_factor) {
        return Err(Error::domain(format!(
            "coherence factor must lie in [0,1], got {coherence_factor}"
        )));
    }
    DensityMatrix2Q::from_pure(&coincidence.two_qubit_vector())?.dephased(coherence_factor)
}

pub fn predict_state(cfg: &SourceConfig) -> Result<PredictedState> {
    let spectral = spectral_model(cfg)?;
    predict_with_spectrum(cfg, &spectral)
}

/// [`predict_state`] with a pair spectrum computed beforehand.
pub fn predict_with_spectrum(cfg: &SourceConfig, spectral: &SpectralModel) -> Result<PredictedState> {
    let pair_amplitudes = output_state(&cfg.pump, &cfg.splitter)?;
    let coincidence = postselect_coincidence(&pair_amplitudes)?;
    let walkoff = WalkoffBudget::compute(&cfg.walkoff, cfg.fiber_length)?;
    let factors = CoherenceFactors {
        exchange_overlap: spectral.exchange_overlap,
        inter_waveguide_overlap: spectral.inter_waveguide_overlap,
        temporal: walkoff.residual_indistinguishability,
    };
    let coherence_factor = factors.product();
    let rho = dephased_coincidence_state(&coincidence, coherence_factor)?;
    let metrics = StateMetrics::compute(&rho, &ChshAngles::default())?;
    Ok(PredictedState {
        rho,
        coherence_factor,
        factors,
        pair_amplitudes,
        coincidence,
        target: BellState::target_for_phase(cfg.pump.phase),
        metrics,
        walkoff,
    })
}
