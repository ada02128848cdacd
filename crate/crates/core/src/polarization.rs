//! Two-photon polarization and path algebra for the two-waveguide source.
//!
//! A type-II pair is born in waveguide 1 or waveguide 2 as one H and one V
//! photon. Both waveguides feed a polarization-dependent coupler whose
//! outputs are labelled A and B. Each creation operator of an input mode is
//! rewritten in terms of the output modes,
//!
//! ```text
//! a†(1,J) =  √T_J a†(A,J) − √R_J a†(B,J)
//! a†(2,J) =  √R_J a†(A,J) + √T_J a†(B,J)
//! ```
//!
//! and the product of the two transformed operators gives the four pair
//! amplitudes held by [`PairAmplitudes`]. The two split-output amplitudes
//! use the sign of the published expansion, opposite to the literal
//! product; the shared sign changes no probability.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Polarization::H),
            "V" | "v" => Ok(Polarization::V),
            other => Err(Error::domain(format!(
                "polarization label must be H or V, got `{other}`"
            ))),
        }
    }
}

/// The poled waveguide a photon is created in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Waveguide {
    Wg1,
    Wg2,
}

impl TryFrom<u8> for Waveguide {
    type Error = Error;

    fn try_from(index: u8) -> Result<Self> {
        match index {
            1 => Ok(Waveguide::Wg1),
            2 => Ok(Waveguide::Wg2),
            other => Err(Error::domain(format!(
                "waveguide index must be 1 or 2, got {other}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutputMode {
    A,
    B,
}

/// Polarization-dependent transmissivities of the on-chip splitter.
///
/// Reflectivities are derived as `1 − t` and never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitterParams {
    t_h: f64,
    t_v: f64,
}

impl SplitterParams {
    pub fn new(t_h: f64, t_v: f64) -> Result<Self> {
        for (name, t) in [("t_h", t_h), ("t_v", t_v)] {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::domain(format!("{name} must lie in [0,1], got {t}")));
            }
        }
        Ok(SplitterParams { t_h, t_v })
    }

    /// The ideal splitter: H fully transmitted, V fully reflected.
    pub fn ideal() -> Self {
        SplitterParams { t_h: 1.0, t_v: 0.0 }
    }

    /// Measured coupler of the fabricated chip.
    pub fn fabricated() -> Self {
        SplitterParams {
            t_h: 0.996,
            t_v: 0.032,
        }
    }

    pub fn t_h(&self) -> f64 {
        self.t_h
    }

    pub fn t_v(&self) -> f64 {
        self.t_v
    }

    pub fn r_h(&self) -> f64 {
        1.0 - self.t_h
    }

    pub fn r_v(&self) -> f64 {
        1.0 - self.t_v
    }

    pub fn transmissivity(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::H => self.t_h,
            Polarization::V => self.t_v,
        }
    }

    pub fn reflectivity(&self, pol: Polarization) -> f64 {
        1.0 - self.transmissivity(pol)
    }

    /// Single-photon transfer matrix for one polarization.
    ///
    /// Column `k` holds the (A, B) amplitudes of input waveguide `k + 1`.
    pub fn matrix(&self, pol: Polarization) -> Matrix2<Complex64> {
        let t = Complex64::from(self.transmissivity(pol).sqrt());
        let r = Complex64::from(self.reflectivity(pol).sqrt());
        Matrix2::new(t, r, -r, t)
    }
}

/// Maps one input photon to its amplitudes over the output modes (A, B).
pub fn apply_splitter(
    input: Waveguide,
    pol: Polarization,
    params: &SplitterParams,
) -> [Complex64; 2] {
    let m = params.matrix(pol);
    let col = match input {
        Waveguide::Wg1 => 0,
        Waveguide::Wg2 => 1,
    };
    [m[(0, col)], m[(1, col)]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PumpRegime {
    Cw,
    Pulsed,
}

impl FromStr for PumpRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cw" => Ok(PumpRegime::Cw),
            "pulsed" => Ok(PumpRegime::Pulsed),
            other => Err(Error::domain(format!(
                "pump regime must be `cw` or `pulsed`, got `{other}`"
            ))),
        }
    }
}

/// Default spectral width given to a CW pump so its ridge has finite width.
pub const CW_LINEWIDTH_FLOOR_NM: f64 = 1e-3;

/// Pump settings shared by the two waveguides.
///
/// The source weights are relative amplitudes; only their ratio matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpConfig {
    /// Relative phase between the two pump beams, radians.
    pub phase: f64,
    pub weight_1: f64,
    pub weight_2: f64,
    /// Pump centre wavelength, nm.
    pub center_wavelength: f64,
    /// Amplitude-envelope FWHM of the pump spectrum, nm. Zero for CW.
    pub bandwidth_fwhm: f64,
    pub regime: PumpRegime,
    /// Linewidth used in place of a zero bandwidth, nm.
    pub cw_linewidth: f64,
}

impl PumpConfig {
    pub fn cw(center_wavelength: f64) -> Self {
        PumpConfig {
            phase: 0.0,
            weight_1: 1.0,
            weight_2: 1.0,
            center_wavelength,
            bandwidth_fwhm: 0.0,
            regime: PumpRegime::Cw,
            cw_linewidth: CW_LINEWIDTH_FLOOR_NM,
        }
    }

    pub fn pulsed(center_wavelength: f64, bandwidth_fwhm: f64) -> Self {
        PumpConfig {
            bandwidth_fwhm,
            regime: PumpRegime::Pulsed,
            ..PumpConfig::cw(center_wavelength)
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_weights(mut self, weight_1: f64, weight_2: f64) -> Self {
        self.weight_1 = weight_1;
        self.weight_2 = weight_2;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.weight_1 >= 0.0 && self.weight_2 >= 0.0) {
            return Err(Error::domain("source weights must be nonnegative"));
        }
        if self.weight_1.powi(2) + self.weight_2.powi(2) <= 0.0 {
            return Err(Error::domain("total source weight is zero"));
        }
        if !self.phase.is_finite() {
            return Err(Error::domain("pump phase must be finite"));
        }
        if !(self.center_wavelength > 0.0) {
            return Err(Error::domain("pump centre wavelength must be positive"));
        }
        match self.regime {
            PumpRegime::Cw if self.bandwidth_fwhm != 0.0 => Err(Error::domain(
                "a CW pump must have zero bandwidth_fwhm",
            )),
            PumpRegime::Pulsed if !(self.bandwidth_fwhm > 0.0) => Err(Error::domain(
                "a pulsed pump must have positive bandwidth_fwhm",
            )),
            _ if !(self.cw_linewidth > 0.0) => {
                Err(Error::domain("cw_linewidth must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Spectral FWHM actually used for the pump envelope, nm.
    pub fn effective_bandwidth(&self) -> f64 {
        match self.regime {
            PumpRegime::Cw => self.cw_linewidth,
            PumpRegime::Pulsed => self.bandwidth_fwhm,
        }
    }

    /// Weights scaled to unit quadrature sum.
    pub fn normalized_weights(&self) -> Result<(f64, f64)> {
        let total = self.weight_1.hypot(self.weight_2);
        if !(total > 0.0) {
            return Err(Error::domain("total source weight is zero"));
        }
        Ok((self.weight_1 / total, self.weight_2 / total))
    }
}

/// Two-photon amplitudes over {A_H A_V, A_H B_V, A_V B_H, B_H B_V}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairAmplitudes {
    pub c_aa: Complex64,
    pub c_ahbv: Complex64,
    pub c_avbh: Complex64,
    pub c_bb: Complex64,
}

impl PairAmplitudes {
    /// Builds amplitudes, rescaling them to unit norm.
    pub fn normalized(c: [Complex64; 4]) -> Result<Self> {
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::DegenerateState("pair amplitudes vanish".into()));
        }
        Ok(PairAmplitudes {
            c_aa: c[0] / norm,
            c_ahbv: c[1] / norm,
            c_avbh: c[2] / norm,
            c_bb: c[3] / norm,
        })
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.c_aa, self.c_ahbv, self.c_avbh, self.c_bb]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Probability that the photons leave through different outputs.
    pub fn coincidence_weight(&self) -> f64 {
        self.c_ahbv.norm_sqr() + self.c_avbh.norm_sqr()
    }

    /// Probability that both photons leave through the same output.
    pub fn bunching_probability(&self) -> f64 {
        self.c_aa.norm_sqr() + self.c_bb.norm_sqr()
    }
}

/// Output state of the superposed two-waveguide source.
pub fn output_state(pump: &PumpConfig, params: &SplitterParams) -> Result<PairAmplitudes> {
    pump.validate()?;
    let (w1, w2) = pump.normalized_weights()?;
    let (t_h, t_v, r_h, r_v) = (params.t_h(), params.t_v(), params.r_h(), params.r_v());
    let w2 = Complex64::from_polar(w2, pump.phase);
    let c_aa = w1 * (t_v * t_h).sqrt() + w2 * (r_v * r_h).sqrt();
    let c_ahbv = w1 * (r_v * t_h).sqrt() - w2 * (t_v * r_h).sqrt();
    let c_avbh = w1 * (t_v * r_h).sqrt() - w2 * (r_v * t_h).sqrt();
    let c_bb = w1 * (r_v * r_h).sqrt() + w2 * (t_v * t_h).sqrt();
    PairAmplitudes::normalized([Complex64::from(c_aa), c_ahbv, c_avbh, c_bb])
}

/// The two Bell states with one photon in each output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    /// (|H_A V_B⟩ + |V_A H_B⟩)/√2
    PsiPlus,
    /// (|H_A V_B⟩ − |V_A H_B⟩)/√2
    PsiMinus,
}

impl BellState {
    /// State vector in the two-qubit basis {HH, HV, VH, VV}, output A first.
    pub fn vector(self) -> [Complex64; 4] {
        let s = Complex64::from(FRAC_1_SQRT_2);
        let z = Complex64::default();
        match self {
            BellState::PsiPlus => [z, s, s, z],
            BellState::PsiMinus => [z, s, -s, z],
        }
    }

    /// The Bell state produced by an ideal splitter at pump phase `phase`,
    /// picked as the nearer of ψ⁻ (phase 0) and ψ⁺ (phase π).
    pub fn target_for_phase(phase: f64) -> Self {
        if phase.cos() >= 0.0 {
            BellState::PsiMinus
        } else {
            BellState::PsiPlus
        }
    }
}

impl fmt::Display for BellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BellState::PsiPlus => f.write_str("psi_plus"),
            BellState::PsiMinus => f.write_str("psi_minus"),
        }
    }
}

/// |⟨ψ±|ψ_out⟩|² over the full four-term state.
///
/// Evaluated as a ratio against the state norm so that exactly ideal
/// parameters give exactly 1.
pub fn bell_projection_probability(state: &PairAmplitudes, which: BellState) -> f64 {
    let overlap = match which {
        BellState::PsiPlus => state.c_ahbv + state.c_avbh,
        BellState::PsiMinus => state.c_ahbv - state.c_avbh,
    };
    overlap.norm_sqr() / (2.0 * state.norm_sqr())
}

/// Polarization qubit left after post-selecting one photon per output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceState {
    /// Amplitudes over {H_A V_B, V_A H_B}.
    pub qubit_state: [Complex64; 2],
    pub success_probability: f64,
}

impl CoincidenceState {
    /// Embeds the qubit in the two-qubit basis {HH, HV, VH, VV}.
    pub fn two_qubit_vector(&self) -> [Complex64; 4] {
        let z = Complex64::default();
        [z, self.qubit_state[0], self.qubit_state[1], z]
    }

    /// |⟨target|qubit⟩|² for a (not necessarily normalized) target.
    pub fn fidelity_to(&self, target: [Complex64; 2]) -> f64 {
        let norm = target[0].norm_sqr() + target[1].norm_sqr();
        let overlap = target[0].conj() * self.qubit_state[0] + target[1].conj() * self.qubit_state[1];
        overlap.norm_sqr() / norm
    }

    pub fn bell_fidelity(&self, which: BellState) -> f64 {
        let sign = match which {
            BellState::PsiPlus => 1.0,
            BellState::PsiMinus => -1.0,
        };
        self.fidelity_to([Complex64::from(1.0), Complex64::from(sign)])
    }
}

/// Keeps only the terms with one photon in each output and renormalizes.
pub fn postselect_coincidence(state: &PairAmplitudes) -> Result<CoincidenceState> {
    let total = state.norm_sqr();
    let weight = state.coincidence_weight();
    if !(weight > NORM_TOL * total) {
        return Err(Error::DegenerateState(
            "no amplitude with one photon in each output".into(),
        ));
    }
    let n = weight.sqrt();
    Ok(CoincidenceState {
        qubit_state: [state.c_ahbv / n, state.c_avbh / n],
        success_probability: weight / total,
    })
}
