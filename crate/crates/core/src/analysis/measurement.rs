//! Polarization analysis with a half-wave plate, a quarter-wave plate and a
//! polarizer.
//!
//! Light crosses the HWP at θ, then the QWP at φ, then a PBS whose
//! transmitted port (H) is detected. With the rotation R(a) = [[c, s], [−s, c]]
//! a retarder of retardance δ at angle a is R(−a)·diag(1, e^{iδ})·R(a), and the
//! detected state is |π⟩ = HWP(θ)†·QWP(φ)†·|H⟩. Under this convention
//!
//! ```text
//! (θ, φ) = (0, 0)      → H
//!          (45, 0)     → V
//!          (22.5, 0)   → D = (H + V)/√2
//!          (−22.5, 0)  → A = (H − V)/√2
//!          (0, 45)     → R = (H − iV)/√2
//!          (0, −45)    → L = (H + iV)/√2
//! ```
//!
//! up to global phase.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix2, Matrix4, Vector2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix2Q;
use crate::error::{Error, Result};

fn rotation(a: f64) -> Matrix2<Complex64> {
    let (s, c) = a.sin_cos();
    Matrix2::new(c.into(), s.into(), (-s).into(), c.into())
}

/// Jones matrix of a linear retarder with fast axis at `angle_deg`.
pub fn retarder(angle_deg: f64, retardance: f64) -> Matrix2<Complex64> {
    let a = angle_deg.to_radians();
    let d = Matrix2::new(
        Complex64::from(1.0),
        Complex64::default(),
        Complex64::default(),
        Complex64::from_polar(1.0, retardance),
    );
    rotation(-a) * d * rotation(a)
}

pub fn half_wave_plate(angle_deg: f64) -> Matrix2<Complex64> {
    retarder(angle_deg, std::f64::consts::PI)
}

pub fn quarter_wave_plate(angle_deg: f64) -> Matrix2<Complex64> {
    retarder(angle_deg, std::f64::consts::FRAC_PI_2)
}

/// Waveplate angles (degrees) in front of one detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waveplates {
    pub hwp_deg: f64,
    pub qwp_deg: f64,
}

impl Waveplates {
    pub fn new(hwp_deg: f64, qwp_deg: f64) -> Self {
        Waveplates { hwp_deg, qwp_deg }
    }

    /// The detected single-photon state.
    pub fn state(&self) -> Vector2<Complex64> {
        let h = Vector2::new(Complex64::from(1.0), Complex64::default());
        half_wave_plate(self.hwp_deg).adjoint() * quarter_wave_plate(self.qwp_deg).adjoint() * h
    }

    pub fn projector(&self) -> Matrix2<Complex64> {
        let s = self.state();
        s * s.adjoint()
    }
}

/// The six standard analyzer states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnalyzerState {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl AnalyzerState {
    pub const ALL: [AnalyzerState; 6] = [
        AnalyzerState::H,
        AnalyzerState::V,
        AnalyzerState::D,
        AnalyzerState::A,
        AnalyzerState::R,
        AnalyzerState::L,
    ];

    pub fn waveplates(self) -> Waveplates {
        match self {
            AnalyzerState::H => Waveplates::new(0.0, 0.0),
            AnalyzerState::V => Waveplates::new(45.0, 0.0),
            AnalyzerState::D => Waveplates::new(22.5, 0.0),
            AnalyzerState::A => Waveplates::new(-22.5, 0.0),
            AnalyzerState::R => Waveplates::new(0.0, 45.0),
            AnalyzerState::L => Waveplates::new(0.0, -45.0),
        }
    }

    /// Ideal Jones vector of the state.
    pub fn jones(self) -> Vector2<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |a: f64, b: Complex64| Vector2::new(Complex64::from(a), b);
        match self {
            AnalyzerState::H => c(1.0, 0.0.into()),
            AnalyzerState::V => c(0.0, 1.0.into()),
            AnalyzerState::D => c(s, s.into()),
            AnalyzerState::A => c(s, (-s).into()),
            AnalyzerState::R => c(s, Complex64::new(0.0, -s)),
            AnalyzerState::L => c(s, Complex64::new(0.0, s)),
        }
    }
}

impl fmt::Display for AnalyzerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for AnalyzerState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "H" => AnalyzerState::H,
            "V" => AnalyzerState::V,
            "D" => AnalyzerState::D,
            "A" => AnalyzerState::A,
            "R" => AnalyzerState::R,
            "L" => AnalyzerState::L,
            _ => {
                return Err(Error::Parse {
                    what: "analyzer state",
                    detail: format!("`{s}` is not one of H, V, D, A, R, L"),
                })
            }
        })
    }
}

/// One coincidence setting: an analyzer in front of each output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetting {
    pub a: Waveplates,
    pub b: Waveplates,
}

impl MeasurementSetting {
    pub fn new(a: Waveplates, b: Waveplates) -> Self {
        MeasurementSetting { a, b }
    }

    pub fn from_states(a: AnalyzerState, b: AnalyzerState) -> Self {
        MeasurementSetting::new(a.waveplates(), b.waveplates())
    }

    pub fn projector_a(&self) -> Matrix2<Complex64> {
        self.a.projector()
    }

    pub fn projector_b(&self) -> Matrix2<Complex64> {
        self.b.projector()
    }

    /// Π_a ⊗ Π_b.
    pub fn projector(&self) -> Matrix4<Complex64> {
        self.projector_a().kronecker(&self.projector_b())
    }

    /// tr(ρ Π_a⊗Π_b).
    pub fn probability(&self, rho: &DensityMatrix2Q) -> f64 {
        rho.expectation(&self.projector()).re.max(0.0)
    }
}

/// {H, V, D, R} ⊗ {H, V, D, R}: the minimal informationally complete set.
pub fn standard_settings() -> Vec<MeasurementSetting> {
    use AnalyzerState::*;
    product_settings(&[H, V, D, R])
}

/// All 36 pairs of the six analyzer states.
pub fn overcomplete_settings() -> Vec<MeasurementSetting> {
    product_settings(&AnalyzerState::ALL)
}

fn product_settings(states: &[AnalyzerState]) -> Vec<MeasurementSetting> {
    states
        .iter()
        .flat_map(|&a| states.iter().map(move |&b| MeasurementSetting::from_states(a, b)))
        .collect()
}

/// Coincidence counts recorded for one setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub setting: MeasurementSetting,
    pub counts: u64,
    pub integration_seconds: f64,
}
