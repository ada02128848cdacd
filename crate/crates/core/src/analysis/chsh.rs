use nalgebra::{Matrix2, Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::{pauli, DensityMatrix2Q};

/// Linear-polarizer angles (degrees) of a CHSH test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChshAngles {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl Default for ChshAngles {
    fn default() -> Self {
        ChshAngles {
            a: 0.0,
            a_prime: 45.0,
            b: 22.5,
            b_prime: 67.5,
        }
    }
}

/// ±1 observable of a linear polarizer at `angle_deg`: cos2α σ_z + sin2α σ_x.
pub fn analyzer_observable(angle_deg: f64) -> Matrix2<Complex64> {
    let (s, c) = (2.0 * angle_deg.to_radians()).sin_cos();
    pauli(3) * Complex64::from(c) + pauli(1) * Complex64::from(s)
}

/// Correlation E(α, β) = tr(ρ σ_α⊗σ_β).
pub fn correlation(rho: &DensityMatrix2Q, alpha_deg: f64, beta_deg: f64) -> f64 {
    rho.local_expectation(&analyzer_observable(alpha_deg), &analyzer_observable(beta_deg))
}

/// S = |E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)|.
pub fn chsh_fixed(rho: &DensityMatrix2Q, angles: &ChshAngles) -> f64 {
    let e = |x, y| correlation(rho, x, y);
    (e(angles.a, angles.b) - e(angles.a, angles.b_prime)
        + e(angles.a_prime, angles.b)
        + e(angles.a_prime, angles.b_prime))
    .abs()
}

/// T_ij = tr(ρ σ_i⊗σ_j) for i, j ∈ {x, y, z}.
pub fn correlation_tensor(rho: &DensityMatrix2Q) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| rho.local_expectation(&pauli(i + 1), &pauli(j + 1)))
}

/// Largest S reachable with any analyzer settings: 2√(m₁ + m₂), with m₁, m₂
/// the two largest eigenvalues of TᵀT.
pub fn chsh_optimal(rho: &DensityMatrix2Q) -> f64 {
    let t = correlation_tensor(rho);
    let mut m: Vec<f64> = SymmetricEigen::new(t.transpose() * t).eigenvalues.iter().copied().collect();
    m.sort_by(|a, b| b.total_cmp(a));
    2.0 * (m[0] + m[1]).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarization::BellState;
    use num_complex::Complex64;

    const TSIRELSON: f64 = 2.0 * std::f64::consts::SQRT_2;

    #[test]
    fn singlet_reaches_tsirelson() {
        let rho = DensityMatrix2Q::from_pure(&BellState::PsiMinus.vector()).unwrap();
        assert!((chsh_fixed(&rho, &ChshAngles::default()) - TSIRELSON).abs() < 1e-9);
        assert!((chsh_optimal(&rho) - TSIRELSON).abs() < 1e-9);
    }

    #[test]
    fn werner_scaling() {
        let rho = DensityMatrix2Q::werner(0.9213).unwrap();
        let s = chsh_fixed(&rho, &ChshAngles::default());
        assert!((s - TSIRELSON * 0.9213).abs() < 1e-12);
        assert!((s - 2.606).abs() < 5e-4);
    }

    #[test]
    fn product_state_is_classical() {
        let o = Complex64::from(1.0);
        let z = Complex64::default();
        let rho = DensityMatrix2Q::from_pure(&[o, z, z, z]).unwrap();
        assert!(chsh_fixed(&rho, &ChshAngles::default()) <= 2.0);
        assert!(chsh_optimal(&rho) <= 2.0 + 1e-12);
    }

    #[test]
    fn maximally_mixed_has_no_correlations() {
        assert!(chsh_optimal(&DensityMatrix2Q::maximally_mixed()) < 1e-12);
    }

    #[test]
    fn singlet_correlation_law() {
        let rho = DensityMatrix2Q::from_pure(&BellState::PsiMinus.vector()).unwrap();
        for (a, b) in [(0.0, 0.0), (10.0, 40.0), (-30.0, 15.0)] {
            let e = correlation(&rho, a, b);
            let expected = -(2.0 * (a - b) * std::f64::consts::PI / 180.0).cos();
            assert!((e - expected).abs() < 1e-12);
        }
    }
}
