use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Two-qubit pure state over {HH, HV, VH, VV}, output A first.
pub type Ket2Q = [Complex64; 4];

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-9;

/// Two-qubit density matrix over {HH, HV, VH, VV}.
///
/// Construction checks Hermiticity, unit trace and positivity, so every value
/// of this type is a physical state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2Q {
    elements: Matrix4<Complex64>,
}

impl DensityMatrix2Q {
    pub fn new(elements: Matrix4<Complex64>) -> Result<Self> {
        let rho = DensityMatrix2Q { elements };
        rho.check()?;
        Ok(rho)
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) ket.
    pub fn from_pure(ket: &Ket2Q) -> Result<Self> {
        let v = normalized_ket(ket)?;
        Ok(DensityMatrix2Q {
            elements: v * v.adjoint(),
        })
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix2Q {
            elements: Matrix4::identity() * Complex64::from(0.25),
        }
    }

    /// p |ψ⁻⟩⟨ψ⁻| + (1 − p) I/4.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("Werner weight must lie in [0,1], got {p}")));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::default();
        let singlet = Vector4::new(z, s.into(), (-s).into(), z);
        let elements = singlet * singlet.adjoint() * Complex64::from(p)
            + Matrix4::identity() * Complex64::from((1.0 - p) / 4.0);
        Ok(DensityMatrix2Q { elements })
    }

    /// Projects a Hermitian matrix onto the physical states: negative
    /// eigenvalues are set to zero and the trace rescaled to 1.
    pub fn nearest_physical(m: &Matrix4<Complex64>) -> Result<Self> {
        let h = (m + m.adjoint()) * Complex64::from(0.5);
        let eig = SymmetricEigen::new(h);
        let vals = eig.eigenvalues.map(|v| v.max(0.0));
        let total = vals.sum();
        if !(total > 0.0) {
            return Err(Error::DegenerateState("matrix has no positive eigenvalue".into()));
        }
        let d = Matrix4::from_diagonal(&vals.map(|v| Complex64::from(v / total)));
        let u = eig.eigenvectors;
        let elements = u * d * u.adjoint();
        Ok(DensityMatrix2Q {
            elements: (elements + elements.adjoint()) * Complex64::from(0.5),
        })
    }

    /// Skips validation. Callers guarantee a physical matrix.
    pub(crate) fn from_trusted(elements: Matrix4<Complex64>) -> Self {
        DensityMatrix2Q { elements }
    }

    pub fn elements(&self) -> &Matrix4<Complex64> {
        &self.elements
    }

    pub fn trace(&self) -> f64 {
        self.elements.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut v: [f64; 4] = SymmetricEigen::new(self.elements).eigenvalues.into();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn purity(&self) -> f64 {
        (self.elements * self.elements).trace().re
    }

    /// Re-checks the physical-state invariants.
    pub fn check(&self) -> Result<()> {
        let m = &self.elements;
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("density matrix has non-finite entries"));
        }
        let asym = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > HERMITIAN_TOL {
            return Err(Error::domain(format!("density matrix is not Hermitian (deviation {asym:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::domain(format!("density matrix trace is {tr}, not 1")));
        }
        let min = self.eigenvalues()[0];
        if min < -PSD_TOL {
            return Err(Error::domain(format!("density matrix has eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// tr(ρ O) for a two-qubit operator.
    pub fn expectation(&self, op: &Matrix4<Complex64>) -> Complex64 {
        (self.elements * op).trace()
    }

    /// tr(ρ A⊗B).
    pub fn local_expectation(&self, a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> f64 {
        self.expectation(&a.kronecker(b)).re
    }

    /// Keeps the populations and multiplies every coherence by `factor`.
    pub fn dephased(&self, factor: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&factor) {
            return Err(Error::domain(format!("dephasing factor must lie in [0,1], got {factor}")));
        }
        let mut m = self.elements;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    m[(i, j)] *= factor;
                }
            }
        }
        Ok(DensityMatrix2Q { elements: m })
    }

    /// Haar-random pure state.
    pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let v = gaussian_ket(rng);
        let n = v.norm();
        let v = v / Complex64::from(n);
        DensityMatrix2Q {
            elements: v * v.adjoint(),
        }
    }

    /// Random mixed state of the given rank (1..=4) from the Ginibre ensemble.
    pub fn random_mixed<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Self {
        let rank = rank.clamp(1, 4);
        let mut m = Matrix4::<Complex64>::zeros();
        for _ in 0..rank {
            let v = gaussian_ket(rng);
            m += v * v.adjoint();
        }
        let tr = m.trace().re;
        let m = m / Complex64::from(tr);
        DensityMatrix2Q {
            elements: (m + m.adjoint()) * Complex64::from(0.5),
        }
    }
}

fn gaussian_ket<R: Rng + ?Sized>(rng: &mut R) -> Vector4<Complex64> {
    Vector4::from_fn(|_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub(crate) fn normalized_ket(ket: &Ket2Q) -> Result<Vector4<Complex64>> {
    let v = Vector4::from_column_slice(ket);
    let n = v.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::domain("state vector has zero norm"));
    }
    Ok(v / Complex64::from(n))
}

/// ⟨ψ|ρ|ψ⟩ for a pure target (normalized internally).
pub fn fidelity(rho: &DensityMatrix2Q, target: &Ket2Q) -> Result<f64> {
    let v = normalized_ket(target)?;
    let f = (v.adjoint() * rho.elements() * v)[(0, 0)].re;
    Ok(f.clamp(0.0, 1.0))
}

/// ½ Σ|λ_i(ρ − σ)|.
pub fn trace_distance(a: &DensityMatrix2Q, b: &DensityMatrix2Q) -> f64 {
    let d = a.elements() - b.elements();
    let d = (d + d.adjoint()) * Complex64::from(0.5);
    0.5 * SymmetricEigen::new(d).eigenvalues.iter().map(|v| v.abs()).sum::<f64>()
}

/// Pauli matrices σ₀ = I, σ₁ = X, σ₂ = Y, σ₃ = Z in the {H, V} basis.
pub fn pauli(k: usize) -> Matrix2<Complex64> {
    let o = Complex64::from(1.0);
    let z = Complex64::default();
    let i = Complex64::i();
    match k {
        0 => Matrix2::new(o, z, z, o),
        1 => Matrix2::new(z, o, o, z),
        2 => Matrix2::new(z, -i, i, z),
        3 => Matrix2::new(o, z, z, -o),
        _ => panic!("Pauli index {k} out of range"),
    }
}
