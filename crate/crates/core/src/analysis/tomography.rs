//! Two-qubit state reconstruction from coincidence counts.

use nalgebra::{Cholesky, DMatrix, DVector, Matrix4};
use num_complex::Complex64;

use super::density::{pauli, DensityMatrix2Q};
use super::measurement::MeasurementRecord;
use crate::error::{Error, Result};

/// Relative singular-value floor below which the design matrix counts as
/// rank deficient.
const RANK_TOL: f64 = 1e-10;

/// Weight of the identity mixed into the MLE starting point so that it has
/// full rank.
const INIT_MIX: f64 = 1e-10;

/// σ_i⊗σ_j for the 16 pairs, row-major in (i, j).
fn pauli_products() -> Vec<Matrix4<Complex64>> {
    (0..4)
        .flat_map(|i| (0..4).map(move |j| pauli(i).kronecker(&pauli(j))))
        .collect()
}

/// Stokes parameters (1, s_x, s_y, s_z) of a single-qubit projector.
fn stokes(p: &nalgebra::Matrix2<Complex64>) -> [f64; 4] {
    std::array::from_fn(|k| (p * pauli(k)).trace().re)
}

fn total_counts(records: &[MeasurementRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::InformationalCompleteness("no measurement records".into()));
    }
    let n: f64 = records.iter().map(|r| r.counts as f64).sum();
    if !(n > 0.0) {
        return Err(Error::DegenerateState("all measurement records are empty".into()));
    }
    Ok(n)
}

/// Linear-inversion estimate together with the raw inverted matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEstimate {
    /// `raw` projected onto the physical states.
    pub rho: DensityMatrix2Q,
    /// ¼ Σ r_ij σ_i⊗σ_j straight from the counts; trace 1, possibly not PSD.
    pub raw: Matrix4<Complex64>,
    /// Fitted total N with n_k ≈ N tr(ρ Π_k).
    pub total_estimate: f64,
}

/// Stokes-correlation inversion by least squares, followed by eigenvalue
/// clipping.
///
/// Each record contributes n_k = ¼ Σ_ij (N r_ij) s^a_i s^b_j; the 16 unknowns
/// N r_ij are solved for together, so the set may be overcomplete.
pub fn tomography_linear(records: &[MeasurementRecord]) -> Result<LinearEstimate> {
    total_counts(records)?;
    if records.len() < 16 {
        return Err(Error::InformationalCompleteness(format!(
            "{} settings cannot determine 15 parameters and a total",
            records.len()
        )));
    }
    let design = DMatrix::from_fn(records.len(), 16, |k, col| {
        let sa = stokes(&records[k].setting.projector_a());
        let sb = stokes(&records[k].setting.projector_b());
        0.25 * sa[col / 4] * sb[col % 4]
    });
    let counts = DVector::from_iterator(records.len(), records.iter().map(|r| r.counts as f64));
    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > RANK_TOL * smax) {
        return Err(Error::InformationalCompleteness(format!(
            "design matrix is rank deficient (singular values {smin:e} / {smax:e})"
        )));
    }
    let x = svd
        .solve(&counts, 0.0)
        .map_err(|e| Error::InformationalCompleteness(e.to_string()))?;
    let total = x[0];
    if !(total > 0.0) {
        return Err(Error::DegenerateState(format!("fitted total count {total} is not positive")));
    }
    let mut raw = Matrix4::zeros();
    for (k, sigma) in pauli_products().iter().enumerate() {
        raw += sigma * Complex64::from(0.25 * x[k] / total);
    }
    let rho = DensityMatrix2Q::nearest_physical(&raw)?;
    Ok(LinearEstimate {
        rho,
        raw,
        total_estimate: total,
    })
}

/// Poisson log-likelihood with the total rate profiled out,
/// Σ n_k ln(N̂ p_k) − N̂ Σ p_k with N̂ = Σn / Σp (the ln n_k! terms dropped).
pub fn log_likelihood(rho: &DensityMatrix2Q, records: &[MeasurementRecord]) -> Result<f64> {
    let n_tot = total_counts(records)?;
    let probs: Vec<f64> = records.iter().map(|r| r.setting.probability(rho)).collect();
    Ok(profiled_log_likelihood(&probs, records, n_tot))
}

fn profiled_log_likelihood(q: &[f64], records: &[MeasurementRecord], n_tot: f64) -> f64 {
    let sum: f64 = q.iter().sum();
    if !(sum > 0.0) {
        return f64::NEG_INFINITY;
    }
    let scale = n_tot / sum;
    let mut ll = -n_tot;
    for (r, &p) in records.iter().zip(q) {
        if r.counts > 0 {
            let n = r.counts as f64;
            ll += n * (scale * p).ln();
        }
    }
    ll
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyResult {
    pub rho: DensityMatrix2Q,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Maximum-likelihood state over ρ = G†G / tr(G†G), with G upper triangular
/// and real on the diagonal (16 real parameters).
///
/// Steps follow the gradient with Barzilai–Borwein lengths and are halved
/// until the likelihood increases, so every accepted iterate improves on the
/// last. Convergence is declared after two consecutive accepted steps whose
/// relative likelihood change is below `tolerance`, or when no step length
/// improves the likelihood any more.
pub fn tomography_mle(
    records: &[MeasurementRecord],
    init: &DensityMatrix2Q,
    tolerance: f64,
    max_iterations: usize,
) -> Result<TomographyResult> {
    if !(tolerance > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let n_tot = total_counts(records)?;
    let problem = Problem::new(records, n_tot);

    let start = (init.elements() * Complex64::from(1.0 - INIT_MIX))
        + Matrix4::identity() * Complex64::from(INIT_MIX / 4.0);
    let chol = Cholesky::new(start)
        .ok_or_else(|| Error::DegenerateState("starting state is not positive definite".into()))?;
    let mut x = pack(&chol.l().adjoint());
    let (mut f, mut grad) = problem.evaluate(&x);
    if !f.is_finite() {
        return Err(Error::DegenerateState(
            "starting state assigns zero probability to an observed setting".into(),
        ));
    }

    let mut step = 1.0 / grad.norm().max(1e-300);
    let mut iterations = 0;
    let mut converged = false;
    let mut quiet_steps = 0;
    while iterations < max_iterations {
        iterations += 1;
        let mut accepted = None;
        for _ in 0..80 {
            let trial = &x + &grad * step;
            let (ft, gt) = problem.evaluate(&trial);
            if ft.is_finite() && ft > f {
                accepted = Some((trial, ft, gt));
                break;
            }
            step *= 0.5;
        }
        let Some((trial, ft, gt)) = accepted else {
            converged = true;
            break;
        };
        let rel = (ft - f) / f.abs().max(1e-300);
        let s = &trial - &x;
        let y = &gt - &grad;
        let sy = s.dot(&y);
        step = if sy < 0.0 { -s.dot(&s) / sy } else { step * 2.0 };
        x = trial;
        f = ft;
        grad = gt;
        quiet_steps = if rel < tolerance { quiet_steps + 1 } else { 0 };
        if quiet_steps >= 2 {
            converged = true;
            break;
        }
    }

    let rho = problem.state(&x);
    let log_likelihood = log_likelihood(&rho, records)?;
    Ok(TomographyResult {
        rho,
        log_likelihood,
        iterations,
        converged,
    })
}

/// Positions of the 16 real parameters: diagonal entries, then the real and
/// imaginary parts of the strictly upper entries.
const UPPER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pack(g: &Matrix4<Complex64>) -> DVector<f64> {
    let mut x = DVector::zeros(16);
    for i in 0..4 {
        x[i] = g[(i, i)].re;
    }
    for (k, &(i, j)) in UPPER.iter().enumerate() {
        x[4 + 2 * k] = g[(i, j)].re;
        x[5 + 2 * k] = g[(i, j)].im;
    }
    x
}

fn unpack(x: &DVector<f64>) -> Matrix4<Complex64> {
    let mut g = Matrix4::zeros();
    for i in 0..4 {
        g[(i, i)] = Complex64::from(x[i]);
    }
    for (k, &(i, j)) in UPPER.iter().enumerate() {
        g[(i, j)] = Complex64::new(x[4 + 2 * k], x[5 + 2 * k]);
    }
    g
}

struct Problem {
    projectors: Vec<Matrix4<Complex64>>,
    counts: Vec<f64>,
    n_tot: f64,
}

impl Problem {
    fn new(records: &[MeasurementRecord], n_tot: f64) -> Self {
        Problem {
            projectors: records.iter().map(|r| r.setting.projector()).collect(),
            counts: records.iter().map(|r| r.counts as f64).collect(),
            n_tot,
        }
    }

    fn state(&self, x: &DVector<f64>) -> DensityMatrix2Q {
        let g = unpack(x);
        let m = g.adjoint() * g;
        let m = m / m.trace();
        DensityMatrix2Q::from_trusted((m + m.adjoint()) * Complex64::from(0.5))
    }

    /// Profiled log-likelihood per count, Σ n_k ln q_k − N ln Σ q, and its
    /// gradient. The value is invariant under rescaling of G.
    fn evaluate(&self, x: &DVector<f64>) -> (f64, DVector<f64>) {
        let g = unpack(x);
        let m = g.adjoint() * g;
        let q: Vec<f64> = self.projectors.iter().map(|p| (m * p).trace().re).collect();
        let sum: f64 = q.iter().sum();
        let mut f = -self.n_tot * sum.ln();
        let mut r = Matrix4::<Complex64>::zeros();
        for ((p, &qk), &n) in self.projectors.iter().zip(&q).zip(&self.counts) {
            let mut w = -self.n_tot / sum;
            if n > 0.0 {
                if !(qk > 0.0) {
                    return (f64::NEG_INFINITY, DVector::zeros(16));
                }
                f += n * qk.ln();
                w += n / qk;
            }
            r += p * Complex64::from(w);
        }
        let gr = g * r * Complex64::from(2.0 / self.n_tot);
        (f / self.n_tot, pack(&gr))
    }
}
