//! Dense spectral machinery and Bauer–Fike perturbation reports.
//!
//! A smoother matrix `S` is written as `A + Δ` where `A` is the circulant or
//! τ₁₁ operator of the same symmetric filter. Both are diagonalized by a
//! unitary basis, so every eigenvalue of `S` lies within `‖Δ‖₂` of some
//! analytic eigenvalue of `A`. [`perturbation_report`] computes both sides
//! of that statement numerically.

mod jacobi;
mod norm;
mod qr;

pub use jacobi::symmetric_eigen;
pub use norm::spectral_norm;
pub use qr::{general_eigenvalues, hessenberg};

use num_complex::Complex64;

use crate::algebra::{tau_eigenvectors, CirculantOperator, TauOperator};
use crate::error::{Error, Result};
use crate::filters::SymmetricFilter;
use crate::linalg::{Matrix, Vector};
use crate::smoother::SmootherMatrix;

/// Absolute slack allowed on top of `δ` when testing containment, covering
/// the rounding error of the computed eigenvalues.
pub const CONTAINMENT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<Complex64>,
    pub vectors: Option<Matrix>,
    /// `max_i ‖A v_i - λ_i v_i‖`, when vectors are available.
    pub residual: f64,
}

impl EigenSystem {
    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }
}

/// Reference algebra for the perturbation bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algebra {
    Circulant,
    Tau11,
}

impl Algebra {
    pub fn name(self) -> &'static str {
        match self {
            Algebra::Circulant => "circulant",
            Algebra::Tau11 => "tau11",
        }
    }
}

/// Dense operator of the algebra and its analytic eigenvalues (natural order).
pub fn algebra_operator(
    sym: &SymmetricFilter,
    n: usize,
    algebra: Algebra,
) -> Result<(Matrix, Vec<f64>)> {
    Ok(match algebra {
        Algebra::Circulant => {
            let w = CirculantOperator::new(sym, n)?;
            (w.to_dense(), w.eigenvalues())
        }
        Algebra::Tau11 => {
            let h = TauOperator::new(sym, n)?;
            (h.to_dense(), h.eigenvalues())
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    pub algebra: Algebra,
    /// `‖S - A‖₂`.
    pub delta: f64,
    pub reference_values: Vec<f64>,
    pub smoother_values: Vec<Complex64>,
    /// For each eigenvalue of `S`, the index of its nearest reference eigenvalue.
    pub nearest: Vec<usize>,
    pub match_distances: Vec<f64>,
    /// Every distance is at most `delta` (up to [`CONTAINMENT_SLACK`]).
    pub containment: bool,
    pub max_imaginary: f64,
}

impl PerturbationReport {
    pub fn max_distance(&self) -> f64 {
        self.match_distances.iter().copied().fold(0.0, f64::max)
    }

    pub fn violations(&self) -> usize {
        self.match_distances
            .iter()
            .filter(|&&d| d > self.delta + CONTAINMENT_SLACK)
            .count()
    }
}

/// `δ = ‖S - A‖₂` and the distance from each eigenvalue of `S` to the
/// nearest analytic eigenvalue of `A`. Each eigenvalue is matched
/// independently; several may share a reference eigenvalue.
pub fn perturbation_report(s: &SmootherMatrix, algebra: Algebra) -> Result<PerturbationReport> {
    let (a, reference) = algebra_operator(s.source(), s.n(), algebra)?;
    perturbation_report_dense(s.entries(), &a, reference, algebra)
}

/// As [`perturbation_report`] for an arbitrary matrix against a given operator.
pub fn perturbation_report_dense(
    s: &Matrix,
    operator: &Matrix,
    reference_values: Vec<f64>,
    algebra: Algebra,
) -> Result<PerturbationReport> {
    if s.shape() != operator.shape() || reference_values.len() != s.nrows() {
        return Err(Error::LengthMismatch {
            expected: s.nrows(),
            got: operator.nrows(),
        });
    }
    let delta = spectral_norm(&(s - operator))?;
    let smoother_values = general_eigenvalues(s)?;
    let mut nearest = Vec::with_capacity(smoother_values.len());
    let mut match_distances = Vec::with_capacity(smoother_values.len());
    for lambda in &smoother_values {
        let (idx, dist) = reference_values
            .iter()
            .enumerate()
            .map(|(i, &r)| (i, (lambda - r).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap_or((0, 0.0));
        nearest.push(idx);
        match_distances.push(dist);
    }
    let containment = match_distances
        .iter()
        .all(|&d| d <= delta + CONTAINMENT_SLACK);
    let max_imaginary = smoother_values
        .iter()
        .fold(0.0_f64, |m, z| m.max(z.im.abs()));
    Ok(PerturbationReport {
        algebra,
        delta,
        reference_values,
        smoother_values,
        nearest,
        match_distances,
        containment,
        max_imaginary,
    })
}

/// `Δ_H z_i = (S - H) z_i` for the `i`-th τ₁₁ eigenvector (0-based, `i = 0`
/// is the constant vector). Only the first and last `h` coordinates can be nonzero.
pub fn eigenvector_perturbation(s: &SmootherMatrix, i: usize) -> Result<Vec<f64>> {
    let n = s.n();
    if i >= n {
        return Err(Error::InvalidArgument(format!(
            "eigenvector index {i} out of range for n={n}"
        )));
    }
    let h = TauOperator::new(s.source(), n)?.to_dense();
    let z: Vector = tau_eigenvectors(n).column(i).into_owned();
    Ok(((s.entries() - h) * z).iter().copied().collect())
}
