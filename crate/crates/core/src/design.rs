//! Filter design by eigenvalue cutoff.
//!
//! The τ₁₁ operator `H = ZΞZ'` splits a series into the cosine components
//! `z_i`, each scaled by `ξ_i`. Zeroing the eigenvalues below a cutoff gives
//! `H_k = ZΞ_kZ'`, which suppresses the high frequency components that `H`
//! only attenuates. The designed smoother `S_k` takes its interior rows from
//! `H_k` and its boundary rows from the smoother `S` of the chosen policy.

use crate::algebra::{tau_eigenvectors, TauOperator};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::smoother::{build_smoother, BoundaryPolicy, SmootherMatrix, TimeSeries};

/// Default eigenvalue cutoff, the minimizer of the distance to the ideal low-pass spectrum.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Indices sorted by descending eigenvalue, ties by ascending index.
pub fn descending_order(xi: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..xi.len()).collect();
    order.sort_by(|&a, &b| xi[b].total_cmp(&xi[a]).then(a.cmp(&b)));
    order
}

/// `f(k) = ‖i_(k) - ξ‖²` for eigenvalues already sorted in descending order.
pub fn cutoff_objective(xi_sorted: &[f64], k: usize) -> f64 {
    xi_sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| if i < k { (1.0 - x).powi(2) } else { x * x })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffDesign {
    k: usize,
    threshold: f64,
    order: Vec<usize>,
    xi_sorted: Vec<f64>,
    retained: Vec<bool>,
}

impl CutoffDesign {
    /// Keeps the `k` largest eigenvalues.
    pub fn from_count(xi: &[f64], k: usize) -> Result<Self> {
        let n = xi.len();
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!(
                "retained count k={k} must lie in 1..={n}"
            )));
        }
        let order = descending_order(xi);
        let xi_sorted: Vec<f64> = order.iter().map(|&i| xi[i]).collect();
        let mut retained = vec![false; n];
        for &i in &order[..k] {
            retained[i] = true;
        }
        Ok(Self {
            k,
            threshold: xi_sorted[k - 1],
            order,
            xi_sorted,
            retained,
        })
    }

    /// Keeps every eigenvalue `>= threshold` (at least the largest one).
    pub fn from_threshold(xi: &[f64], threshold: f64) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::InvalidArgument("no eigenvalues".into()));
        }
        if !threshold.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "threshold {threshold} is not finite"
            )));
        }
        let k = xi.iter().filter(|&&x| x >= threshold).count().max(1);
        Self::from_count(xi, k)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// `ξ_k`, the smallest retained eigenvalue.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Eigenvalues in descending order.
    pub fn xi_sorted(&self) -> &[f64] {
        &self.xi_sorted
    }

    /// `order()[r]` is the natural index of the `r`-th largest eigenvalue.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn is_retained(&self, i: usize) -> bool {
        self.retained[i]
    }

    /// Natural indices of the retained eigenvalues, ascending.
    pub fn retained_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.retained[i]).collect()
    }

    pub fn zeroed_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.retained[i]).collect()
    }

    /// `ξ` with the zeroed entries set to 0 (the diagonal of `Ξ_k`), natural order.
    pub fn truncate(&self, xi: &[f64]) -> Vec<f64> {
        xi.iter()
            .enumerate()
            .map(|(i, &x)| if self.retained[i] { x } else { 0.0 })
            .collect()
    }
}

/// `k = count of ξ ≥ 0.5`, the global minimizer of [`cutoff_objective`]
/// since `f(k) - f(k-1) = 1 - 2ξ_k`.
pub fn select_cutoff(xi: &[f64]) -> Result<CutoffDesign> {
    CutoffDesign::from_threshold(xi, DEFAULT_THRESHOLD)
}

/// Retained count removing cycles shorter than `period` observations:
/// `k = round(2n / period)`, clamped to `1..=n`.
pub fn cutoff_from_period(n: usize, period: f64) -> Result<usize> {
    if !(period > 2.0 && period.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "period must exceed 2 observations, got {period}"
        )));
    }
    let k = (2.0 * n as f64 / period).round() as usize;
    Ok(k.clamp(1, n.max(1)))
}

/// How the retained count is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CutoffMode {
    Auto,
    Count(usize),
    Threshold(f64),
    Period(f64),
}

impl CutoffMode {
    pub fn resolve(self, xi: &[f64]) -> Result<CutoffDesign> {
        match self {
            CutoffMode::Auto => select_cutoff(xi),
            CutoffMode::Count(k) => CutoffDesign::from_count(xi, k),
            CutoffMode::Threshold(t) => CutoffDesign::from_threshold(xi, t),
            CutoffMode::Period(p) => CutoffDesign::from_count(xi, cutoff_from_period(xi.len(), p)?),
        }
    }
}

/// `Z diag(d) Z'`.
fn synthesize(z: &Matrix, d: &[f64]) -> Matrix {
    let mut zd = z.clone();
    for (mut col, &x) in zd.column_iter_mut().zip(d) {
        col *= x;
    }
    zd * z.transpose()
}

/// `H_k = Z Ξ_k Z'`.
pub fn truncated_operator(tau: &TauOperator, design: &CutoffDesign) -> Result<Matrix> {
    let n = tau.n();
    if design.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: design.n(),
        });
    }
    let xi_k = design.truncate(&tau.eigenvalues());
    Ok(synthesize(&tau_eigenvectors(n), &xi_k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignedSmoother {
    /// `S` for the boundary policy.
    pub base: SmootherMatrix,
    /// `H`.
    pub tau: Matrix,
    /// `H_k`.
    pub truncated: Matrix,
    /// `S_k`: interior rows of `H_k`, boundary rows of `S`.
    pub smoother: Matrix,
    pub xi: Vec<f64>,
    pub design: CutoffDesign,
}

impl DesignedSmoother {
    pub fn n(&self) -> usize {
        self.smoother.nrows()
    }

    pub fn h(&self) -> usize {
        self.base.h()
    }

    /// `Δ_H = S - H`, supported on the boundary rows.
    pub fn delta_h(&self) -> Matrix {
        self.base.entries() - &self.tau
    }

    /// `Δ_k = S_k - H_k - Δ_H`, supported on the boundary rows.
    pub fn delta_k(&self) -> Matrix {
        &self.smoother - &self.truncated - self.delta_h()
    }

    /// `S_k y`.
    pub fn apply(&self, y: &TimeSeries) -> Result<TimeSeries> {
        let v = crate::smoother::apply_values(&self.smoother, y.values())?;
        TimeSeries::new(y.labels().to_vec(), v)
    }
}

/// Builds `S_k = H_(k) + Δ_H` for the given cutoff and boundary policy.
pub fn designed_smoother(
    tau: &TauOperator,
    design: &CutoffDesign,
    policy: &BoundaryPolicy,
) -> Result<DesignedSmoother> {
    let n = tau.n();
    let h = tau.source().h();
    let base = build_smoother(tau.source(), policy, n)?;
    let truncated = truncated_operator(tau, design)?;
    let mut smoother = truncated.clone();
    for t in (0..h).chain(n - h..n) {
        smoother.set_row(t, &base.entries().row(t));
    }
    Ok(DesignedSmoother {
        base,
        tau: tau.to_dense(),
        truncated,
        smoother,
        xi: tau.eigenvalues(),
        design: design.clone(),
    })
}

/// `θ = Z'y`, the coordinates of `y` on the orthonormal latent components.
pub fn latent_decomposition(y: &[f64], z: &Matrix) -> Result<Vec<f64>> {
    if y.len() != z.nrows() {
        return Err(Error::LengthMismatch {
            expected: z.nrows(),
            got: y.len(),
        });
    }
    Ok(z.column_iter()
        .map(|c| c.iter().zip(y).map(|(a, b)| a * b).sum())
        .collect())
}

/// Noise variance factors under unit white noise.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceDiagnostics {
    /// `diag(SS')`.
    pub original: Vec<f64>,
    /// `diag(S_k S_k')`.
    pub designed: Vec<f64>,
    /// `diag(Z(Ξ² - Ξ_k²)Z') = diag(HH' - H_kH_k')`, non-negative.
    pub interior_reduction: Vec<f64>,
    pub h: usize,
}

impl VarianceDiagnostics {
    fn interior_mean(&self, v: &[f64]) -> f64 {
        let n = v.len();
        let rows = &v[self.h..n - self.h];
        rows.iter().sum::<f64>() / rows.len() as f64
    }

    pub fn interior_mean_original(&self) -> f64 {
        self.interior_mean(&self.original)
    }

    pub fn interior_mean_designed(&self) -> f64 {
        self.interior_mean(&self.designed)
    }
}

fn row_square_sums(a: &Matrix) -> Vec<f64> {
    a.row_iter().map(|r| r.norm_squared()).collect()
}

pub fn variance_diagnostics(
    s: &SmootherMatrix,
    designed: &DesignedSmoother,
) -> Result<VarianceDiagnostics> {
    if s.n() != designed.n() || s.h() != designed.h() {
        return Err(Error::LengthMismatch {
            expected: designed.n(),
            got: s.n(),
        });
    }
    let z = tau_eigenvectors(s.n());
    let xi_k = designed.design.truncate(&designed.xi);
    let gap: Vec<f64> = designed
        .xi
        .iter()
        .zip(&xi_k)
        .map(|(a, b)| a * a - b * b)
        .collect();
    let interior_reduction = z
        .row_iter()
        .map(|r| r.iter().zip(&gap).map(|(zt, g)| zt * zt * g).sum())
        .collect();
    Ok(VarianceDiagnostics {
        original: row_square_sums(s.entries()),
        designed: row_square_sums(&designed.smoother),
        interior_reduction,
        h: s.h(),
    })
}

/// `-(1/n) Σ_{zeroed} ξ_i`, the interior bias discrepancy of the cutoff.
pub fn bias_discrepancy(xi: &[f64], design: &CutoffDesign) -> f64 {
    let n = xi.len() as f64;
    -design.zeroed_indices().iter().map(|&i| xi[i]).sum::<f64>() / n
}

/// `(1/n)(tr Ξ_k - tr Ξ)`, the same quantity via the traces.
pub fn bias_discrepancy_trace(xi: &[f64], design: &CutoffDesign) -> f64 {
    let n = xi.len() as f64;
    let truncated = design.truncate(xi);
    let diff: f64 = truncated.iter().zip(xi).map(|(a, b)| a - b).sum();
    diff / n
}
