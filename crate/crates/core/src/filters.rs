//! Kernel weights, local polynomial filters and boundary (asymmetric) filters.
//!
//! A filter of bandwidth `h` estimates the trend at time `t` from the
//! observations `y[t+j]`, `j = -h..=h`. Near the end of a series only
//! `q < h` future observations exist, and the estimate at that point is
//! produced by an [`AsymmetricFilter`] over `j = -h..=q`. Three families of
//! such filters are provided:
//!
//! * local polynomial regression on the available points ([`asymmetric_lpr_filter`]),
//! * minimum revision mean square error filters subject to polynomial
//!   constraints ([`mmsre_filter`], families LC, QL and CQ),
//! * the general constrained revision problem behind both ([`RevisionProblem`]).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, vandermonde, Matrix, Vector};

/// `δ²/σ²` that turns the LC family into the Musgrave end weights of the
/// 13-term Henderson filter.
pub const MUSGRAVE_NOISE_RATIO: f64 = 4.0 / (3.5 * 3.5 * PI);

const SUM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `[(h+1)²-j²][(h+2)²-j²][(h+3)²-j²]`, the kernel giving Henderson's
    /// maximally smooth cubic filters.
    Henderson,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub h: usize,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, h: usize) -> Self {
        Self { kind, h }
    }

    /// Kernel weight at offset `j`, `|j| <= h`.
    pub fn weight(&self, j: i64) -> f64 {
        match self.kind {
            KernelKind::Uniform => 1.0,
            KernelKind::Henderson => {
                let h = self.h as i64;
                let j2 = j * j;
                (((h + 1).pow(2) - j2) * ((h + 2).pow(2) - j2) * ((h + 3).pow(2) - j2)) as f64
            }
        }
    }
}

/// Kernel weights for offsets `-h..=h`.
pub fn kernel_weights(spec: &KernelSpec) -> Vec<f64> {
    let h = spec.h as i64;
    (-h..=h).map(|j| spec.weight(j)).collect()
}

/// A local polynomial regression of degree `degree` with the given kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalPolySpec {
    pub kernel: KernelSpec,
    pub degree: usize,
}

impl LocalPolySpec {
    pub fn new(kind: KernelKind, h: usize, degree: usize) -> Result<Self> {
        if degree > 2 * h {
            return Err(Error::DegreeTooHigh {
                degree,
                bound: 2 * h,
                h,
            });
        }
        Ok(Self {
            kernel: KernelSpec::new(kind, h),
            degree,
        })
    }

    /// The 13-term Henderson filter (`h = 6`, cubic).
    pub fn henderson13() -> Self {
        Self {
            kernel: KernelSpec::new(KernelKind::Henderson, 6),
            degree: 3,
        }
    }

    pub fn h(&self) -> usize {
        self.kernel.h
    }
}

/// Two-sided symmetric filter, weights indexed by `j = -h..=h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricFilter {
    weights: Vec<f64>,
    h: usize,
}

impl SymmetricFilter {
    /// Validates odd length, symmetry and unit sum.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len().is_multiple_of(2) {
            return Err(Error::InvalidFilter(format!(
                "symmetric filter needs an odd number of weights, got {}",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidFilter("non-finite weight".into()));
        }
        let h = weights.len() / 2;
        for d in 1..=h {
            let (a, b) = (weights[h - d], weights[h + d]);
            if (a - b).abs() > 1e-12 * (1.0 + a.abs()) {
                return Err(Error::InvalidFilter(format!(
                    "weights at lags -{d} and {d} differ ({a} vs {b})"
                )));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidFilter(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self { weights, h })
    }

    /// Builds a filter from its central and one-sided weights `w_0, ..., w_h`.
    pub fn from_half(half: &[f64]) -> Result<Self> {
        if half.is_empty() {
            return Err(Error::InvalidFilter("no weights".into()));
        }
        let mut weights: Vec<f64> = half.iter().rev().copied().collect();
        weights.extend_from_slice(&half[1..]);
        Self::new(weights)
    }

    /// The identity filter, `h = 0`, `w_0 = 1`.
    pub fn identity() -> Self {
        Self {
            weights: vec![1.0],
            h: 0,
        }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// All `2h+1` weights, lag `-h` first.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `w_0, w_1, ..., w_h`.
    pub fn half(&self) -> &[f64] {
        &self.weights[self.h..]
    }

    /// Weight at lag `j`; zero outside the window.
    pub fn weight(&self, j: i64) -> f64 {
        let h = self.h as i64;
        if j.abs() > h {
            0.0
        } else {
            self.weights[(j + h) as usize]
        }
    }

    /// Splits into the weights on past/current observations (`j <= q`) and
    /// on the future ones (`j > q`).
    pub fn split(&self, q: usize) -> (&[f64], &[f64]) {
        self.weights.split_at(self.h + q + 1)
    }
}

/// One-sided boundary filter over `j = -h..=q` with `q <= h` future observations.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricFilter {
    weights: Vec<f64>,
    h: usize,
    q: usize,
}

impl AsymmetricFilter {
    pub fn new(weights: Vec<f64>, h: usize, q: usize) -> Result<Self> {
        if q > h {
            return Err(Error::InvalidFilter(format!(
                "q={q} future observations exceed bandwidth h={h}"
            )));
        }
        if weights.len() != h + q + 1 {
            return Err(Error::LengthMismatch {
                expected: h + q + 1,
                got: weights.len(),
            });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidFilter("non-finite weight".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidFilter(format!(
                "boundary filter for q={q} sums to {sum}, not 1"
            )));
        }
        Ok(Self { weights, h, q })
    }

    pub(crate) fn from_parts(weights: Vec<f64>, h: usize, q: usize) -> Self {
        debug_assert_eq!(weights.len(), h + q + 1);
        Self { weights, h, q }
    }

    /// Weights for lags `-h..=q`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Weight at lag `j`; zero outside `-h..=q`.
    pub fn weight(&self, j: i64) -> f64 {
        let (h, q) = (self.h as i64, self.q as i64);
        if j < -h || j > q {
            0.0
        } else {
            self.weights[(j + h) as usize]
        }
    }

    /// The weight on the observation being estimated.
    pub fn leverage(&self) -> f64 {
        self.weights[self.h]
    }
}

fn design(h: usize, degree: usize) -> Matrix {
    let h = h as i64;
    vandermonde(-h..=h, degree)
}

/// Symmetric local polynomial filter `w' = e1'(X'KX)^{-1}X'K`.
pub fn symmetric_filter(spec: &LocalPolySpec) -> Result<SymmetricFilter> {
    let h = spec.h();
    if spec.degree > 2 * h {
        return Err(Error::DegreeTooHigh {
            degree: spec.degree,
            bound: 2 * h,
            h,
        });
    }
    let x = design(h, spec.degree);
    let kappa = kernel_weights(&spec.kernel);
    let mut w = wls_intercept_weights(&x, &kappa, "symmetric local polynomial weights")?;
    // the solve leaves rounding-level asymmetry
    for d in 1..=h {
        let avg = 0.5 * (w[h - d] + w[h + d]);
        w[h - d] = avg;
        w[h + d] = avg;
    }
    Ok(SymmetricFilter { weights: w, h })
}

/// `K X (X'KX)^{-1} e1` for a diagonal kernel `K`.
fn wls_intercept_weights(x: &Matrix, kappa: &[f64], what: &str) -> Result<Vec<f64>> {
    let cols = x.ncols();
    let kx = Matrix::from_fn(x.nrows(), cols, |r, c| kappa[r] * x[(r, c)]);
    let normal = x.transpose() * &kx;
    let mut e1 = Matrix::zeros(cols, 1);
    e1[(0, 0)] = 1.0;
    let beta = linalg::solve(&normal, &e1, what)?;
    Ok((kx * beta).column(0).iter().copied().collect())
}

/// Boundary filter from a local polynomial fit of the interior degree to the
/// `h + q + 1` available observations.
pub fn asymmetric_lpr_filter(spec: &LocalPolySpec, q: usize) -> Result<AsymmetricFilter> {
    asymmetric_lpr_filter_with_degree(spec, q, spec.degree)
}

/// As [`asymmetric_lpr_filter`] with an explicit boundary fit degree `d`.
pub fn asymmetric_lpr_filter_with_degree(
    spec: &LocalPolySpec,
    q: usize,
    degree: usize,
) -> Result<AsymmetricFilter> {
    let h = spec.h();
    if q > h {
        return Err(Error::InvalidArgument(format!(
            "q={q} exceeds bandwidth h={h}"
        )));
    }
    if degree > h + q {
        return Err(Error::DegreeTooHigh {
            degree,
            bound: h + q,
            h,
        });
    }
    if q == h && degree == spec.degree {
        let sym = symmetric_filter(spec)?;
        return Ok(AsymmetricFilter::from_parts(sym.weights, h, q));
    }
    let xp = vandermonde(-(h as i64)..=q as i64, degree);
    let kappa = &kernel_weights(&spec.kernel)[..h + q + 1];
    let w = wls_intercept_weights(&xp, kappa, "boundary local polynomial weights")?;
    Ok(AsymmetricFilter::from_parts(w, h, q))
}

/// The constraint/bias split of the MMSRE families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MmsreFamily {
    /// Linear trend, constant fit: weights sum to one.
    Lc,
    /// Quadratic trend, linear fit.
    Ql,
    /// Cubic trend, quadratic fit.
    Cq,
}

impl MmsreFamily {
    /// Number of reproduced polynomial columns `r`; the bias column is the next power.
    pub fn constraint_columns(self) -> usize {
        match self {
            MmsreFamily::Lc => 1,
            MmsreFamily::Ql => 2,
            MmsreFamily::Cq => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmsreSpec {
    pub family: MmsreFamily,
    /// `δ_r² / σ²`.
    pub noise_ratio: f64,
}

impl MmsreSpec {
    pub fn new(family: MmsreFamily, noise_ratio: f64) -> Result<Self> {
        if !(noise_ratio >= 0.0 && noise_ratio.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "noise ratio must be a finite non-negative number, got {noise_ratio}"
            )));
        }
        Ok(Self {
            family,
            noise_ratio,
        })
    }

    pub fn musgrave(family: MmsreFamily) -> Self {
        Self {
            family,
            noise_ratio: MUSGRAVE_NOISE_RATIO,
        }
    }
}

/// Noise covariance `D` of the revision problem (diagonal).
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseCovariance {
    /// `D = I`; any `σ²` is absorbed into the bias ratio.
    Identity,
    /// `D = K^{-1}` for the given kernel.
    InverseKernel(KernelSpec),
}

/// The constrained minimum revision error problem
///
/// ```text
/// min_v (v - w_p)' D_p (v - w_p) + [δ'(Z_p'v - Z'w)]²   s.t.  U_p'v = U'w
/// ```
///
/// whose solution is `v = w_p + L U_f'w_f + M Z_p δδ' Z_f'w_f` with
/// `Q = D_p + Z_p δδ' Z_p'`, `L = Q⁻¹U_p(U_p'Q⁻¹U_p)⁻¹` and
/// `M = Q⁻¹ - Q⁻¹U_p(U_p'Q⁻¹U_p)⁻¹U_p'Q⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct RevisionProblem {
    /// Constraint columns `U` over lags `-h..=h`.
    pub constraints: Matrix,
    /// Bias column `Z` and `δ²`, if any.
    pub bias: Option<(Vector, f64)>,
    pub noise: NoiseCovariance,
}

impl RevisionProblem {
    /// The LC/QL/CQ problem for bandwidth `h`: `U` = powers `0..r`, `Z` = power `r`, `D = I`.
    pub fn mmsre(spec: &MmsreSpec, h: usize) -> Self {
        let r = spec.family.constraint_columns();
        let x = design(h, r);
        Self {
            constraints: x.columns(0, r).into_owned(),
            bias: Some((x.column(r).into_owned(), spec.noise_ratio)),
            noise: NoiseCovariance::Identity,
        }
    }

    /// `U = X`, no bias term, `D = K^{-1}`: reduces to the local polynomial boundary filters.
    pub fn local_polynomial(spec: &LocalPolySpec) -> Self {
        Self {
            constraints: design(spec.h(), spec.degree),
            bias: None,
            noise: NoiseCovariance::InverseKernel(spec.kernel),
        }
    }

    fn h(&self) -> usize {
        self.constraints.nrows() / 2
    }

    fn q_matrix(&self, q: usize) -> Matrix {
        let np = self.h() + q + 1;
        let mut qm = match &self.noise {
            NoiseCovariance::Identity => Matrix::identity(np, np),
            NoiseCovariance::InverseKernel(k) => {
                let h = k.h as i64;
                Matrix::from_diagonal(&Vector::from_iterator(
                    np,
                    (-h..=q as i64).map(|j| 1.0 / k.weight(j)),
                ))
            }
        };
        if let Some((z, delta2)) = &self.bias {
            let zp = z.rows(0, np);
            qm += *delta2 * zp * zp.transpose();
        }
        qm
    }

    /// The pair `(M, L)` for `q` available future observations.
    pub fn operators(&self, q: usize) -> Result<(Matrix, Matrix)> {
        let np = self.h() + q + 1;
        let r = self.constraints.ncols();
        if r > np {
            return Err(Error::DegreeTooHigh {
                degree: r - 1,
                bound: np - 1,
                h: self.h(),
            });
        }
        let up = self.constraints.rows(0, np).into_owned();
        let q_inv = linalg::inverse(&self.q_matrix(q), "revision weight matrix Q")?;
        let qu = &q_inv * &up;
        let gram = up.transpose() * &qu;
        let gram_inv = linalg::inverse(&gram, "U_p' Q^{-1} U_p")?;
        let l = &qu * &gram_inv;
        let m = &q_inv - &l * qu.transpose();
        Ok((m, l))
    }

    /// Solves the problem for the given symmetric filter.
    pub fn solve(&self, sym: &SymmetricFilter, q: usize) -> Result<AsymmetricFilter> {
        let h = sym.h();
        if self.constraints.nrows() != 2 * h + 1 {
            return Err(Error::LengthMismatch {
                expected: 2 * h + 1,
                got: self.constraints.nrows(),
            });
        }
        if q > h {
            return Err(Error::InvalidArgument(format!(
                "q={q} exceeds bandwidth h={h}"
            )));
        }
        if q == h {
            return Ok(AsymmetricFilter::from_parts(sym.weights.clone(), h, q));
        }
        let np = h + q + 1;
        let nf = h - q;
        let (wp, wf) = sym.split(q);
        let wp = Vector::from_column_slice(wp);
        let wf = Vector::from_column_slice(wf);
        let (m, l) = self.operators(q)?;

        let uf = self.constraints.rows(np, nf);
        let mut v = wp + l * (uf.transpose() * &wf);
        if let Some((z, delta2)) = &self.bias {
            let zp = z.rows(0, np);
            let zf_w = z.rows(np, nf).dot(&wf);
            v += (*delta2 * zf_w) * (m * zp);
        }
        Ok(AsymmetricFilter::from_parts(
            v.iter().copied().collect(),
            h,
            q,
        ))
    }
}

/// Minimum revision mean square error boundary filter of the LC, QL or CQ family.
pub fn mmsre_filter(sym: &SymmetricFilter, spec: &MmsreSpec, q: usize) -> Result<AsymmetricFilter> {
    RevisionProblem::mmsre(spec, sym.h()).solve(sym, q)
}
