//! Circulant and τ₁₁ (reflecting) operators built from a symmetric filter,
//! their analytic eigensystems, and the filter's transfer function.
//!
//! Both operators share the interior rows of the smoother matrix. They differ
//! at the ends: the circulant wraps the window around the series, while the
//! τ₁₁ operator reflects the missing observations back onto the available
//! ones. The τ₁₁ matrices are exactly the matrices commuting with
//!
//! ```text
//!         ⎡1 1        ⎤
//!         ⎢1 0 1      ⎥
//! T₁₁ =   ⎢  ⋱ ⋱ ⋱    ⎥
//!         ⎢     1 0 1 ⎥
//!         ⎣       1 1 ⎦
//! ```
//!
//! and every such matrix is a polynomial `Σ c_j T₁₁^{j-1}` in it. The
//! eigenvalues of `T₁₁` are `ϑ_i = 2cos((i-1)π/n)` with cosine eigenvectors,
//! so the τ₁₁ operator is diagonalized by an orthogonal DCT-II basis.
//!
//! All quantities are real: for symmetric weights the circulant eigenvalues
//! collapse to cosine sums, and both spectra are samples of the transfer
//! function `H(ν) = w_0 + 2 Σ_d w_d cos(νd)`, on the grid `2π(i-1)/n` for
//! the circulant and `(i-1)π/n` for τ₁₁.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::filters::SymmetricFilter;
use crate::linalg::Matrix;

fn check_dimension(sym: &SymmetricFilter, n: usize) -> Result<()> {
    if n <= 2 * sym.h() {
        return Err(Error::Dimension { n, h: sym.h() });
    }
    Ok(())
}

/// Frequency response of a symmetric filter.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    source: SymmetricFilter,
}

impl TransferFunction {
    pub fn new(source: SymmetricFilter) -> Self {
        Self { source }
    }

    /// `H(ν)`, real because the weights are symmetric.
    pub fn value(&self, nu: f64) -> f64 {
        transfer_function_value(&self.source, nu)
    }

    pub fn gain(&self, nu: f64) -> f64 {
        self.value(nu).abs()
    }
}

/// `H(ν) = w_0 + 2 Σ_{d=1}^{h} w_d cos(νd)`.
pub fn transfer_function_value(sym: &SymmetricFilter, nu: f64) -> f64 {
    let half = sym.half();
    half[0]
        + 2.0
            * half
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, w)| w * (nu * d as f64).cos())
                .sum::<f64>()
}

/// Circulant eigenvalue nodes `2π(i-1)/n`.
pub fn circulant_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

/// τ₁₁ eigenvalue nodes `(i-1)π/n`.
pub fn tau_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|i| PI * i as f64 / n as f64).collect()
}

/// The circulant matrix `W = Σ_{d=0}^{h} w_d C^d + Σ_{d=-h}^{-1} w_d C^{n+d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantOperator {
    first_row: Vec<f64>,
    source: SymmetricFilter,
}

impl CirculantOperator {
    pub fn new(sym: &SymmetricFilter, n: usize) -> Result<Self> {
        check_dimension(sym, n)?;
        let mut first_row = vec![0.0; n];
        for (d, &w) in sym.half().iter().enumerate() {
            first_row[d] = w;
            if d > 0 {
                first_row[n - d] = w;
            }
        }
        Ok(Self {
            first_row,
            source: sym.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    pub fn source(&self) -> &SymmetricFilter {
        &self.source
    }

    /// Row `t` is the first row cyclically shifted right by `t`.
    pub fn to_dense(&self) -> Matrix {
        let n = self.n();
        Matrix::from_fn(n, n, |t, j| self.first_row[(j + n - t) % n])
    }

    /// `ζ_i = w_0 + 2 Σ_d w_d cos(2π(i-1)d/n)`, natural order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        circulant_nodes(self.n())
            .into_iter()
            .map(|nu| transfer_function_value(&self.source, nu))
            .collect()
    }
}

pub fn circulant_matrix(sym: &SymmetricFilter, n: usize) -> Result<CirculantOperator> {
    CirculantOperator::new(sym, n)
}

pub fn circulant_eigenvalues(sym: &SymmetricFilter, n: usize) -> Result<Vec<f64>> {
    Ok(CirculantOperator::new(sym, n)?.eigenvalues())
}

/// `T₁₁`: tridiagonal ones with unit corners.
pub fn t11(n: usize) -> Matrix {
    let mut t = Matrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        t[(i, i + 1)] = 1.0;
        t[(i + 1, i)] = 1.0;
    }
    if n > 0 {
        t[(0, 0)] += 1.0;
        t[(n - 1, n - 1)] += 1.0;
    }
    t
}

/// First row of the reflecting operator:
/// `[w_0+w_1, w_1+w_2, ..., w_{h-1}+w_h, w_h, 0, ..., 0]`.
pub fn tau_first_row(sym: &SymmetricFilter, n: usize) -> Result<Vec<f64>> {
    check_dimension(sym, n)?;
    let half = sym.half();
    let h = sym.h();
    let mut row = vec![0.0; n];
    for d in 0..h {
        row[d] = half[d] + half[d + 1];
    }
    row[h] = half[h];
    Ok(row)
}

/// Coefficients `c` of `H = Σ c_j T₁₁^{j-1}` from the first row of `H`, by
/// back substitution in `Qc = h`, where column `j` of `Q` is the first column
/// of `T₁₁^{j-1}` (upper triangular, unit diagonal).
pub fn tau_coefficients_solve(first_row: &[f64]) -> Vec<f64> {
    let n = first_row.len();
    let mut c = vec![0.0; n];
    // Rows of Qc = h past the last nonzero of h back-substitute to exact zeros,
    // so only the leading block is formed (T₁₁^j e₁ grows like 3^j).
    let m = first_row
        .iter()
        .rposition(|&x| x != 0.0)
        .map_or(0, |i| i + 1);
    let mut q = Matrix::zeros(m, m);
    let mut col = vec![0.0; m];
    if col.is_empty() {
        return c;
    }
    col[0] = 1.0;
    for j in 0..m {
        for (i, &v) in col.iter().enumerate().take(j + 1) {
            q[(i, j)] = v;
        }
        col = t11_apply_truncated(&col, n);
    }
    for j in (0..m).rev() {
        let mut s = first_row[j];
        for k in (j + 1)..m {
            s -= q[(j, k)] * c[k];
        }
        c[j] = s / q[(j, j)];
    }
    c
}

/// Pochhammer rising factorial `(x)_q`, `(x)_0 = 1`.
fn pochhammer(x: usize, q: usize) -> f64 {
    (0..q).map(|i| (x + i) as f64).product()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Closed form of the τ₁₁ coefficients `c_1, ..., c_{h+1}`:
///
/// ```text
/// c_j = w_{j-1} + Σ_{q=0}^{⌊(h-j-1)/2⌋} (-1)^{q+1} (j)_q / (q+1)! · (j+2q+1) · w_{j+2q+1}
/// ```
///
/// All later coefficients vanish.
pub fn tau_coefficients_closed(sym: &SymmetricFilter) -> Vec<f64> {
    let half = sym.half();
    let h = sym.h();
    (1..=h + 1)
        .map(|j| {
            let mut c = half[j - 1];
            if h > j {
                for q in 0..=(h - j - 1) / 2 {
                    let sign = if q % 2 == 0 { -1.0 } else { 1.0 };
                    let m = j + 2 * q + 1;
                    c += sign * pochhammer(j, q) / factorial(q + 1) * m as f64 * half[m];
                }
            }
            c
        })
        .collect()
}

/// The reflecting operator `H ∈ τ₁₁` of a symmetric filter.
#[derive(Debug, Clone, PartialEq)]
pub struct TauOperator {
    first_row: Vec<f64>,
    coeffs: Vec<f64>,
    source: SymmetricFilter,
}

impl TauOperator {
    pub fn new(sym: &SymmetricFilter, n: usize) -> Result<Self> {
        let first_row = tau_first_row(sym, n)?;
        let mut coeffs = tau_coefficients_closed(sym);
        coeffs.resize(n, 0.0);
        Ok(Self {
            first_row,
            coeffs,
            source: sym.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    /// `c_1, ..., c_n`; zero beyond `h + 1`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn source(&self) -> &SymmetricFilter {
        &self.source
    }

    /// `Σ c_j T₁₁^{j-1}`, evaluated by Horner's scheme on the banded `T₁₁`.
    pub fn to_dense(&self) -> Matrix {
        let n = self.n();
        let active = self.source.h() + 1;
        let mut acc = Matrix::zeros(n, n);
        for &c in self.coeffs[..active].iter().rev() {
            acc = t11_mul(&acc);
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    /// `ξ_i = Σ_{j=1}^{h+1} c_j ϑ_i^{j-1}` with `ϑ_i = 2cos((i-1)π/n)`, natural order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let active = &self.coeffs[..self.source.h() + 1];
        tau_nodes(self.n())
            .into_iter()
            .map(|nu| {
                let theta = 2.0 * nu.cos();
                active.iter().rev().fold(0.0, |acc, c| acc * theta + c)
            })
            .collect()
    }

    pub fn eigenvectors(&self) -> Matrix {
        tau_eigenvectors(self.n())
    }
}

/// Leading `x.len()` entries of `T₁₁ x` for the order-`n` `T₁₁`, where `x`
/// holds the leading entries of a vector whose remaining entries are zero.
fn t11_apply_truncated(x: &[f64], n: usize) -> Vec<f64> {
    let m = x.len();
    (0..m)
        .map(|i| {
            let mut s = 0.0;
            if i > 0 {
                s += x[i - 1];
            }
            if i + 1 < m {
                s += x[i + 1];
            }
            if i == 0 {
                s += x[i];
            }
            if i == n - 1 {
                s += x[i];
            }
            s
        })
        .collect()
}

/// `T₁₁ · a` without forming `T₁₁`.
fn t11_mul(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let mut out = Matrix::zeros(n, a.ncols());
    for i in 0..n {
        for j in 0..a.ncols() {
            let mut s = 0.0;
            if i > 0 {
                s += a[(i - 1, j)];
            }
            if i + 1 < n {
                s += a[(i + 1, j)];
            }
            if i == 0 {
                s += a[(i, j)];
            }
            if i == n - 1 {
                s += a[(i, j)];
            }
            out[(i, j)] = s;
        }
    }
    out
}

pub fn tau_matrix(sym: &SymmetricFilter, n: usize) -> Result<Matrix> {
    Ok(TauOperator::new(sym, n)?.to_dense())
}

pub fn tau_eigenvalues(sym: &SymmetricFilter, n: usize) -> Result<Vec<f64>> {
    Ok(TauOperator::new(sym, n)?.eigenvalues())
}

/// Orthogonal eigenvector basis shared by every τ₁₁ operator of order `n`:
/// `Z_{ji} = √(2/n) k_i cos((2j-1)(i-1)π/(2n))`, `k_1 = 1/√2`, `k_i = 1` otherwise.
pub fn tau_eigenvectors(n: usize) -> Matrix {
    let scale = (2.0 / n as f64).sqrt();
    Matrix::from_fn(n, n, |j, i| {
        let k = if i == 0 { FRAC_1_SQRT_2 } else { 1.0 };
        scale * k * ((2 * j + 1) as f64 * i as f64 * PI / (2.0 * n as f64)).cos()
    })
}
