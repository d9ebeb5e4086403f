//! Small dense helpers shared by the filter and spectral code.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Solves `a x = b` with a partially pivoted LU factorization.
pub(crate) fn solve(a: &Matrix, b: &Matrix, what: &str) -> Result<Matrix> {
    let lu = a.clone().lu();
    lu.solve(b).ok_or_else(|| Error::Singular(what.to_string()))
}

pub(crate) fn inverse(a: &Matrix, what: &str) -> Result<Matrix> {
    a.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular(what.to_string()))
}

/// The k×k exchange matrix, ones on the anti-diagonal.
pub fn exchange(k: usize) -> Matrix {
    Matrix::from_fn(k, k, |i, j| if i + j + 1 == k { 1.0 } else { 0.0 })
}

/// Largest absolute entry.
pub fn max_abs(a: &Matrix) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Largest absolute entry of `E a E - a`.
pub fn centrosymmetry_defect(a: &Matrix) -> f64 {
    let (r, c) = a.shape();
    let mut worst = 0.0_f64;
    for i in 0..r {
        for j in 0..c {
            worst = worst.max((a[(i, j)] - a[(r - 1 - i, c - 1 - j)]).abs());
        }
    }
    worst
}

pub fn symmetry_defect(a: &Matrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// Powers of time distances, one row per `j` and one column per power `0..=degree`.
pub(crate) fn vandermonde(offsets: impl Iterator<Item = i64>, degree: usize) -> Matrix {
    let js: Vec<f64> = offsets.map(|j| j as f64).collect();
    Matrix::from_fn(js.len(), degree + 1, |r, c| js[r].powi(c as i32))
}
