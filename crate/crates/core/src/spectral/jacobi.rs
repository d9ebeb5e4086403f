//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

use super::EigenSystem;

const OFF_DIAGONAL_TOLERANCE: f64 = 1e-13;
const MAX_SWEEPS: usize = 50;
const SYMMETRY_TOLERANCE: f64 = 1e-12;

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Full eigensystem of a symmetric matrix, eigenvalues in descending order
/// and eigenvectors in the matching columns.
pub fn symmetric_eigen(a: &Matrix) -> Result<EigenSystem> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, not square",
            n,
            a.ncols()
        )));
    }
    let scale = linalg::max_abs(a).max(1.0);
    if linalg::symmetry_defect(a) > SYMMETRY_TOLERANCE * scale {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }

    let mut m = a.clone();
    let mut v = Matrix::identity(n, n);
    let threshold = OFF_DIAGONAL_TOLERANCE * a.norm();
    let mut sweeps = 0;
    while off_diagonal_norm(&m) > threshold {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                method: "cyclic Jacobi",
                iterations: MAX_SWEEPS,
                residual: off_diagonal_norm(&m),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, p, q, c, s);
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);

    let mut residual = 0.0_f64;
    for (c, &lambda) in values.iter().enumerate() {
        let x = vectors.column(c);
        residual = residual.max((a * x - lambda * x).norm());
    }
    Ok(EigenSystem {
        values: values.into_iter().map(|x| x.into()).collect(),
        vectors: Some(vectors),
        residual,
    })
}

/// Applies `J' M J` for the rotation in the `(p, q)` plane.
fn rotate(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.nrows();
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
}
