//! Eigenvalues of a general real matrix: Householder reduction to upper
//! Hessenberg form followed by Francis double-shift QR iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

const DEFLATION_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS_PER_EIGENVALUE: usize = 30;

/// Reduces `a` to upper Hessenberg form by Householder similarity transforms.
pub fn hessenberg(a: &Matrix) -> Matrix {
    let n = a.nrows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<f64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= vnorm;
        }
        // H <- (I - 2vv') H
        for j in k..n {
            let dot: f64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi * h[(k + 1 + i, j)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= 2.0 * vi * dot;
            }
        }
        // H <- H (I - 2vv')
        for i in 0..n {
            let dot: f64 = v
                .iter()
                .enumerate()
                .map(|(j, vj)| vj * h[(i, k + 1 + j)])
                .sum();
            for (j, vj) in v.iter().enumerate() {
                h[(i, k + 1 + j)] -= 2.0 * vj * dot;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = 0.0;
        }
    }
    h
}

/// All eigenvalues of a square real matrix. Eigenvectors are not computed.
pub fn general_eigenvalues(a: &Matrix) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, not square",
            n,
            a.ncols()
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    francis_qr(hessenberg(a))
}

/// Double-shift QR on an upper Hessenberg matrix (1-based indices below to
/// keep the index arithmetic of the classical formulation).
#[allow(clippy::needless_range_loop)]
fn francis_qr(hess: Matrix) -> Result<Vec<Complex64>> {
    let n = hess.nrows();
    let mut a = vec![vec![0.0_f64; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = hess[(i, j)];
        }
    }
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }

    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r): (f64, f64, f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            // look for a single small subdiagonal element
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() <= DEFLATION_TOLERANCE * s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            y = a[nn - 1][nn - 1];
            w = a[nn][nn - 1] * a[nn - 1][nn];
            if l == nn - 1 {
                p = 0.5 * (y - x);
                q = p * p + w;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + z.copysign(p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn -= 2;
                break;
            }
            if its == MAX_ITERATIONS_PER_EIGENVALUE {
                return Err(Error::NoConvergence {
                    method: "Francis QR",
                    iterations: its,
                    residual: a[nn][nn - 1].abs(),
                });
            }
            if its == 10 || its == 20 {
                // exceptional shift
                t += x;
                for i in 1..=nn {
                    a[i][i] -= x;
                }
                let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;

            // look for two consecutive small subdiagonal elements
            let mut m = nn - 2;
            loop {
                z = a[m][m];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                q = a[m + 1][m + 1] - z - rr - ss;
                r = a[m + 2][m + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[i][i - 2] = 0.0;
                if i != m + 2 {
                    a[i][i - 3] = 0.0;
                }
            }

            // double-shift QR step on rows l..nn, columns m..nn
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = 0.0;
                    if k != nn - 1 {
                        r = a[k + 2][k - 1];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = (p * p + q * q + r * r).sqrt().copysign(p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[k][k - 1] = -a[k][k - 1];
                        }
                    } else {
                        a[k][k - 1] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        p = a[k][j] + q * a[k + 1][j];
                        if k != nn - 1 {
                            p += r * a[k + 2][j];
                            a[k + 2][j] -= p * z;
                        }
                        a[k + 1][j] -= p * y;
                        a[k][j] -= p * x;
                    }
                    let mmin = nn.min(k + 3);
                    for i in l..=mmin {
                        p = x * a[i][k] + y * a[i][k + 1];
                        if k != nn - 1 {
                            p += z * a[i][k + 2];
                            a[i][k + 2] -= p * r;
                        }
                        a[i][k + 1] -= p * q;
                        a[i][k] -= p;
                    }
                }
                k += 1;
            }
        }
    }
    Ok((1..=n).map(|i| Complex64::new(wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn upper_triangular_gives_diagonal() {
        let a = Matrix::from_row_slice(3, 3, &[3.0, 1.0, 4.0, 0.0, -1.0, 5.0, 0.0, 0.0, 2.0]);
        let ev = sorted(general_eigenvalues(&a).unwrap());
        let re: Vec<f64> = ev.iter().map(|z| z.re).collect();
        assert_abs_diff_eq!(re[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(re[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(re[2], 3.0, epsilon = 1e-12);
        assert!(ev.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn companion_of_z2_minus_1() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let ev = sorted(general_eigenvalues(&a).unwrap());
        assert_abs_diff_eq!(ev[0].re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[1].re, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rotation_has_imaginary_pair() {
        let a = Matrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let ev = sorted(general_eigenvalues(&a).unwrap());
        assert_abs_diff_eq!(ev[0].im.abs(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[0].im, -ev[1].im, epsilon = 1e-14);
    }

    #[test]
    fn companion_cubic_roots() {
        // z^3 - 6z^2 + 11z - 6 = (z-1)(z-2)(z-3)
        let a = Matrix::from_row_slice(3, 3, &[6.0, -11.0, 6.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let ev = sorted(general_eigenvalues(&a).unwrap());
        for (z, root) in ev.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(z.re, root, epsilon = 1e-10);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn hessenberg_preserves_trace_and_shape() {
        let a = Matrix::from_fn(6, 6, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let h = hessenberg(&a);
        assert_abs_diff_eq!(h.trace(), a.trace(), epsilon = 1e-12);
        assert_abs_diff_eq!(h.norm(), a.norm(), epsilon = 1e-12);
        for i in 2..6 {
            for j in 0..i - 1 {
                assert_eq!(h[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn one_by_one_and_empty() {
        assert!(general_eigenvalues(&Matrix::zeros(0, 0))
            .unwrap()
            .is_empty());
        let ev = general_eigenvalues(&Matrix::from_element(1, 1, 4.5)).unwrap();
        assert_eq!(ev, vec![Complex64::new(4.5, 0.0)]);
    }
}
