//! Comparisons against independent computations and published weight tables.

use approx::assert_abs_diff_eq;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trendspectra::filters::asymmetric_lpr_filter_with_degree;
use trendspectra::*;

fn henderson() -> SymmetricFilter {
    symmetric_filter(&LocalPolySpec::henderson13()).unwrap()
}

/// Henderson's explicit formula for the `2m-3`-term filter, `m = h + 2`.
fn henderson_closed_form(h: usize, j: i64) -> f64 {
    let m = (h + 2) as f64;
    let j = j as f64;
    let num = 315.0
        * ((m - 1.0).powi(2) - j * j)
        * (m * m - j * j)
        * ((m + 1.0).powi(2) - j * j)
        * (3.0 * m * m - 16.0 - 11.0 * j * j);
    let den =
        8.0 * m * (m * m - 1.0) * (4.0 * m * m - 1.0) * (4.0 * m * m - 9.0) * (4.0 * m * m - 25.0);
    num / den
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

#[test]
fn henderson_weights_match_explicit_formula() {
    for h in 2..=11 {
        let spec = LocalPolySpec::new(KernelKind::Henderson, h, 3).unwrap();
        let sym = symmetric_filter(&spec).unwrap();
        for j in -(h as i64)..=h as i64 {
            assert_abs_diff_eq!(sym.weight(j), henderson_closed_form(h, j), epsilon = 1e-13);
        }
    }
}

#[test]
fn henderson13_published_weights() {
    let published = [-0.01935, -0.02786, 0.0, 0.06549, 0.14736, 0.21434, 0.24006];
    let w = henderson();
    for (k, &p) in published.iter().enumerate() {
        assert_abs_diff_eq!(w.weights()[k], p, epsilon = 5e-6);
    }
}

#[test]
fn musgrave_end_weights_match_published_table() {
    let sym = henderson();
    let lc = MmsreSpec::musgrave(MmsreFamily::Lc);
    let q0 = [
        -0.09186, -0.05811, 0.01202, 0.11977, 0.24390, 0.35315, 0.42113,
    ];
    let f = mmsre_filter(&sym, &lc, 0).unwrap();
    for (a, b) in f.weights().iter().zip(q0) {
        assert_abs_diff_eq!(*a, b, epsilon = 5e-5);
    }
}

/// Intercept row of the pseudo-inverse of `K^{1/2} X`, rescaled by `K^{1/2}`.
fn lpr_by_pseudo_inverse(kappa: &[f64], offsets: &[i64], degree: usize) -> Vec<f64> {
    let m = offsets.len();
    let root: Vec<f64> = kappa.iter().map(|k| k.sqrt()).collect();
    let x = DMatrix::from_fn(m, degree + 1, |r, c| {
        root[r] * (offsets[r] as f64).powi(c as i32)
    });
    let pinv = x.svd(true, true).pseudo_inverse(1e-14).unwrap();
    (0..m).map(|r| pinv[(0, r)] * root[r]).collect()
}

#[test]
fn boundary_local_polynomial_weights_match_svd_fit() {
    for (kind, h, p) in [
        (KernelKind::Henderson, 6, 3),
        (KernelKind::Henderson, 4, 2),
        (KernelKind::Uniform, 5, 1),
        (KernelKind::Henderson, 9, 3),
    ] {
        let spec = LocalPolySpec::new(kind, h, p).unwrap();
        let kappa = kernel_weights(&spec.kernel);
        for q in 0..=h {
            let offsets: Vec<i64> = (-(h as i64)..=q as i64).collect();
            let oracle = lpr_by_pseudo_inverse(&kappa[..h + q + 1], &offsets, p);
            let got = asymmetric_lpr_filter_with_degree(&spec, q, p).unwrap();
            for (a, b) in got.weights().iter().zip(&oracle) {
                assert_abs_diff_eq!(*a, *b, epsilon = 1e-11);
            }
        }
    }
}

#[test]
fn jacobi_matches_library_symmetric_eigen() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [1, 2, 5, 17, 40] {
        let a = random_symmetric(&mut rng, n);
        let ours = symmetric_eigen(&a).unwrap();
        let mut reference: Vec<f64> = a
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        reference.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in ours.real_values().iter().zip(&reference) {
            assert_abs_diff_eq!(*x, *y, epsilon = 1e-11);
        }
        assert!(ours.residual < 1e-10);
    }
}

#[test]
fn spectral_norm_matches_largest_singular_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for (r, c) in [(3, 3), (10, 4), (4, 10), (30, 30)] {
        let a = DMatrix::from_fn(r, c, |_, _| rng.random_range(-1.0..1.0));
        let sv = a.clone().svd(false, false).singular_values.max();
        assert_abs_diff_eq!(spectral_norm(&a).unwrap(), sv, epsilon = 1e-9);
    }
    let sym = henderson();
    for policy in [
        BoundaryPolicy::musgrave(),
        BoundaryPolicy::lpr(LocalPolySpec::henderson13()),
    ] {
        let s = build_smoother(&sym, &policy, 51).unwrap();
        let d = s.entries() - tau_matrix(&sym, 51).unwrap();
        let sv = d.clone().svd(false, false).singular_values.max();
        assert_abs_diff_eq!(spectral_norm(&d).unwrap(), sv, epsilon = 1e-10);
    }
}

/// Eigenvalues from the library Schur decomposition, with an iteration cap.
fn schur_eigenvalues(a: &DMatrix<f64>) -> Vec<Complex64> {
    a.clone()
        .try_schur(1e-15, 100_000)
        .expect("Schur iteration converges")
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect()
}

fn assert_same_multiset(ours: &[Complex64], reference: &[Complex64], tol: f64) {
    assert_eq!(ours.len(), reference.len());
    let mut used = vec![false; reference.len()];
    for z in ours {
        let (idx, d) = reference
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, r)| (i, (z - r).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!(
            d < tol,
            "eigenvalue {z} has no partner within {tol} (nearest {d})"
        );
        used[idx] = true;
    }
}

#[test]
fn general_eigenvalues_match_schur_form() {
    let sym = henderson();
    for policy in [
        BoundaryPolicy::musgrave(),
        BoundaryPolicy::mmsre(MmsreSpec::musgrave(MmsreFamily::Cq)),
        BoundaryPolicy::circulant(),
    ] {
        let s = build_smoother(&sym, &policy, 31).unwrap();
        let reference = schur_eigenvalues(s.entries());
        assert_same_multiset(&general_eigenvalues(s.entries()).unwrap(), &reference, 1e-7);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let a = DMatrix::from_fn(12, 12, |_, _| rng.random_range(-1.0..1.0));
    let reference = schur_eigenvalues(&a);
    assert_same_multiset(&general_eigenvalues(&a).unwrap(), &reference, 1e-9);
}

#[test]
fn circulant_eigenvalues_are_the_dft_of_the_first_row() {
    let sym = henderson();
    for n in [13, 20, 51] {
        let w = CirculantOperator::new(&sym, n).unwrap();
        let row = w.first_row();
        let dft: Vec<f64> = (0..n)
            .map(|i| {
                row.iter()
                    .enumerate()
                    .map(|(j, &c)| {
                        c * Complex64::from_polar(
                            1.0,
                            -2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64,
                        )
                    })
                    .sum::<Complex64>()
                    .re
            })
            .collect();
        for (a, b) in w.eigenvalues().iter().zip(&dft) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-13);
        }
    }
}

#[test]
fn tau_eigenpairs_have_small_residuals() {
    let sym = henderson();
    let n = 40;
    let h = tau_matrix(&sym, n).unwrap();
    let z = tau_eigenvectors(n);
    let xi = tau_eigenvalues(&sym, n).unwrap();
    let r = &h * &z - &z * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(xi));
    assert!(r.amax() < 1e-13);
    assert_abs_diff_eq!(z[(0, 0)], (1.0 / n as f64).sqrt(), epsilon = 1e-15);
}

#[test]
fn reflecting_real_time_filter_folds_the_future_weights() {
    // q = 0: the weight at lead m moves to lag 1 - m
    let sym = henderson();
    let f = trendspectra::smoother::reflecting_realtime_filter(&sym);
    let w = sym.half();
    assert_abs_diff_eq!(f.leverage(), w[0] + w[1], epsilon = 1e-15);
    assert_abs_diff_eq!(f.weight(-6), w[6], epsilon = 1e-15);
    assert_abs_diff_eq!(f.weights().iter().sum::<f64>(), 1.0, epsilon = 1e-14);
}

#[test]
fn uniform_kernel_gives_moving_averages() {
    for h in 1..6 {
        for p in [0, 1] {
            let sym =
                symmetric_filter(&LocalPolySpec::new(KernelKind::Uniform, h, p).unwrap()).unwrap();
            for &w in sym.weights() {
                assert_abs_diff_eq!(w, 1.0 / (2 * h + 1) as f64, epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn table_values_for_the_thirteen_term_filter() {
    let sym = henderson();
    let policies = [
        BoundaryPolicy::mmsre(MmsreSpec::musgrave(MmsreFamily::Lc)),
        BoundaryPolicy::mmsre(MmsreSpec::musgrave(MmsreFamily::Ql)),
        BoundaryPolicy::mmsre(MmsreSpec::musgrave(MmsreFamily::Cq)),
        BoundaryPolicy::lpr(LocalPolySpec::henderson13()),
    ];
    let tau = [0.1608, 0.3817, 0.7493, 0.8351];
    let circ = [0.5835, 0.8641, 0.9876, 1.0047];
    for (i, p) in policies.iter().enumerate() {
        let s = build_smoother(&sym, p, 51).unwrap();
        assert_abs_diff_eq!(
            perturbation_report(&s, Algebra::Tau11).unwrap().delta,
            tau[i],
            epsilon = 1e-3
        );
        assert_abs_diff_eq!(
            perturbation_report(&s, Algebra::Circulant).unwrap().delta,
            circ[i],
            epsilon = 1e-3
        );
    }
}

#[test]
fn period_ten_cutoff_for_a_hundred_points() {
    assert_eq!(cutoff_from_period(100, 10.0).unwrap(), 20);
}
