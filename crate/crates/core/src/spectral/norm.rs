//! Spectral norm by power iteration on `A'A`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

const RELATIVE_STALL: f64 = 1e-12;
const STALL_STEPS: usize = 5;
const MAX_ITERATIONS: usize = 20_000;
const RESTART_SEED: u64 = 0x7E4D_5EED;

enum Outcome {
    Converged(f64),
    /// The iterate fell into the null space of `A'A`.
    Collapsed,
}

fn power_iteration(b: &Matrix, start: Vector, scale: f64) -> Result<Outcome> {
    let mut v = start.normalize();
    let mut previous: Option<f64> = None;
    let mut stalled = 0;
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let u = b * &v;
        let norm = u.norm();
        if norm <= 1e-14 * scale {
            return Ok(Outcome::Collapsed);
        }
        let rho = v.dot(&u);
        residual = (&u - rho * &v).norm();
        v = u / norm;
        if let Some(p) = previous {
            if (rho - p).abs() <= RELATIVE_STALL * rho.abs() {
                stalled += 1;
                if stalled >= STALL_STEPS {
                    return Ok(Outcome::Converged(rho));
                }
            } else {
                stalled = 0;
            }
        }
        previous = Some(rho);
    }
    Err(Error::NoConvergence {
        method: "power iteration",
        iterations: MAX_ITERATIONS,
        residual,
    })
}

/// `‖A‖₂ = √ρ(A'A)`.
///
/// The iteration starts from the normalized all-ones vector. A matrix whose
/// rows sum to zero (any difference of two smoothers) maps that vector to
/// zero, so a second run from a fixed pseudo-random vector is always made and
/// the larger estimate kept; the result is deterministic.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    let b = a.transpose() * a;
    let scale = b.norm();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let n = b.nrows();
    let ones = Vector::from_element(n, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(RESTART_SEED);
    let random = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));

    let mut best: f64 = 0.0;
    for start in [ones, random] {
        if let Outcome::Converged(rho) = power_iteration(&b, start, scale)? {
            best = best.max(rho);
        }
    }
    Ok(best.max(0.0).sqrt())
}
