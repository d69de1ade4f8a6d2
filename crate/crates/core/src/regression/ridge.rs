//! Ridge (Tikhonov-regularized) linear regression with an unpenalized
//! intercept. Features are centered before solving, the weight penalty is
//! `alpha * ||w||^2`, and the small dense normal-equation system is solved
//! by Gaussian elimination with partial pivoting.

use crate::error::{Error, Result};

use super::RegressionDataset;

/// A fitted linear model: `predict(x) = intercept + x . weights`.
#[derive(Clone, Debug)]
pub struct RidgeModel {
    weights: Vec<f64>,
    intercept: f64,
}

/// Minimizes `||X w + b - y||^2 + alpha ||w||^2` over `(w, b)`, with the
/// intercept `b` left out of the penalty. Rank deficiency (possible only at
/// `alpha = 0`) is tolerated as long as the normal equations stay
/// numerically consistent; free directions get zero weight.
pub fn fit_ridge(data: &RegressionDataset, alpha: f64) -> Result<RidgeModel> {
    if data.rows() == 0 {
        return Err(Error::EmptyDataset);
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::invalid(
            "ridge_alpha",
            format!("{alpha} must be nonnegative"),
        ));
    }
    let n = data.rows();
    let k = data.cols();

    let mut feature_means = vec![0.0; k];
    for i in 0..n {
        for (j, m) in feature_means.iter_mut().enumerate() {
            *m += data.feature(i, j);
        }
    }
    for m in feature_means.iter_mut() {
        *m /= n as f64;
    }
    let target_mean = data.targets().iter().sum::<f64>() / n as f64;

    // Normal equations on centered data: (Xc^T Xc + alpha I) w = Xc^T yc.
    let mut gram = vec![0.0; k * k];
    let mut rhs = vec![0.0; k];
    for i in 0..n {
        let yc = data.targets()[i] - target_mean;
        for a in 0..k {
            let xa = data.feature(i, a) - feature_means[a];
            rhs[a] += xa * yc;
            for b in a..k {
                gram[a * k + b] += xa * (data.feature(i, b) - feature_means[b]);
            }
        }
    }
    for a in 0..k {
        for b in 0..a {
            gram[a * k + b] = gram[b * k + a];
        }
        gram[a * k + a] += alpha;
    }

    let weights = solve_dense(&mut gram, &mut rhs, k)?;
    let intercept = target_mean
        - weights
            .iter()
            .zip(&feature_means)
            .map(|(w, m)| w * m)
            .sum::<f64>();
    Ok(RidgeModel { weights, intercept })
}

/// Solves `A x = b` in place for a dense row-major `k x k` matrix.
///
/// Rank-deficient but consistent systems are solved by fixing the free
/// variables at zero (possible at `alpha = 0`, where centering alone makes
/// any system with fewer than `k + 1` samples deficient). Only a numerically
/// inconsistent system reports [`Error::SingularSystem`].
fn solve_dense(a: &mut [f64], b: &mut [f64], k: usize) -> Result<Vec<f64>> {
    // Tolerances are relative to the input scales so uniformly tiny systems
    // still solve.
    let a_scale = a
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let pivot_tol = a_scale * 1e-12;
    let b_scale = b.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let residual_tol = 1e-8 * b_scale.max(a_scale * 1e-6);

    for col in 0..k {
        let pivot_row = (col..k)
            .max_by(|&r, &s| {
                a[r * k + col]
                    .abs()
                    .total_cmp(&a[s * k + col].abs())
            })
            .unwrap();
        if a[pivot_row * k + col].abs() <= pivot_tol {
            // Column is effectively zero below the diagonal: leave the
            // variable to the back-substitution consistency check.
            continue;
        }
        if pivot_row != col {
            for j in 0..k {
                a.swap(col * k + j, pivot_row * k + j);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * k + col];
        for row in col + 1..k {
            let factor = a[row * k + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in col..k {
                a[row * k + j] -= factor * a[col * k + j];
            }
            b[row] -= factor * b[col];
        }
    }

    let mut x = vec![0.0; k];
    for col in (0..k).rev() {
        let mut acc = b[col];
        for j in col + 1..k {
            acc -= a[col * k + j] * x[j];
        }
        let diag = a[col * k + col];
        if diag.abs() <= pivot_tol {
            if acc.abs() <= residual_tol {
                x[col] = 0.0;
                continue;
            }
            return Err(Error::SingularSystem);
        }
        x[col] = acc / diag;
    }
    Ok(x)
}

impl RidgeModel {
    pub fn predict(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                actual: row.len(),
            });
        }
        Ok(self.intercept
            + row
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| x * w)
                .sum::<f64>())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }
}
