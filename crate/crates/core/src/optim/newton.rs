use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Retries with Levenberg damping before giving up.
pub const MAX_DAMPING_RETRIES: usize = 20;

fn solve(h: &DMatrix<f64>, rhs: &DVector<f64>, g: &[f64]) -> Option<Vec<f64>> {
    let d = h.clone().lu().solve(rhs)?;
    if d.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let slope: f64 = g.iter().zip(d.iter()).map(|(a, b)| a * b).sum();
    (slope > 0.0).then(|| d.iter().copied().collect())
}

/// Solves `H d = rhs`, requiring `gᵀd > 0`.
///
/// When the plain solve fails or does not give a descent direction, retries
/// with `H + μI`, starting from `μ = 1e-6 (1 + ‖H‖∞)` and growing tenfold for
/// at most [`MAX_DAMPING_RETRIES`] attempts.
pub fn damped_newton_direction(h: &DMatrix<f64>, rhs: &[f64], g: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    if h.nrows() != n || h.ncols() != n || g.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: h.nrows() });
    }
    let b = DVector::from_column_slice(rhs);
    if let Some(d) = solve(h, &b, g) {
        return Ok(d);
    }
    let norm_inf = h.row_iter().map(|row| row.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
    let mut mu = 1e-6 * (1.0 + norm_inf);
    for _ in 0..MAX_DAMPING_RETRIES {
        let damped = h + DMatrix::identity(n, n) * mu;
        if let Some(d) = solve(&damped, &b, g) {
            return Ok(d);
        }
        mu *= 10.0;
    }
    Err(Error::Numerical(format!("no descent direction after {MAX_DAMPING_RETRIES} damping retries")))
}
