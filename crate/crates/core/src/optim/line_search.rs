use super::Backtracking;
use crate::error::{check_dim, Error, Result};
use crate::objectives::Objective;

/// Smallest step tried before giving up.
pub const MIN_STEP: f64 = 1e-16;

/// Armijo backtracking along `x − αd`.
///
/// `fx` is `f(x)` and `g` is `∇f(x)`; `d` must satisfy `gᵀd > 0`. Returns the
/// first `alpha0 · shrinkʲ` with `f(x − αd) ≤ fx − c·α·gᵀd`. Trial points
/// with a non-finite value count as insufficient decrease, and so does a
/// trial point that rounds back onto `x`.
pub fn backtracking_line_search(
    obj: &dyn Objective,
    x: &[f64],
    fx: f64,
    d: &[f64],
    g: &[f64],
    params: &Backtracking,
) -> Result<f64> {
    params.validate()?;
    check_dim(x.len(), d.len())?;
    check_dim(x.len(), g.len())?;
    let slope: f64 = g.iter().zip(d).map(|(a, b)| a * b).sum();
    if !(slope > 0.0) {
        return Err(Error::NotDescent(slope));
    }
    let mut trial = vec![0.0; x.len()];
    let mut alpha = params.alpha0;
    loop {
        if alpha < MIN_STEP {
            return Err(Error::LineSearchFailure(alpha));
        }
        let mut moved = false;
        for ((t, xi), di) in trial.iter_mut().zip(x).zip(d) {
            *t = xi - alpha * di;
            moved |= *t != *xi;
        }
        let ft = obj.value(&trial)?;
        if moved && ft.is_finite() && ft <= fx - params.c * alpha * slope {
            return Ok(alpha);
        }
        alpha *= params.shrink;
    }
}
