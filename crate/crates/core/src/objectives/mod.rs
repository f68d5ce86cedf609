//! Differentiable objectives: strongly convex quadratics for checking the
//! convergence theory, and ℓ2-regularized logistic regression for benchmarks.

mod logistic;
mod quadratic;

pub use logistic::{LogisticRegressionObjective, MAX_HESSIAN_DIMENSION};
pub use quadratic::{QuadraticMatrix, QuadraticObjective};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Curvature bounds `m I ⪯ ∇²f ⪯ L I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityBounds {
    /// Strong-convexity coefficient `m > 0`.
    pub m: f64,
    /// Gradient Lipschitz constant `L ≥ m`.
    pub l: f64,
}

impl ConvexityBounds {
    pub fn new(m: f64, l: f64) -> Result<Self> {
        if !(m > 0.0 && l.is_finite() && m <= l) {
            return Err(Error::InvalidArgument(format!("convexity bounds need 0 < m <= L, got m={m}, L={l}")));
        }
        Ok(ConvexityBounds { m, l })
    }
}

/// A twice-differentiable function `ℝⁿ → ℝ`.
pub trait Objective: Send + Sync {
    fn dimension(&self) -> usize;

    fn value(&self, x: &[f64]) -> Result<f64>;

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        Ok((self.value(x)?, self.gradient(x)?))
    }

    /// Dense Hessian, or [`Error::HessianUnavailable`].
    fn hessian(&self, _x: &[f64]) -> Result<DMatrix<f64>> {
        Err(Error::HessianUnavailable)
    }

    fn convexity_bounds(&self) -> Option<ConvexityBounds> {
        None
    }

    /// Optimal value `f*`, when known.
    fn optimal_value(&self) -> Option<f64> {
        None
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn value(&self, x: &[f64]) -> Result<f64> {
        (**self).value(x)
    }
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        (**self).gradient(x)
    }
    fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        (**self).value_and_gradient(x)
    }
    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        (**self).hessian(x)
    }
    fn convexity_bounds(&self) -> Option<ConvexityBounds> {
        (**self).convexity_bounds()
    }
    fn optimal_value(&self) -> Option<f64> {
        (**self).optimal_value()
    }
}

/// Checks `‖∇f(x)‖² ≥ 2m (f(x) − f*)` at `x`.
///
/// Needs both convexity bounds and a known optimal value. A relative slack of
/// `1e-12` absorbs rounding in the equality case.
pub fn strong_convexity_gap_check(obj: &dyn Objective, x: &[f64]) -> Result<bool> {
    let bounds = obj.convexity_bounds().ok_or(Error::BoundsUnavailable)?;
    let f_star = obj.optimal_value().ok_or(Error::BoundsUnavailable)?;
    let (f, g) = obj.value_and_gradient(x)?;
    let lhs: f64 = g.iter().map(|v| v * v).sum();
    let rhs = 2.0 * bounds.m * (f - f_star);
    Ok(lhs >= rhs - 1e-12 * lhs.abs().max(rhs.abs()))
}
