use std::sync::Arc;

use nalgebra::DMatrix;

use super::{ConvexityBounds, Objective};
use crate::data::SparseDataset;
use crate::error::{check_dim, Error, Result};

/// Largest feature count for which a dense Hessian is formed.
pub const MAX_HESSIAN_DIMENSION: usize = 512;

/// `f(w) = Σᵢ log(1 + exp(−yᵢ⟨xᵢ, w⟩)) + λ‖w‖₂²`.
///
/// The regularizer carries no ½, so its gradient is `2λw` and the
/// strong-convexity coefficient is `2λ`.
#[derive(Debug, Clone)]
pub struct LogisticRegressionObjective {
    data: Arc<SparseDataset>,
    lambda: f64,
    lipschitz: f64,
    reference_optimum: Option<f64>,
}

/// `log(1 + eᵗ)` without overflow.
#[inline]
fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

/// `1 / (1 + eᵗ)`.
#[inline]
fn logistic_weight(t: f64) -> f64 {
    if t >= 0.0 {
        let e = (-t).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + t.exp())
    }
}

impl LogisticRegressionObjective {
    pub fn new(data: impl Into<Arc<SparseDataset>>, lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be >= 0, got {lambda}")));
        }
        let data = data.into();
        // trace bound on the largest Hessian eigenvalue
        let lipschitz = 0.25 * data.squared_frobenius() + 2.0 * lambda;
        Ok(LogisticRegressionObjective { data, lambda, lipschitz, reference_optimum: None })
    }

    /// Attaches a known optimal value (e.g. from a tightly converged run).
    pub fn with_reference_optimum(mut self, f_star: f64) -> Self {
        self.reference_optimum = Some(f_star);
        self
    }

    pub fn dataset(&self) -> &SparseDataset {
        &self.data
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Upper bound on the gradient Lipschitz constant, `¼Σ‖xᵢ‖² + 2λ`.
    pub fn lipschitz_bound(&self) -> f64 {
        self.lipschitz
    }

    fn regularizer(&self, w: &[f64]) -> f64 {
        self.lambda * w.iter().map(|v| v * v).sum::<f64>()
    }
}

impl Objective for LogisticRegressionObjective {
    fn dimension(&self) -> usize {
        self.data.n_features()
    }

    fn value(&self, w: &[f64]) -> Result<f64> {
        check_dim(self.dimension(), w.len())?;
        let loss: f64 =
            (0..self.data.n_examples()).map(|i| softplus(-self.data.labels()[i] * self.data.row_dot(i, w))).sum();
        Ok(loss + self.regularizer(w))
    }

    fn gradient(&self, w: &[f64]) -> Result<Vec<f64>> {
        Ok(self.value_and_gradient(w)?.1)
    }

    fn value_and_gradient(&self, w: &[f64]) -> Result<(f64, Vec<f64>)> {
        check_dim(self.dimension(), w.len())?;
        let mut g: Vec<f64> = w.iter().map(|v| 2.0 * self.lambda * v).collect();
        let mut loss = 0.0;
        for (i, (y, idx, val)) in self.data.rows().enumerate() {
            let t = y * self.data.row_dot(i, w);
            loss += softplus(-t);
            let coef = -y * logistic_weight(t);
            for (&j, &v) in idx.iter().zip(val) {
                g[j] += coef * v;
            }
        }
        Ok((loss + self.regularizer(w), g))
    }

    fn hessian(&self, w: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(self.dimension(), w.len())?;
        let d = self.dimension();
        if d > MAX_HESSIAN_DIMENSION {
            return Err(Error::HessianUnavailable);
        }
        let mut h = DMatrix::from_diagonal_element(d, d, 2.0 * self.lambda);
        for (i, (_, idx, val)) in self.data.rows().enumerate() {
            let p = logistic_weight(self.data.row_dot(i, w));
            let c = p * (1.0 - p);
            for (a, (&ja, &va)) in idx.iter().zip(val).enumerate() {
                for (&jb, &vb) in idx[a..].iter().zip(&val[a..]) {
                    let inc = c * va * vb;
                    h[(ja, jb)] += inc;
                    if ja != jb {
                        h[(jb, ja)] += inc;
                    }
                }
            }
        }
        Ok(h)
    }

    fn convexity_bounds(&self) -> Option<ConvexityBounds> {
        if self.lambda > 0.0 {
            ConvexityBounds::new(2.0 * self.lambda, self.lipschitz).ok()
        } else {
            None
        }
    }

    fn optimal_value(&self) -> Option<f64> {
        self.reference_optimum
    }
}
