use nalgebra::{DMatrix, DVector};

use super::{ConvexityBounds, Objective};
use crate::error::{check_dim, Error, Result};

/// Symmetric positive-definite matrix of a quadratic objective.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadraticMatrix {
    Dense(DMatrix<f64>),
    Diagonal(Vec<f64>),
}

impl QuadraticMatrix {
    fn dimension(&self) -> usize {
        match self {
            QuadraticMatrix::Dense(q) => q.nrows(),
            QuadraticMatrix::Diagonal(d) => d.len(),
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            QuadraticMatrix::Dense(q) => {
                (0..q.nrows()).map(|i| (0..q.ncols()).map(|j| q[(i, j)] * x[j]).sum()).collect()
            }
            QuadraticMatrix::Diagonal(d) => d.iter().zip(x).map(|(a, b)| a * b).collect(),
        }
    }

    fn to_dense(&self) -> DMatrix<f64> {
        match self {
            QuadraticMatrix::Dense(q) => q.clone(),
            QuadraticMatrix::Diagonal(d) => DMatrix::from_diagonal(&DVector::from_column_slice(d)),
        }
    }
}

/// `f(x) = ½ xᵀQx − bᵀx` with `Q` symmetric positive definite.
///
/// The minimizer `x* = Q⁻¹b` and the eigenvalue range of `Q` are computed once
/// at construction.
#[derive(Debug, Clone)]
pub struct QuadraticObjective {
    q: QuadraticMatrix,
    b: Vec<f64>,
    bounds: ConvexityBounds,
    minimizer: Vec<f64>,
    optimal_value: f64,
}

impl QuadraticObjective {
    pub fn new(q: QuadraticMatrix, b: Vec<f64>) -> Result<Self> {
        let n = q.dimension();
        if n == 0 {
            return Err(Error::InvalidArgument("quadratic of dimension 0".into()));
        }
        check_dim(n, b.len())?;
        let (bounds, minimizer) = match &q {
            QuadraticMatrix::Diagonal(d) => {
                let m = d.iter().copied().fold(f64::INFINITY, f64::min);
                let l = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let bounds = ConvexityBounds::new(m, l)
                    .map_err(|_| Error::InvalidArgument("diagonal must be positive and finite".into()))?;
                (bounds, b.iter().zip(d).map(|(bi, di)| bi / di).collect())
            }
            QuadraticMatrix::Dense(mat) => {
                if !mat.is_square() {
                    return Err(Error::InvalidArgument("Q must be square".into()));
                }
                let scale = mat.amax().max(1.0);
                if (mat - mat.transpose()).amax() > 1e-12 * scale {
                    return Err(Error::InvalidArgument("Q must be symmetric".into()));
                }
                let eig = mat.clone().symmetric_eigen();
                let m = eig.eigenvalues.min();
                let l = eig.eigenvalues.max();
                let bounds = ConvexityBounds::new(m, l)
                    .map_err(|_| Error::InvalidArgument("Q must be positive definite".into()))?;
                let chol = mat
                    .clone()
                    .cholesky()
                    .ok_or_else(|| Error::InvalidArgument("Q must be positive definite".into()))?;
                let xs = chol.solve(&DVector::from_column_slice(&b));
                (bounds, xs.iter().copied().collect())
            }
        };
        let mut obj = QuadraticObjective { q, b, bounds, minimizer, optimal_value: 0.0 };
        obj.optimal_value = obj.eval(&obj.minimizer);
        Ok(obj)
    }

    pub fn diagonal(d: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(QuadraticMatrix::Diagonal(d), b)
    }

    pub fn dense(q: DMatrix<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(QuadraticMatrix::Dense(q), b)
    }

    pub fn matrix(&self) -> &QuadraticMatrix {
        &self.q
    }

    pub fn linear_term(&self) -> &[f64] {
        &self.b
    }

    pub fn minimizer(&self) -> &[f64] {
        &self.minimizer
    }

    /// `f(x) − f*`, evaluated as `½ (x−x*)ᵀQ(x−x*)` to avoid cancellation.
    pub fn suboptimality(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dimension(), x.len())?;
        let e: Vec<f64> = x.iter().zip(&self.minimizer).map(|(a, b)| a - b).collect();
        let qe = self.q.apply(&e);
        Ok(0.5 * e.iter().zip(&qe).map(|(a, b)| a * b).sum::<f64>())
    }

    /// Value, gradient and Hessian in one call.
    pub fn value_grad_hess(&self, x: &[f64]) -> Result<(f64, Vec<f64>, DMatrix<f64>)> {
        let (f, g) = self.value_and_gradient(x)?;
        Ok((f, g, self.q.to_dense()))
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let qx = self.q.apply(x);
        x.iter().zip(&qx).zip(&self.b).map(|((xi, qxi), bi)| 0.5 * xi * qxi - bi * xi).sum()
    }
}

impl Objective for QuadraticObjective {
    fn dimension(&self) -> usize {
        self.b.len()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dimension(), x.len())?;
        Ok(self.eval(x))
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dimension(), x.len())?;
        let mut g = self.q.apply(x);
        for (gi, bi) in g.iter_mut().zip(&self.b) {
            *gi -= bi;
        }
        Ok(g)
    }

    fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        check_dim(self.dimension(), x.len())?;
        Ok(self.q.to_dense())
    }

    fn convexity_bounds(&self) -> Option<ConvexityBounds> {
        Some(self.bounds)
    }

    fn optimal_value(&self) -> Option<f64> {
        Some(self.optimal_value)
    }
}
