//! Two-loop recursion with a power-transformed seed vector.

use crate::error::{check_dim, Error, Result};
use crate::transform::{power_sign_vec, PowerCoefficient};

/// A curvature pair `s = x_{k+1} − x_k`, `y = ∇f(x_{k+1}) − ∇f(x_k)` with
/// `sᵀy > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvaturePair {
    s: Vec<f64>,
    y: Vec<f64>,
    rho: f64,
}

impl CurvaturePair {
    pub fn new(s: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check_dim(s.len(), y.len())?;
        let sy = dot(&s, &y);
        if !(sy > 0.0 && sy.is_finite()) {
            return Err(Error::InvalidArgument(format!("curvature condition violated: sᵀy = {sy}")));
        }
        Ok(CurvaturePair { s, y, rho: 1.0 / sy })
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Computes `H σ_γ(g)` from `history` (oldest first) by the two-loop recursion.
///
/// The initial matrix is `(sᵀy / yᵀy) I` from the newest pair, or `I` when
/// the history is empty.
pub fn lbfgs_two_loop(g: &[f64], gamma: PowerCoefficient, history: &[CurvaturePair]) -> Result<Vec<f64>> {
    for pair in history {
        check_dim(g.len(), pair.s.len())?;
    }
    let mut q = power_sign_vec(g, gamma)?;
    let mut alphas = vec![0.0; history.len()];
    for (pair, alpha) in history.iter().zip(alphas.iter_mut()).rev() {
        let a = pair.rho * dot(&pair.s, &q);
        *alpha = a;
        for (qi, yi) in q.iter_mut().zip(&pair.y) {
            *qi -= a * yi;
        }
    }
    let scale = match history.last() {
        Some(newest) => dot(&newest.s, &newest.y) / dot(&newest.y, &newest.y),
        None => 1.0,
    };
    let mut z: Vec<f64> = q.iter().map(|qi| scale * qi).collect();
    for (pair, &alpha) in history.iter().zip(&alphas) {
        let b = pair.rho * dot(&pair.y, &z);
        for (zi, si) in z.iter_mut().zip(&pair.s) {
            *zi += si * (alpha - b);
        }
    }
    Ok(z)
}

/// Bounded FIFO of curvature pairs.
#[derive(Debug, Clone)]
pub(crate) struct History {
    pairs: Vec<CurvaturePair>,
    memory: usize,
}

/// Pairs with `sᵀy ≤ CURVATURE_EPS·‖s‖‖y‖` are dropped.
pub const CURVATURE_EPS: f64 = 1e-12;

impl History {
    pub(crate) fn new(memory: usize) -> Self {
        History { pairs: Vec::with_capacity(memory), memory }
    }

    pub(crate) fn pairs(&self) -> &[CurvaturePair] {
        &self.pairs
    }

    /// Stores the pair if it passes the curvature safeguard. Returns whether
    /// it was kept.
    pub(crate) fn offer(&mut self, s: Vec<f64>, y: Vec<f64>) -> bool {
        if self.memory == 0 {
            return false;
        }
        let sy = dot(&s, &y);
        let bound = CURVATURE_EPS * dot(&s, &s).sqrt() * dot(&y, &y).sqrt();
        if !(sy > bound) {
            return false;
        }
        let Ok(pair) = CurvaturePair::new(s, y) else {
            return false;
        };
        if self.pairs.len() == self.memory {
            self.pairs.remove(0);
        }
        self.pairs.push(pair);
        true
    }
}
