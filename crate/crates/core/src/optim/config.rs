use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;

use crate::error::{Error, Result};
use crate::transform::PowerCoefficient;

/// Largest supported L-BFGS history.
pub const MAX_MEMORY: usize = 64;

/// Armijo backtracking parameters: try `alpha0 · shrinkʲ` for `j = 0, 1, …`
/// until `f(x − αd) ≤ f(x) − c·α·(gᵀd)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Backtracking {
    pub alpha0: f64,
    pub shrink: f64,
    pub c: f64,
}

impl Default for Backtracking {
    fn default() -> Self {
        Backtracking { alpha0: 1.0, shrink: 0.5, c: 1e-4 }
    }
}

impl Backtracking {
    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha0 > 0.0
            && self.alpha0.is_finite()
            && self.shrink > 0.0
            && self.shrink < 1.0
            && self.c > 0.0
            && self.c < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("backtracking needs alpha0 > 0 and shrink, c in (0, 1); got {self:?}")))
        }
    }
}

/// How the step size `α_k` is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepPolicy {
    /// Constant step.
    Fixed(f64),
    /// `α_k = ∇f·σ(∇f) / (L ‖σ(∇f)‖²)` with the given Lipschitz constant.
    /// Only meaningful for the gradient method.
    Theorem1 {
        lipschitz: f64,
    },
    Backtracking(Backtracking),
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::Backtracking(Backtracking::default())
    }
}

impl StepPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StepPolicy::Fixed(a) if a > 0.0 && a.is_finite() => Ok(()),
            StepPolicy::Fixed(a) => Err(Error::InvalidConfig(format!("fixed step must be > 0, got {a}"))),
            StepPolicy::Theorem1 { lipschitz } if lipschitz > 0.0 && lipschitz.is_finite() => Ok(()),
            StepPolicy::Theorem1 { lipschitz } => {
                Err(Error::InvalidConfig(format!("theorem1 step needs a positive Lipschitz constant, got {lipschitz}")))
            }
            StepPolicy::Backtracking(b) => b.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub gamma: PowerCoefficient,
    pub step: StepPolicy,
    /// Maximum number of steps; the trace holds up to `max_iters + 1` records.
    pub max_iters: usize,
    /// Stop once `‖∇f‖₂ ≤ grad_tol`.
    pub grad_tol: f64,
    /// L-BFGS history size.
    pub memory: usize,
    pub seed: u64,
    /// Keep every iterate in the trace.
    pub record_iterates: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            gamma: PowerCoefficient::IDENTITY,
            step: StepPolicy::default(),
            max_iters: 100,
            grad_tol: 1e-8,
            memory: 5,
            seed: 0,
            record_iterates: false,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidConfig(format!("grad_tol must be > 0, got {}", self.grad_tol)));
        }
        if self.memory > MAX_MEMORY {
            return Err(Error::InvalidConfig(format!("memory {} exceeds the limit of {MAX_MEMORY}", self.memory)));
        }
        self.step.validate()
    }
}

/// Standard deviation of the random starting point.
pub const INIT_STD: f64 = 0.1;

/// Draws a starting point with i.i.d. `N(0, 0.01)` coordinates.
///
/// Depends only on `dimension` and `seed`, so every method compared under the
/// same seed starts from the same point.
pub fn initial_point(dimension: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, INIT_STD).expect("valid normal");
    (0..dimension).map(|_| rng.sample(normal)).collect()
}
