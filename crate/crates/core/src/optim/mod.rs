//! Discrete Powerball methods.
//!
//! Every method iterates `x_{k+1} = x_k − α_k d_k` where the direction `d_k`
//! is built from `σ_γ(∇f(x_k))`:
//!
//! * [`gradient_powerball`]: `d = σ_γ(∇f)`
//! * [`one_bit_descent`]: `d = sign(∇f)`
//! * [`newton_powerball`]: `∇²f · d = σ_γ(∇f)`
//! * [`lbfgs_powerball`]: `d = H σ_γ(∇f)` by the two-loop recursion
//!
//! With `γ = 1` each reduces to its classical counterpart exactly, since the
//! transform is then a pass-through.

mod config;
mod lbfgs;
mod line_search;
mod newton;
mod trace;

pub use config::{initial_point, Backtracking, OptimizerConfig, StepPolicy, INIT_STD, MAX_MEMORY};
pub use lbfgs::{lbfgs_two_loop, CurvaturePair, CURVATURE_EPS};
pub use line_search::{backtracking_line_search, MIN_STEP};
pub use newton::{damped_newton_direction, MAX_DAMPING_RETRIES};
pub use trace::{IterationRecord, IterationTrace, Termination};

use std::time::Instant;

use lbfgs::History;

use crate::error::{check_dim, Error, Result};
use crate::objectives::Objective;
use crate::transform::{inner_power, power_sign_vec, PowerCoefficient};

/// Guard on `‖σ(∇f)‖²` in the explicit step.
const MIN_TRANSFORMED_NORM_SQ: f64 = 1e-300;

trait DirectionRule {
    fn direction(&mut self, obj: &dyn Objective, x: &[f64], g: &[f64], gamma: PowerCoefficient) -> Result<Vec<f64>>;

    fn observe(&mut self, _s: Vec<f64>, _y: Vec<f64>) {}

    fn supports_theorem1(&self) -> bool {
        false
    }
}

struct Gradient;

impl DirectionRule for Gradient {
    fn direction(&mut self, _: &dyn Objective, _: &[f64], g: &[f64], gamma: PowerCoefficient) -> Result<Vec<f64>> {
        power_sign_vec(g, gamma)
    }

    fn supports_theorem1(&self) -> bool {
        true
    }
}

struct Newton;

impl DirectionRule for Newton {
    fn direction(&mut self, obj: &dyn Objective, x: &[f64], g: &[f64], gamma: PowerCoefficient) -> Result<Vec<f64>> {
        let h = obj.hessian(x)?;
        let rhs = power_sign_vec(g, gamma)?;
        damped_newton_direction(&h, &rhs, g)
    }
}

struct Lbfgs {
    history: History,
}

impl DirectionRule for Lbfgs {
    fn direction(&mut self, _: &dyn Objective, _: &[f64], g: &[f64], gamma: PowerCoefficient) -> Result<Vec<f64>> {
        let z = lbfgs_two_loop(g, gamma, self.history.pairs())?;
        let slope: f64 = g.iter().zip(&z).map(|(a, b)| a * b).sum();
        if slope > 0.0 && z.iter().all(|v| v.is_finite()) {
            Ok(z)
        } else {
            power_sign_vec(g, gamma)
        }
    }

    fn observe(&mut self, s: Vec<f64>, y: Vec<f64>) {
        self.history.offer(s, y);
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn is_numerical(e: &Error) -> bool {
    matches!(e, Error::Numerical(_) | Error::NonFinite { .. } | Error::NotDescent(_))
}

fn drive<R: DirectionRule>(
    obj: &dyn Objective,
    x0: &[f64],
    cfg: &OptimizerConfig,
    mut rule: R,
) -> Result<IterationTrace> {
    cfg.validate()?;
    check_dim(obj.dimension(), x0.len())?;
    if matches!(cfg.step, StepPolicy::Theorem1 { .. }) && !rule.supports_theorem1() {
        return Err(Error::InvalidConfig("theorem1 step is only defined for the gradient method".into()));
    }

    let start = Instant::now();
    let mut trace = IterationTrace {
        records: Vec::with_capacity(cfg.max_iters.min(10_000) + 1),
        terminated_by: Termination::MaxIters,
        x: x0.to_vec(),
        iterates: Vec::new(),
        message: None,
    };
    let numerical = |mut trace: IterationTrace, msg: String| {
        trace.terminated_by = Termination::NumericalError;
        trace.message = Some(msg);
        Ok(trace)
    };

    let mut x = x0.to_vec();
    let (mut f, mut g) = obj.value_and_gradient(&x)?;
    let mut last_step = 0.0;
    let mut k = 0;
    loop {
        if !f.is_finite() || g.iter().any(|v| !v.is_finite()) {
            return numerical(trace, format!("non-finite objective or gradient at iteration {k}"));
        }
        let grad_norm = norm(&g);
        trace.records.push(IterationRecord {
            iter: k,
            objective: f,
            grad_norm,
            step_size: last_step,
            elapsed: start.elapsed(),
        });
        trace.x.clone_from(&x);
        if cfg.record_iterates {
            trace.iterates.push(x.clone());
        }
        if grad_norm <= cfg.grad_tol {
            trace.terminated_by = Termination::GradTol;
            return Ok(trace);
        }
        if k == cfg.max_iters {
            trace.terminated_by = Termination::MaxIters;
            return Ok(trace);
        }

        let d = match rule.direction(obj, &x, &g, cfg.gamma) {
            Ok(d) => d,
            Err(e) if is_numerical(&e) => return numerical(trace, e.to_string()),
            Err(e) => return Err(e),
        };
        let alpha = match cfg.step {
            StepPolicy::Fixed(a) => a,
            StepPolicy::Theorem1 { lipschitz } => {
                let sigma_sq: f64 = d.iter().map(|v| v * v).sum();
                if sigma_sq < MIN_TRANSFORMED_NORM_SQ {
                    return numerical(trace, "transformed gradient vanished".into());
                }
                inner_power(&g, cfg.gamma)? / (lipschitz * sigma_sq)
            }
            StepPolicy::Backtracking(params) => match backtracking_line_search(obj, &x, f, &d, &g, &params) {
                Ok(a) => a,
                Err(Error::LineSearchFailure(a)) => {
                    trace.terminated_by = Termination::LineSearchFailure;
                    trace.message = Some(format!("step shrank to {a:e} at iteration {k}"));
                    return Ok(trace);
                }
                Err(e) if is_numerical(&e) => return numerical(trace, e.to_string()),
                Err(e) => return Err(e),
            },
        };

        let x_next: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi - alpha * di).collect();
        let (f_next, g_next) = obj.value_and_gradient(&x_next)?;
        let s = x_next.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y = g_next.iter().zip(&g).map(|(a, b)| a - b).collect();
        rule.observe(s, y);
        x = x_next;
        f = f_next;
        g = g_next;
        last_step = alpha;
        k += 1;
    }
}

/// Gradient Powerball: `x_{k+1} = x_k − α_k σ_γ(∇f(x_k))`.
///
/// Supports all three step policies. Under [`StepPolicy::Theorem1`] the step
/// is recomputed every iteration as `∇f·σ(∇f) / (L‖σ(∇f)‖²)`.
pub fn gradient_powerball(obj: &dyn Objective, x0: &[f64], cfg: &OptimizerConfig) -> Result<IterationTrace> {
    drive(obj, x0, cfg, Gradient)
}

/// One-bit (sign) descent; `cfg.gamma` is ignored and forced to 0.
pub fn one_bit_descent(obj: &dyn Objective, x0: &[f64], cfg: &OptimizerConfig) -> Result<IterationTrace> {
    let cfg = OptimizerConfig { gamma: PowerCoefficient::SIGN, ..cfg.clone() };
    drive(obj, x0, &cfg, Gradient)
}

/// Newton Powerball: solves `∇²f(x_k) d = σ_γ(∇f(x_k))` each iteration, with
/// Levenberg damping when the solve fails or `d` is not a descent direction.
///
/// The conventional step policy is `Fixed(1.0)`.
pub fn newton_powerball(obj: &dyn Objective, x0: &[f64], cfg: &OptimizerConfig) -> Result<IterationTrace> {
    drive(obj, x0, cfg, Newton)
}

/// L-BFGS Powerball with `cfg.memory` curvature pairs.
///
/// Pairs failing `sᵀy > 1e-12‖s‖‖y‖` are skipped. If the two-loop direction
/// is not a descent direction the step falls back to `σ_γ(∇f)`.
pub fn lbfgs_powerball(obj: &dyn Objective, x0: &[f64], cfg: &OptimizerConfig) -> Result<IterationTrace> {
    drive(obj, x0, cfg, Lbfgs { history: History::new(cfg.memory) })
}
