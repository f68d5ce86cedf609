//! Continuous-time Powerball flows
//!
//! * gradient flow `ẋ = −σ_γ(∇f(x))`
//! * Newton flow `ẋ = −(∇²f(x))⁻¹ σ_γ(∇f(x))`
//!
//! integrated by classical RK4 with a state-dependent step, together with the
//! finite-time arrival bounds derived from the Lyapunov function
//! `V = (1/(γ+1)) Σ |∂f/∂xᵢ|^{γ+1}`.

use crate::error::{check_dim, Error, Result};
use crate::objectives::Objective;
use crate::optim::damped_newton_direction;
use crate::transform::{lyapunov_v, power_sign_vec, PowerCoefficient};

/// Integration hard limit on the number of steps.
pub const MAX_STEPS: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// End time. `None` means twice the arrival bound, which must then exist.
    pub t_end: Option<f64>,
    /// Arrival is declared at the first sample with `‖∇f‖₂ ≤ ode_tol`.
    pub ode_tol: f64,
    /// Upper limit on the step size.
    pub h_max: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { t_end: None, ode_tol: 1e-6, h_max: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSample {
    pub t: f64,
    pub x: Vec<f64>,
    /// Lyapunov value `V(∇f(x))`.
    pub v: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Gradient,
    Newton,
}

#[derive(Debug, Clone)]
pub struct OdeTrajectory {
    pub flow: Flow,
    pub gamma: PowerCoefficient,
    pub samples: Vec<OdeSample>,
    /// First time with `‖∇f‖₂ ≤ ode_tol`. Integration stops there.
    pub t_zero: Option<f64>,
    /// Finite-time arrival bound computed from `V(0)`, when it applies.
    pub bound_t: Option<f64>,
    /// Set when integration stopped on a non-finite state or exhausted steps.
    pub failure: Option<String>,
}

impl OdeTrajectory {
    pub fn v0(&self) -> f64 {
        self.samples[0].v
    }

    /// Linear interpolation of the state at time `t` within the sampled range.
    pub fn state_at(&self, t: f64) -> Option<Vec<f64>> {
        let s = &self.samples;
        if t < s[0].t || t > s[s.len() - 1].t {
            return None;
        }
        let k = s.partition_point(|p| p.t <= t);
        if k == s.len() {
            return Some(s[k - 1].x.clone());
        }
        let (a, b) = (&s[k - 1], &s[k]);
        let w = (t - a.t) / (b.t - a.t);
        Some(a.x.iter().zip(&b.x).map(|(xa, xb)| xa + w * (xb - xa)).collect())
    }

    /// `t_zero ≤ (1 + slack) · bound_t`, when both are known.
    pub fn within_bound(&self, slack: f64) -> Option<bool> {
        Some(self.t_zero? <= (1.0 + slack) * self.bound_t?)
    }
}

/// Gradient-flow arrival bound `((γ+1)V₀)^{(1−γ)/(1+γ)} / (m(1−γ))`.
pub fn gradient_flow_bound(v0: f64, gamma: PowerCoefficient, m: f64) -> Result<f64> {
    Ok(newton_flow_bound(v0, gamma)? / m)
}

/// Newton-flow arrival bound `((γ+1)V₀)^{(1−γ)/(1+γ)} / (1−γ)`.
pub fn newton_flow_bound(v0: f64, gamma: PowerCoefficient) -> Result<f64> {
    if !gamma.is_interior() {
        return Err(Error::InvalidArgument(format!("finite-time bounds need 0 < gamma < 1, got {gamma}")));
    }
    let g = gamma.value();
    Ok(((g + 1.0) * v0).powf((1.0 - g) / (1.0 + g)) / (1.0 - g))
}

/// Exponent `p = 2γ/(1+γ)` of the differential inequality `V̇ ≤ −K V^p`
/// satisfied by the flows.
pub fn envelope_exponent(gamma: PowerCoefficient) -> f64 {
    let g = gamma.value();
    2.0 * g / (1.0 + g)
}

/// Rate `K = m (γ+1)^{2γ/(γ+1)}` in `V̇ ≤ −K V^p` along the gradient flow of an
/// `m`-strongly convex function. Use `m = 1` for the Newton flow.
pub fn envelope_rate(m: f64, gamma: PowerCoefficient) -> f64 {
    m * (1.0 + gamma.value()).powf(envelope_exponent(gamma))
}

/// Comparison solution of `ḟ = −K f^p`, `f(0) = V₀`:
/// `(V₀^{1−p} − K(1−p)t)^{1/(1−p)}` until it reaches zero at
/// `V₀^{1−p}/(K(1−p))`, and zero afterwards.
pub fn lemma1_envelope(v0: f64, k: f64, exponent: f64, t: f64) -> Result<f64> {
    if !(v0 >= 0.0 && v0.is_finite()) || !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidArgument(format!("envelope needs V0 >= 0 and K > 0, got {v0}, {k}")));
    }
    if !(exponent > 0.0 && exponent < 1.0) {
        return Err(Error::InvalidArgument(format!("envelope exponent must lie in (0, 1), got {exponent}")));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("envelope time must be >= 0, got {t}")));
    }
    let q = 1.0 - exponent;
    let base = v0.powf(q) - k * q * t;
    Ok(if base > 0.0 { base.powf(1.0 / q) } else { 0.0 })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

struct Field<'a> {
    obj: &'a dyn Objective,
    gamma: PowerCoefficient,
    flow: Flow,
}

impl Field<'_> {
    fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.obj.gradient(x)?;
        let s = power_sign_vec(&g, self.gamma)?;
        let d = match self.flow {
            Flow::Gradient => s,
            Flow::Newton => {
                if s.iter().all(|&v| v == 0.0) {
                    s
                } else {
                    damped_newton_direction(&self.obj.hessian(x)?, &s, &g)?
                }
            }
        };
        Ok(d.into_iter().map(|v| -v).collect())
    }

    fn rk4(&self, x: &[f64], h: f64) -> Result<Vec<f64>> {
        let shift = |k: &[f64], c: f64| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + c * b).collect() };
        let k1 = self.eval(x)?;
        let k2 = self.eval(&shift(&k1, 0.5 * h))?;
        let k3 = self.eval(&shift(&k2, 0.5 * h))?;
        let k4 = self.eval(&shift(&k3, h))?;
        Ok((0..x.len()).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect())
    }
}

fn integrate(
    obj: &dyn Objective,
    x0: &[f64],
    gamma: PowerCoefficient,
    opts: &OdeOptions,
    flow: Flow,
) -> Result<OdeTrajectory> {
    check_dim(obj.dimension(), x0.len())?;
    if !(opts.ode_tol >= 0.0) || !(opts.h_max > 0.0) {
        return Err(Error::InvalidArgument("ode_tol must be >= 0 and h_max > 0".into()));
    }
    if flow == Flow::Newton {
        obj.hessian(x0)?;
    }
    let g0 = obj.gradient(x0)?;
    if let Some(index) = g0.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index, value: g0[index] });
    }
    let v0 = lyapunov_v(&g0, gamma)?;
    let bound_t = if gamma.is_interior() {
        match flow {
            Flow::Gradient => obj.convexity_bounds().map(|b| gradient_flow_bound(v0, gamma, b.m)).transpose()?,
            Flow::Newton => Some(newton_flow_bound(v0, gamma)?),
        }
    } else {
        None
    };
    let t_end = match opts.t_end {
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(t) => return Err(Error::InvalidArgument(format!("t_end must be positive, got {t}"))),
        None => match bound_t {
            Some(b) if b > 0.0 => 2.0 * b,
            Some(_) => 0.0,
            None => return Err(Error::InvalidArgument("t_end is required when no arrival bound applies".into())),
        },
    };

    let field = Field { obj, gamma, flow };
    let mut traj = OdeTrajectory { flow, gamma, samples: Vec::new(), t_zero: None, bound_t, failure: None };
    let mut x = x0.to_vec();
    let mut t = 0.0;
    let mut grad_norm = norm(&g0);
    traj.samples.push(OdeSample { t, x: x.clone(), v: v0, grad_norm });
    if grad_norm <= opts.ode_tol {
        traj.t_zero = Some(0.0);
        return Ok(traj);
    }

    let exponent = 1.0 - gamma.value();
    for _ in 0..MAX_STEPS {
        if t >= t_end {
            return Ok(traj);
        }
        let h = (0.01 * (grad_norm.powf(exponent) + 1e-6)).min(opts.h_max).min(t_end - t);
        let next = match field.rk4(&x, h) {
            Ok(x) => x,
            Err(e @ (Error::Numerical(_) | Error::NonFinite { .. })) => {
                traj.failure = Some(e.to_string());
                return Ok(traj);
            }
            Err(e) => return Err(e),
        };
        let g = obj.gradient(&next)?;
        if next.iter().chain(&g).any(|v| !v.is_finite()) {
            traj.failure = Some(format!("non-finite state at t = {t}"));
            return Ok(traj);
        }
        x = next;
        t = if h == t_end - t { t_end } else { t + h };
        grad_norm = norm(&g);
        traj.samples.push(OdeSample { t, x: x.clone(), v: lyapunov_v(&g, gamma)?, grad_norm });
        if grad_norm <= opts.ode_tol {
            traj.t_zero = Some(t);
            return Ok(traj);
        }
    }
    traj.failure = Some(format!("step budget of {MAX_STEPS} exhausted at t = {t}"));
    Ok(traj)
}

/// Integrates `ẋ = −σ_γ(∇f(x))` from `x0`.
///
/// The step is `min(h_max, 0.01(‖∇f‖^{1−γ} + 1e-6))`, which shrinks with the
/// distance to equilibrium where the field stops being Lipschitz. The arrival
/// bound is set when `0 < γ < 1` and the objective reports `m`.
pub fn integrate_gradient_flow(
    obj: &dyn Objective,
    x0: &[f64],
    gamma: PowerCoefficient,
    opts: &OdeOptions,
) -> Result<OdeTrajectory> {
    integrate(obj, x0, gamma, opts, Flow::Gradient)
}

/// Integrates `ẋ = −(∇²f(x))⁻¹ σ_γ(∇f(x))` from `x0`, with the same damping
/// as the discrete Newton method.
pub fn integrate_newton_flow(
    obj: &dyn Objective,
    x0: &[f64],
    gamma: PowerCoefficient,
    opts: &OdeOptions,
) -> Result<OdeTrajectory> {
    integrate(obj, x0, gamma, opts, Flow::Newton)
}
