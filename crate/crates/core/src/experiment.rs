//! Replicated runs and γ-sweeps.
//!
//! Replicate `r` starts from [`initial_point`] with seed `cfg.seed + r`, so
//! runs that share a seed share their starting points regardless of method or
//! γ.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::objectives::Objective;
use crate::optim::{
    gradient_powerball, initial_point, lbfgs_powerball, newton_powerball, one_bit_descent, IterationTrace,
    OptimizerConfig,
};
use crate::transform::PowerCoefficient;

/// The γ values of the standard sweep.
pub const DEFAULT_GAMMAS: [f64; 4] = [1.0, 0.7, 0.4, 0.1];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    GdPowerball,
    OneBit,
    NewtonPowerball,
    LbfgsPowerball,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::GdPowerball => "gd-powerball",
            Method::OneBit => "one-bit",
            Method::NewtonPowerball => "newton-powerball",
            Method::LbfgsPowerball => "lbfgs-powerball",
        }
    }

    pub fn run(self, obj: &dyn Objective, x0: &[f64], cfg: &OptimizerConfig) -> Result<IterationTrace> {
        match self {
            Method::GdPowerball => gradient_powerball(obj, x0, cfg),
            Method::OneBit => one_bit_descent(obj, x0, cfg),
            Method::NewtonPowerball => newton_powerball(obj, x0, cfg),
            Method::LbfgsPowerball => lbfgs_powerball(obj, x0, cfg),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Method::GdPowerball, Method::OneBit, Method::NewtonPowerball, Method::LbfgsPowerball]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

/// Runs `replicates` independent starts of `method`.
pub fn run_replicates(
    method: Method,
    obj: &dyn Objective,
    cfg: &OptimizerConfig,
    replicates: usize,
) -> Result<Vec<IterationTrace>> {
    if replicates == 0 {
        return Err(Error::InvalidConfig("at least one replicate is required".into()));
    }
    (0..replicates as u64)
        .map(|r| {
            let seed = cfg.seed.wrapping_add(r);
            let x0 = initial_point(obj.dimension(), seed);
            method.run(obj, &x0, &OptimizerConfig { seed, ..cfg.clone() })
        })
        .collect()
}

/// Arithmetic mean of the objective at each iteration index. A run that
/// stopped early contributes its final objective to later indices.
pub fn mean_objective_curve(traces: &[IterationTrace]) -> Vec<f64> {
    let len = traces.iter().map(|t| t.records.len()).max().unwrap_or(0);
    (0..len)
        .map(|k| {
            let sum: f64 =
                traces.iter().filter_map(|t| t.records.get(k).or(t.records.last())).map(|r| r.objective).sum();
            sum / traces.len() as f64
        })
        .collect()
}

/// Runs every γ in `gammas` with the same seeds and returns `(γ, mean curve)`
/// pairs in input order. All γ values are validated before any run starts.
pub fn sweep(
    method: Method,
    obj: &dyn Objective,
    cfg: &OptimizerConfig,
    gammas: &[f64],
    replicates: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    if gammas.is_empty() {
        return Err(Error::InvalidConfig("gamma list is empty".into()));
    }
    let coefficients = gammas.iter().map(|&g| PowerCoefficient::new(g)).collect::<Result<Vec<_>>>()?;
    coefficients
        .into_iter()
        .map(|gamma| {
            let traces = run_replicates(method, obj, &OptimizerConfig { gamma, ..cfg.clone() }, replicates)?;
            Ok((gamma.value(), mean_objective_curve(&traces)))
        })
        .collect()
}

/// First index at which `curve` is strictly below `target`.
pub fn first_crossing(curve: &[f64], target: f64) -> Option<usize> {
    curve.iter().position(|&v| v < target)
}
