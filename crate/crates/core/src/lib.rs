//! Optimization with power-transformed gradients.
//!
//! The central operation is the element-wise transform
//! `σ_γ(z) = sign(z)|z|^γ`, `γ ∈ [0, 1]`, applied to the gradient before each
//! update. This crate provides:
//!
//! * [`transform`]: the transform and its Lyapunov quantities
//! * [`objectives`]: quadratics and ℓ2-regularized logistic regression
//! * [`optim`]: gradient, one-bit, Newton and L-BFGS Powerball methods
//! * [`ode`]: the continuous-time flows and their finite-time arrival bounds
//! * [`data`]: LIBSVM I/O, synthetic datasets, CSV export
//! * [`experiment`]: replicated runs and γ-sweeps
//!
//! ```
//! use powerball::objectives::QuadraticObjective;
//! use powerball::optim::{gradient_powerball, OptimizerConfig, StepPolicy};
//! use powerball::PowerCoefficient;
//!
//! let f = QuadraticObjective::diagonal(vec![1.0, 10.0], vec![1.0, 1.0]).unwrap();
//! let cfg = OptimizerConfig {
//!     gamma: PowerCoefficient::new(0.5).unwrap(),
//!     step: StepPolicy::Theorem1 { lipschitz: 10.0 },
//!     max_iters: 1000,
//!     ..Default::default()
//! };
//! let trace = gradient_powerball(&f, &[0.0, 0.0], &cfg).unwrap();
//! assert!(trace.records.last().unwrap().grad_norm <= 1e-8);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod error;
pub mod experiment;
pub mod objectives;
pub mod ode;
pub mod optim;
pub mod transform;

pub use data::SparseDataset;
pub use error::{Error, Result};
pub use experiment::Method;
pub use objectives::{ConvexityBounds, LogisticRegressionObjective, Objective, QuadraticObjective};
pub use ode::{OdeOptions, OdeTrajectory};
pub use optim::{IterationTrace, OptimizerConfig, StepPolicy, Termination};
pub use transform::PowerCoefficient;
