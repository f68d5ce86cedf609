//! Parsing of the `--objective` and `--step` descriptors.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

use powerball::data::{generate_synthetic, read_libsvm};
use powerball::optim::Backtracking;
use powerball::{LogisticRegressionObjective, Objective, QuadraticObjective, StepPolicy};

use crate::CliError;

/// Which objective to build.
#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveSpec {
    /// ℓ2-regularized logistic loss over a LIBSVM file.
    Logistic(PathBuf),
    /// `½xᵀ diag(linspace(m, L, n)) x`.
    Quadratic { n: usize, m: f64, l: f64 },
    /// Logistic loss over a generated dataset.
    Synthetic { n: usize, d: usize, nnz: usize },
}

fn field<T: FromStr>(s: &str, what: &str, descriptor: &str) -> Result<T, CliError> {
    s.parse().map_err(|_| CliError::Usage(format!("bad {what} {s:?} in {descriptor:?}")))
}

impl FromStr for ObjectiveSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        if kind == "logistic" && !rest.is_empty() {
            return Ok(ObjectiveSpec::Logistic(PathBuf::from(rest)));
        }
        match (kind, rest.split(':').collect::<Vec<_>>().as_slice()) {
            ("quadratic", [n, m, l]) => Ok(ObjectiveSpec::Quadratic {
                n: field(n, "dimension", s)?,
                m: field(m, "m", s)?,
                l: field(l, "L", s)?,
            }),
            ("synthetic", [n, d, nnz]) => Ok(ObjectiveSpec::Synthetic {
                n: field(n, "example count", s)?,
                d: field(d, "feature count", s)?,
                nnz: field(nnz, "nnz", s)?,
            }),
            _ => Err(CliError::Usage(format!(
                "unrecognized objective {s:?}; expected logistic:<path>, quadratic:<n>:<m>:<L> or synthetic:<n>:<d>:<nnz>"
            ))),
        }
    }
}

impl ObjectiveSpec {
    /// Builds the objective. `lambda` applies to the logistic variants and
    /// `data_seed` to the synthetic one.
    pub fn build(&self, lambda: f64, data_seed: u64) -> Result<Box<dyn Objective>, CliError> {
        match *self {
            ObjectiveSpec::Logistic(ref path) => {
                let file =
                    File::open(path).map_err(|e| CliError::Usage(format!("cannot open {}: {e}", path.display())))?;
                let data = read_libsvm(BufReader::new(file), None)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                Ok(Box::new(LogisticRegressionObjective::new(data, lambda)?))
            }
            ObjectiveSpec::Quadratic { n, m, l } => {
                if n == 0 || !(m > 0.0) || !(l >= m) || !l.is_finite() {
                    return Err(CliError::Usage(format!(
                        "quadratic needs n >= 1 and 0 < m <= L, got n={n}, m={m}, L={l}"
                    )));
                }
                let diag = (0..n).map(|i| if n == 1 { m } else { m + (l - m) * i as f64 / (n - 1) as f64 }).collect();
                Ok(Box::new(QuadraticObjective::diagonal(diag, vec![0.0; n])?))
            }
            ObjectiveSpec::Synthetic { n, d, nnz } => {
                let (data, _) = generate_synthetic(n, d, nnz, data_seed)?;
                Ok(Box::new(LogisticRegressionObjective::new(data, lambda)?))
            }
        }
    }
}

/// Step descriptor as given on the command line. `theorem1:auto` is resolved
/// against the objective's convexity bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSpec {
    Policy(StepPolicy),
    Theorem1Auto,
}

impl FromStr for StepSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let policy = match (kind, arg) {
            ("fixed", Some(a)) => StepPolicy::Fixed(field(a, "step", s)?),
            ("theorem1", Some("auto")) => return Ok(StepSpec::Theorem1Auto),
            ("theorem1", Some(l)) => StepPolicy::Theorem1 { lipschitz: field(l, "Lipschitz constant", s)? },
            ("backtracking", None) => StepPolicy::Backtracking(Backtracking::default()),
            ("backtracking", Some(a)) => match a.split(',').collect::<Vec<_>>().as_slice() {
                [a0, shrink, c] => StepPolicy::Backtracking(Backtracking {
                    alpha0: field(a0, "alpha0", s)?,
                    shrink: field(shrink, "shrink", s)?,
                    c: field(c, "c", s)?,
                }),
                _ => return Err(CliError::Usage(format!("backtracking takes <a0>,<shrink>,<c>, got {s:?}"))),
            },
            _ => {
                return Err(CliError::Usage(format!(
                    "unrecognized step {s:?}; expected fixed:<a>, theorem1:<L>, theorem1:auto or backtracking[:<a0>,<shrink>,<c>]"
                )))
            }
        };
        policy.validate()?;
        Ok(StepSpec::Policy(policy))
    }
}

impl StepSpec {
    pub fn resolve(self, obj: &dyn Objective) -> Result<StepPolicy, CliError> {
        match self {
            StepSpec::Policy(p) => Ok(p),
            StepSpec::Theorem1Auto => {
                let bounds = obj.convexity_bounds().ok_or_else(|| {
                    CliError::Usage("theorem1:auto needs an objective with known convexity bounds".into())
                })?;
                Ok(StepPolicy::Theorem1 { lipschitz: bounds.l })
            }
        }
    }
}

/// Comma-separated reals; a single value is broadcast to `dim` coordinates.
pub fn parse_point(s: &str, dim: usize) -> Result<Vec<f64>, CliError> {
    let v = s.split(',').map(|t| field::<f64>(t.trim(), "coordinate", s)).collect::<Result<Vec<_>, _>>()?;
    match v.len() {
        1 => Ok(vec![v[0]; dim]),
        n if n == dim => Ok(v),
        n => Err(CliError::Usage(format!("point has {n} coordinates, objective has {dim}"))),
    }
}
