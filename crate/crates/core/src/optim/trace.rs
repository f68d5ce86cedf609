use std::time::Duration;

/// One iterate of an optimizer run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub objective: f64,
    pub grad_norm: f64,
    /// Step size that produced this iterate (0 for the starting point).
    pub step_size: f64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradTol,
    MaxIters,
    LineSearchFailure,
    NumericalError,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::GradTol => "grad_tol",
            Termination::MaxIters => "max_iters",
            Termination::LineSearchFailure => "line_search_failure",
            Termination::NumericalError => "numerical_error",
        }
    }
}

/// Output of every optimizer.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
    pub terminated_by: Termination,
    /// Last finite iterate.
    pub x: Vec<f64>,
    /// Every iterate, populated only when `record_iterates` is set.
    pub iterates: Vec<Vec<f64>>,
    /// Diagnostic attached to abnormal termination.
    pub message: Option<String>,
}

impl IterationTrace {
    pub fn final_objective(&self) -> Option<f64> {
        self.records.last().map(|r| r.objective)
    }

    pub fn objectives(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.objective).collect()
    }

    /// Exact equality of everything except wall-clock times.
    pub fn same_path(&self, other: &IterationTrace) -> bool {
        self.terminated_by == other.terminated_by
            && self.x == other.x
            && self.iterates == other.iterates
            && self.records.len() == other.records.len()
            && self.records.iter().zip(&other.records).all(|(a, b)| {
                a.iter == b.iter
                    && a.objective == b.objective
                    && a.grad_norm == b.grad_norm
                    && a.step_size == b.step_size
            })
    }
}
