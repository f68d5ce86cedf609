//! CSV export of optimizer traces, flow trajectories and averaged curves.
//!
//! Floats are written with 17 significant digits so they parse back to the
//! same `f64`. Output is UTF-8 with LF line endings.

use std::io::Write;

use crate::error::Result;
use crate::ode::OdeTrajectory;
use crate::optim::IterationTrace;

pub const ITERATION_HEADER: &str = "iter,objective,grad_norm,step_size,elapsed_ms";
pub const MEAN_CURVE_HEADER: &str = "iter,mean_objective";
pub const SWEEP_HEADER: &str = "gamma,iter,mean_objective";

/// Formats `v` with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Anything that can be exported by [`write_trace_csv`].
pub trait CsvTrace {
    fn write_csv(&self, sink: &mut dyn Write) -> Result<()>;
}

impl CsvTrace for IterationTrace {
    fn write_csv(&self, sink: &mut dyn Write) -> Result<()> {
        writeln!(sink, "{ITERATION_HEADER}")?;
        for r in &self.records {
            writeln!(
                sink,
                "{},{},{},{},{}",
                r.iter,
                fmt_f64(r.objective),
                fmt_f64(r.grad_norm),
                fmt_f64(r.step_size),
                fmt_f64(r.elapsed.as_secs_f64() * 1e3)
            )?;
        }
        Ok(())
    }
}

impl CsvTrace for OdeTrajectory {
    fn write_csv(&self, sink: &mut dyn Write) -> Result<()> {
        let n = self.samples.first().map_or(0, |s| s.x.len());
        let mut header = String::from("t,V,grad_norm");
        for i in 1..=n {
            header.push_str(&format!(",x_{i}"));
        }
        writeln!(sink, "{header}")?;
        for s in &self.samples {
            let mut line = format!("{},{},{}", fmt_f64(s.t), fmt_f64(s.v), fmt_f64(s.grad_norm));
            for &xi in &s.x {
                line.push(',');
                line.push_str(&fmt_f64(xi));
            }
            writeln!(sink, "{line}")?;
        }
        Ok(())
    }
}

pub fn write_trace_csv<T: CsvTrace + ?Sized, W: Write>(trace: &T, mut sink: W) -> Result<()> {
    trace.write_csv(&mut sink)?;
    sink.flush()?;
    Ok(())
}

/// `iter,mean_objective` rows.
pub fn write_mean_curve_csv<W: Write>(curve: &[f64], mut sink: W) -> Result<()> {
    writeln!(sink, "{MEAN_CURVE_HEADER}")?;
    for (k, v) in curve.iter().enumerate() {
        writeln!(sink, "{k},{}", fmt_f64(*v))?;
    }
    sink.flush()?;
    Ok(())
}

/// `gamma,iter,mean_objective` rows, one group per `(gamma, curve)`.
pub fn write_sweep_csv<W: Write>(curves: &[(f64, Vec<f64>)], mut sink: W) -> Result<()> {
    writeln!(sink, "{SWEEP_HEADER}")?;
    for (gamma, curve) in curves {
        for (k, v) in curve.iter().enumerate() {
            writeln!(sink, "{gamma},{k},{}", fmt_f64(*v))?;
        }
    }
    sink.flush()?;
    Ok(())
}
