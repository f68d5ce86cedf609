use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use powerball::data::{generate_synthetic, write_libsvm, write_mean_curve_csv, write_sweep_csv, write_trace_csv};
use powerball::experiment::{mean_objective_curve, run_replicates};
use powerball::ode::{integrate_gradient_flow, integrate_newton_flow};
use powerball::{
    Error, IterationTrace, Method, Objective, OdeOptions, OdeTrajectory, OptimizerConfig, PowerCoefficient, StepPolicy,
    Termination,
};

use crate::{parse_point, CliError, GenDataArgs, OdeArgs, OptimArgs, RunArgs, SweepArgs};

/// Slack on `t_zero ≤ bound_T` allowed for integration error.
pub const BOUND_SLACK: f64 = 0.05;

/// End time used when no arrival bound applies and `--t-end` is absent.
pub const DEFAULT_PLAIN_T_END: f64 = 10.0;

fn output_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Output { path: path.to_path_buf(), source }
}

/// Writes `path` through `fill`, removing the file again if anything fails.
fn write_file<F>(path: &Path, fill: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<File>) -> powerball::Result<()>,
{
    let file = File::create(path).map_err(output_error(path))?;
    let mut w = BufWriter::new(file);
    let res = fill(&mut w).and_then(|_| w.flush().map_err(Error::from));
    if let Err(e) = res {
        drop(w);
        let _ = fs::remove_file(path);
        return Err(match e {
            Error::Io(source) => CliError::Output { path: path.to_path_buf(), source },
            other => other.into(),
        });
    }
    Ok(())
}

fn optimizer_config(
    obj: &dyn Objective,
    args: &OptimArgs,
    gamma: PowerCoefficient,
) -> Result<OptimizerConfig, CliError> {
    let step = match args.step {
        Some(s) => s.resolve(obj)?,
        None if args.method == Method::NewtonPowerball => StepPolicy::Fixed(1.0),
        None => StepPolicy::default(),
    };
    let cfg = OptimizerConfig {
        gamma,
        step,
        max_iters: args.max_iters,
        grad_tol: args.grad_tol,
        memory: args.memory,
        seed: args.seed,
        record_iterates: false,
    };
    cfg.validate()?;
    if args.replicates == 0 {
        return Err(CliError::Usage("--replicates must be at least 1".into()));
    }
    Ok(cfg)
}

fn numerical_failure(traces: &[IterationTrace]) -> Option<String> {
    traces.iter().enumerate().find_map(|(r, t)| {
        (t.terminated_by == Termination::NumericalError)
            .then(|| format!("replicate {r}: {}", t.message.as_deref().unwrap_or("unknown cause")))
    })
}

fn report(method: Method, gamma: f64, traces: &[IterationTrace], curve: &[f64]) {
    let mut terminations: Vec<&str> = traces.iter().map(|t| t.terminated_by.as_str()).collect();
    terminations.sort_unstable();
    terminations.dedup();
    println!(
        "{method} gamma={gamma}: {} iterations, mean final objective {:.10e}, terminated by {}",
        curve.len().saturating_sub(1),
        curve.last().copied().unwrap_or(f64::NAN),
        terminations.join("/")
    );
}

pub fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    let obj = args.problem.objective.build(args.problem.lambda, args.problem.data_seed)?;
    let gamma = PowerCoefficient::new(args.gamma)?;
    let cfg = optimizer_config(&*obj, &args.optim, gamma)?;
    let traces = run_replicates(args.optim.method, &*obj, &cfg, args.optim.replicates)?;
    let curve = mean_objective_curve(&traces);

    fs::create_dir_all(&args.out).map_err(output_error(&args.out))?;
    for (r, t) in traces.iter().enumerate() {
        write_file(&args.out.join(format!("replicate_{r:03}.csv")), |w| write_trace_csv(t, w))?;
    }
    write_file(&args.out.join("summary.csv"), |w| write_mean_curve_csv(&curve, w))?;
    report(args.optim.method, gamma.value(), &traces, &curve);

    match numerical_failure(&traces) {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    if args.gammas.is_empty() {
        return Err(CliError::Usage("--gammas is empty".into()));
    }
    let gammas = args.gammas.iter().map(|&g| PowerCoefficient::new(g)).collect::<Result<Vec<_>, _>>()?;
    let obj = args.problem.objective.build(args.problem.lambda, args.problem.data_seed)?;
    let configs = gammas.iter().map(|&g| optimizer_config(&*obj, &args.optim, g)).collect::<Result<Vec<_>, _>>()?;

    let mut curves = Vec::with_capacity(gammas.len());
    for (gamma, cfg) in gammas.iter().zip(&configs) {
        let traces = run_replicates(args.optim.method, &*obj, cfg, args.optim.replicates)?;
        if let Some(msg) = numerical_failure(&traces) {
            return Err(CliError::Numerical(format!("gamma={gamma}, {msg}")));
        }
        let curve = mean_objective_curve(&traces);
        report(args.optim.method, gamma.value(), &traces, &curve);
        curves.push((gamma.value(), curve));
    }
    write_file(&args.out, |w| write_sweep_csv(&curves, w))
}

struct FlowOutcome {
    name: &'static str,
    failed: bool,
    verdict: Option<bool>,
}

fn describe(name: &'static str, traj: &OdeTrajectory) -> FlowOutcome {
    let t_zero = traj.t_zero.map_or_else(|| "none".to_string(), |t| format!("{t:.6}"));
    let mut line = format!("{name}: t_zero={t_zero}");
    let verdict = traj.bound_t.map(|b| {
        let pass = traj.within_bound(BOUND_SLACK).unwrap_or(false);
        line.push_str(&format!(" bound_T={b:.6} {}", if pass { "PASS" } else { "FAIL" }));
        pass
    });
    if let Some(f) = &traj.failure {
        line.push_str(&format!(" integration failed: {f}"));
    }
    println!("{line}");
    FlowOutcome { name, failed: traj.failure.is_some(), verdict }
}

pub fn cmd_ode(args: &OdeArgs) -> Result<(), CliError> {
    let obj = args.problem.objective.build(args.problem.lambda, args.problem.data_seed)?;
    let gamma = PowerCoefficient::new(args.gamma)?;
    let x0 = parse_point(&args.x0, obj.dimension())?;
    if !gamma.is_interior() {
        eprintln!(
            "note: gamma = {gamma} is outside (0, 1), where the finite-time arrival estimates hold; \
             integrating without the bound check"
        );
    }
    let newton_ok = match obj.hessian(&x0) {
        Ok(_) => true,
        Err(Error::HessianUnavailable) => false,
        Err(e) => return Err(e.into()),
    };
    let options = |has_bound: bool| OdeOptions {
        t_end: args.t_end.or((!has_bound).then_some(DEFAULT_PLAIN_T_END)),
        ode_tol: args.tol,
        ..OdeOptions::default()
    };
    let interior = gamma.is_interior();

    let gradient = integrate_gradient_flow(&*obj, &x0, gamma, &options(interior && obj.convexity_bounds().is_some()))?;
    let newton = if newton_ok { Some(integrate_newton_flow(&*obj, &x0, gamma, &options(interior))?) } else { None };

    fs::create_dir_all(&args.out).map_err(output_error(&args.out))?;
    write_file(&args.out.join("gradient_flow.csv"), |w| write_trace_csv(&gradient, w))?;
    if let Some(n) = &newton {
        write_file(&args.out.join("newton_flow.csv"), |w| write_trace_csv(n, w))?;
    }

    let mut outcomes = vec![describe("gradient flow", &gradient)];
    match &newton {
        Some(n) => outcomes.push(describe("newton flow", n)),
        None => println!("newton flow: skipped, objective has no Hessian"),
    }
    if let Some(o) = outcomes.iter().find(|o| o.failed) {
        return Err(CliError::Numerical(format!("{} integration failed", o.name)));
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| o.verdict == Some(false)).map(|o| o.name).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::BoundCheckFailed(format!("arrival bound exceeded: {}", failed.join(", "))))
    }
}

pub fn cmd_gen_data(args: &GenDataArgs) -> Result<(), CliError> {
    let (data, _) = generate_synthetic(args.examples, args.features, args.nnz, args.seed)?;
    write_file(&args.out, |w| write_libsvm(&data, w))?;
    println!(
        "wrote {} examples, {} features, {} nonzeros to {}",
        data.n_examples(),
        data.n_features(),
        data.nnz(),
        args.out.display()
    );
    Ok(())
}
