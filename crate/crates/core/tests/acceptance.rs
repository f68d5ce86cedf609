//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion and then asserts it. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use powerball::data::{generate_synthetic, read_libsvm, write_libsvm, write_sweep_csv};
use powerball::experiment::{first_crossing, sweep, Method, DEFAULT_GAMMAS};
use powerball::objectives::QuadraticObjective;
use powerball::ode::{
    envelope_exponent, envelope_rate, gradient_flow_bound, integrate_gradient_flow, integrate_newton_flow,
    lemma1_envelope, OdeTrajectory,
};
use powerball::optim::{
    backtracking_line_search, gradient_powerball, lbfgs_powerball, lbfgs_two_loop, one_bit_descent, Backtracking,
    CurvaturePair, IterationTrace, OptimizerConfig, StepPolicy,
};
use powerball::transform::{inner_power, power_sign_vec};
use powerball::{LogisticRegressionObjective, Objective, OdeOptions, PowerCoefficient, SparseDataset};

const GAMMAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn pc(g: f64) -> PowerCoefficient {
    PowerCoefficient::new(g).unwrap()
}

/// Writes a line to the process stdout, past the test harness's capture.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

/// Prints the verdict line, then fails the test on a violated criterion or a
/// blown time budget.
fn verdict(id: u32, title: &str, start: Instant, budget: Option<Duration>, outcome: Result<String, String>) {
    let elapsed = start.elapsed();
    let outcome = match (outcome, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
        (o, _) => o,
    };
    match &outcome {
        Ok(detail) => emit(&format!("PASS criterion {id:>2}: {title} [{detail}; {elapsed:.2?}]")),
        Err(detail) => emit(&format!("FAIL criterion {id:>2}: {title} [{detail}; {elapsed:.2?}]")),
    }
    if let Err(detail) = outcome {
        panic!("criterion {id} failed: {detail}");
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normal_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// `U diag(λ) Uᵀ` with `U` from the QR factorization of a Gaussian matrix and
/// `λ` uniform on `[lo, hi]`.
fn random_spd(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let u = a.qr().q();
    let lambda = DVector::from_fn(n, |_, _| rng.random_range(lo..=hi));
    let m = &u * DMatrix::from_diagonal(&lambda) * u.transpose();
    (&m + m.transpose()) * 0.5
}

/// Random strongly convex quadratic with eigenvalues in `[0.5, 10]`, plus a
/// starting point.
fn random_quadratic(rng: &mut ChaCha8Rng, max_n: usize) -> (QuadraticObjective, Vec<f64>) {
    let n = rng.random_range(1..=max_n);
    let q = random_spd(rng, n, 0.5, 10.0);
    let b = normal_vec(rng, n, 1.0);
    let obj = QuadraticObjective::dense(q, b).unwrap();
    let x0: Vec<f64> = obj.minimizer().iter().zip(normal_vec(rng, n, 1.0)).map(|(a, e)| a + e).collect();
    (obj, x0)
}

#[test]
fn criterion_01_linear_rate_under_explicit_step() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut checked = 0usize;
    let mut outcome = Ok(());
    'outer: for instance in 0..100 {
        let (obj, x0) = random_quadratic(&mut rng, 8);
        let n = obj.dimension() as f64;
        let b = obj.convexity_bounds().unwrap();
        let rate = 1.0 - b.m / (n * b.l);
        for &g in &GAMMAS {
            let cfg = OptimizerConfig {
                gamma: pc(g),
                step: StepPolicy::Theorem1 { lipschitz: b.l },
                max_iters: 200,
                record_iterates: true,
                ..Default::default()
            };
            let trace = gradient_powerball(&obj, &x0, &cfg).unwrap();
            let gaps: Vec<f64> = trace.iterates.iter().map(|x| obj.suboptimality(x).unwrap()).collect();
            for (k, w) in gaps.windows(2).enumerate() {
                let ratio = w[1] / w[0];
                worst_excess = worst_excess.max(ratio - rate);
                checked += 1;
                if ratio > rate + 1e-10 {
                    outcome =
                        Err(format!("instance {instance}, gamma {g}, step {k}: ratio {ratio} exceeds {rate} + 1e-10"));
                    break 'outer;
                }
            }
        }
    }
    verdict(
        1,
        "per-step contraction 1 - m/(nL) on 100 random quadratics",
        start,
        Some(Duration::from_secs(5)),
        outcome.map(|_| format!("{checked} ratios, max ratio - bound = {worst_excess:.3e}")),
    );
}

fn ode_opts() -> OdeOptions {
    OdeOptions { ode_tol: 1e-6, ..Default::default() }
}

/// The quadratic suite shared by the flow criteria: 50 instances with
/// `n ≤ 6`, each paired with every γ in `{0.25, 0.5, 0.75}`.
fn flow_suite() -> Vec<(QuadraticObjective, Vec<f64>, PowerCoefficient)> {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut suite = Vec::new();
    for _ in 0..50 {
        let (obj, x0) = random_quadratic(&mut rng, 6);
        for g in [0.25, 0.5, 0.75] {
            suite.push((obj.clone(), x0.clone(), pc(g)));
        }
    }
    suite
}

fn check_arrival(trajectories: &[OdeTrajectory]) -> Result<String, String> {
    let mut worst = 0.0f64;
    for (i, t) in trajectories.iter().enumerate() {
        if let Some(f) = &t.failure {
            return Err(format!("instance {i}: integration failed: {f}"));
        }
        let bound = t.bound_t.ok_or_else(|| format!("instance {i}: no bound"))?;
        let t_zero = t.t_zero.ok_or_else(|| format!("instance {i}: never reached tolerance by {}", 2.0 * bound))?;
        worst = worst.max(t_zero / bound);
        if t_zero > 1.05 * bound {
            return Err(format!("instance {i}: t_zero {t_zero} > 1.05 * {bound}"));
        }
    }
    Ok(format!("{} trajectories, max t_zero/bound_T = {worst:.4}", trajectories.len()))
}

#[test]
fn criterion_02_gradient_flow_arrival_bound() {
    let start = Instant::now();
    let outcome = (|| {
        let half_square = QuadraticObjective::diagonal(vec![1.0], vec![0.0]).unwrap();
        let t = integrate_gradient_flow(&half_square, &[1.0], pc(0.5), &ode_opts()).map_err(|e| e.to_string())?;
        let bound = t.bound_t.ok_or("no bound")?;
        // V0 = |1|^{1.5}/1.5; ((1.5 V0)^{1/3}) / (1 · 0.5) = 2
        let formula = gradient_flow_bound(1.0 / 1.5, pc(0.5), 1.0).map_err(|e| e.to_string())?;
        if ((formula - 2.0) / 2.0).abs() > 1e-12 || ((bound - 2.0) / 2.0).abs() > 1e-12 {
            return Err(format!("bound {bound} / formula {formula}, expected 2"));
        }
        let t_zero = t.t_zero.ok_or("half-square flow never arrived")?;
        if !(1.9..=2.1).contains(&t_zero) {
            return Err(format!("half-square t_zero {t_zero} outside [1.9, 2.1]"));
        }
        let suite: Vec<OdeTrajectory> = flow_suite()
            .iter()
            .map(|(obj, x0, g)| integrate_gradient_flow(obj, x0, *g, &ode_opts()))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        check_arrival(&suite).map(|s| format!("half-square t_zero = {t_zero:.6}, bound_T = {bound}; {s}"))
    })();
    verdict(2, "gradient flow arrives before its bound", start, Some(Duration::from_secs(30)), outcome);
}

#[test]
fn criterion_03_newton_flow_arrival_bound() {
    let start = Instant::now();
    let outcome = flow_suite()
        .iter()
        .map(|(obj, x0, g)| integrate_newton_flow(obj, x0, *g, &ode_opts()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())
        .and_then(|suite| check_arrival(&suite));
    verdict(3, "Newton flow arrives before its m-free bound", start, Some(Duration::from_secs(30)), outcome);
}

#[test]
fn criterion_04_lyapunov_envelope() {
    let start = Instant::now();
    let outcome = (|| {
        let mut samples = 0usize;
        let mut worst = f64::NEG_INFINITY;
        for (i, (obj, x0, g)) in flow_suite().iter().enumerate() {
            let m = obj.convexity_bounds().unwrap().m;
            let p = envelope_exponent(*g);
            for (flow, k) in [("gradient", envelope_rate(m, *g)), ("newton", envelope_rate(1.0, *g))] {
                let t = if flow == "gradient" {
                    integrate_gradient_flow(obj, x0, *g, &ode_opts())
                } else {
                    integrate_newton_flow(obj, x0, *g, &ode_opts())
                }
                .map_err(|e| e.to_string())?;
                let v0 = t.v0();
                for s in &t.samples {
                    let env = lemma1_envelope(v0, k, p, s.t).map_err(|e| e.to_string())?;
                    worst = worst.max(s.v - env);
                    samples += 1;
                    if s.v > env + 1e-5 {
                        return Err(format!("{flow} flow, instance {i}, t = {}: V = {} > {env} + 1e-5", s.t, s.v));
                    }
                }
            }
        }
        Ok(format!("{samples} samples, max V - envelope = {worst:.3e}"))
    })();
    verdict(4, "Lyapunov value stays under the comparison envelope", start, None, outcome);
}

#[test]
fn criterion_05_chebyshev_chain() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut outcome = Ok(());
    let mut tightest = f64::INFINITY;
    // Equality holds when all |yᵢ| coincide (always for n = 1), so both
    // sides are compared with a few ulps of relative slack.
    let slack = 1e-12;
    'outer: for trial in 0..1000 {
        let n = rng.random_range(1..=16);
        let scale = 10f64.powf(rng.random_range(-3.0..3.0));
        let y = normal_vec(&mut rng, n, scale);
        for &g in &GAMMAS {
            let nf = n as f64;
            let s_g1: f64 = y.iter().map(|v| v.abs().powf(g + 1.0)).sum();
            let s_2g: f64 = y.iter().map(|v| v.abs().powf(2.0 * g)).sum();
            let s_2: f64 = y.iter().map(|v| v * v).sum();
            let lhs = nf * s_g1 * s_g1;
            let rhs = s_2g * s_2;
            let ip = inner_power(&y, pc(g)).unwrap();
            let sigma = power_sign_vec(&y, pc(g)).unwrap();
            let lhs2 = ip * ip / dot(&sigma, &sigma);
            let rhs2 = s_2 / nf;
            tightest = tightest.min(lhs / rhs).min(lhs2 / rhs2);
            if lhs < rhs * (1.0 - slack) || lhs2 < rhs2 * (1.0 - slack) {
                outcome = Err(format!("trial {trial}, gamma {g}: {lhs} vs {rhs}, {lhs2} vs {rhs2}"));
                break 'outer;
            }
        }
    }
    verdict(
        5,
        "sum inequality and its step-size consequence",
        start,
        None,
        outcome.map(|_| format!("5000 checks, smallest lhs/rhs = {tightest:.15}")),
    );
}

/// Gradient descent written without the transform.
fn reference_gradient_descent(
    obj: &dyn Objective,
    x0: &[f64],
    iters: usize,
    ls: &Backtracking,
) -> Vec<(f64, f64, f64, Vec<f64>)> {
    reference_quasi_newton(obj, x0, iters, ls, 0)
}

fn reference_armijo(obj: &dyn Objective, x: &[f64], fx: f64, d: &[f64], g: &[f64], ls: &Backtracking) -> Option<f64> {
    let slope: f64 = g.iter().zip(d).map(|(a, b)| a * b).sum();
    let mut alpha = ls.alpha0;
    while alpha >= 1e-16 {
        let trial: Vec<f64> = x.iter().zip(d).map(|(xi, di)| xi - alpha * di).collect();
        let moved = trial.iter().zip(x).any(|(t, xi)| t != xi);
        let ft = obj.value(&trial).unwrap();
        if moved && ft.is_finite() && ft <= fx - ls.c * alpha * slope {
            return Some(alpha);
        }
        alpha *= ls.shrink;
    }
    None
}

/// Standard L-BFGS (two-loop recursion on the raw gradient); `memory = 0`
/// gives gradient descent. Returns `(f, ‖g‖, α, x)` per iterate.
fn reference_quasi_newton(
    obj: &dyn Objective,
    x0: &[f64],
    iters: usize,
    ls: &Backtracking,
    memory: usize,
) -> Vec<(f64, f64, f64, Vec<f64>)> {
    let mut hist: Vec<(Vec<f64>, Vec<f64>, f64)> = Vec::new();
    let mut x = x0.to_vec();
    let (mut f, mut g) = obj.value_and_gradient(&x).unwrap();
    let mut out = vec![(f, norm(&g), 0.0, x.clone())];
    for _ in 0..iters {
        let mut q = g.clone();
        let mut alphas = vec![0.0; hist.len()];
        for (i, (s, y, rho)) in hist.iter().enumerate().rev() {
            alphas[i] = rho * dot(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= alphas[i] * yi;
            }
        }
        let scale = hist.last().map_or(1.0, |(s, y, _)| dot(s, y) / dot(y, y));
        let mut d: Vec<f64> = q.iter().map(|v| scale * v).collect();
        for ((s, y, rho), a) in hist.iter().zip(&alphas) {
            let b = rho * dot(y, &d);
            for (di, si) in d.iter_mut().zip(s) {
                *di += si * (a - b);
            }
        }
        if !(dot(&g, &d) > 0.0) {
            d = g.clone();
        }
        let Some(alpha) = reference_armijo(obj, &x, f, &d, &g, ls) else { break };
        let xn: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi - alpha * di).collect();
        let (fn_, gn) = obj.value_and_gradient(&xn).unwrap();
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if memory > 0 && sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if hist.len() == memory {
                hist.remove(0);
            }
            hist.push((s, y, 1.0 / sy));
        }
        (x, f, g) = (xn, fn_, gn);
        out.push((f, norm(&g), alpha, x.clone()));
    }
    out
}

fn flatten(t: &IterationTrace) -> Vec<(f64, f64, f64, Vec<f64>)> {
    t.records.iter().zip(&t.iterates).map(|(r, x)| (r.objective, r.grad_norm, r.step_size, x.clone())).collect()
}

#[test]
fn criterion_06_reduction_equivalences() {
    let start = Instant::now();
    let outcome = (|| {
        let (data, _) = generate_synthetic(2000, 100, 10, 606).map_err(|e| e.to_string())?;
        let obj = LogisticRegressionObjective::new(data, 1e-3).map_err(|e| e.to_string())?;
        let x0 = powerball::optim::initial_point(obj.dimension(), 6);
        let ls = Backtracking::default();
        let cfg = |g: f64, memory: usize| OptimizerConfig {
            gamma: pc(g),
            max_iters: 50,
            grad_tol: f64::MIN_POSITIVE,
            memory,
            record_iterates: true,
            ..Default::default()
        };
        let full = |t: &IterationTrace, what: &str| {
            if t.records.len() == 51 {
                Ok(())
            } else {
                Err(format!("{what} stopped after {} records", t.records.len()))
            }
        };

        let gd = gradient_powerball(&obj, &x0, &cfg(1.0, 5)).map_err(|e| e.to_string())?;
        full(&gd, "gradient")?;
        if flatten(&gd) != reference_gradient_descent(&obj, &x0, 50, &ls) {
            return Err("gamma = 1 gradient method differs from gradient descent".into());
        }

        let lb = lbfgs_powerball(&obj, &x0, &cfg(1.0, 5)).map_err(|e| e.to_string())?;
        full(&lb, "L-BFGS")?;
        if flatten(&lb) != reference_quasi_newton(&obj, &x0, 50, &ls, 5) {
            return Err("gamma = 1 L-BFGS method differs from standard L-BFGS".into());
        }

        let sign = gradient_powerball(&obj, &x0, &cfg(0.0, 5)).map_err(|e| e.to_string())?;
        let one_bit = one_bit_descent(&obj, &x0, &cfg(0.7, 5)).map_err(|e| e.to_string())?;
        if !sign.same_path(&one_bit) || sign.records.len() < 2 {
            return Err("gamma = 0 gradient method differs from one-bit descent".into());
        }

        for g in [0.0, 0.4, 1.0] {
            let a = lbfgs_powerball(&obj, &x0, &cfg(g, 0)).map_err(|e| e.to_string())?;
            let b = gradient_powerball(&obj, &x0, &cfg(g, 5)).map_err(|e| e.to_string())?;
            if !a.same_path(&b) {
                return Err(format!("memory 0 L-BFGS differs from the gradient method at gamma {g}"));
            }
        }
        Ok(format!("4 equivalences, 50 iterations each; one-bit ran {} iterations", sign.records.len() - 1))
    })();
    verdict(6, "exact trace equality of the reductions", start, None, outcome);
}

/// `H` from the recursive BFGS update starting at the scaled identity.
fn dense_bfgs(pairs: &[(Vec<f64>, Vec<f64>)], n: usize) -> DMatrix<f64> {
    let mut h = match pairs.last() {
        Some((s, y)) => DMatrix::identity(n, n) * (dot(s, y) / dot(y, y)),
        None => DMatrix::identity(n, n),
    };
    for (s, y) in pairs {
        let s = DVector::from_column_slice(s);
        let y = DVector::from_column_slice(y);
        let rho = 1.0 / s.dot(&y);
        let left = DMatrix::identity(n, n) - &s * y.transpose() * rho;
        let right = DMatrix::identity(n, n) - &y * s.transpose() * rho;
        h = &left * h * right + &s * s.transpose() * rho;
    }
    h
}

#[test]
fn criterion_07_two_loop_matches_dense_bfgs() {
    let start = Instant::now();
    let outcome = (|| {
        let hand = lbfgs_two_loop(&[2.0, 2.0], pc(1.0), &[CurvaturePair::new(vec![1.0, 0.0], vec![2.0, 0.0]).unwrap()])
            .map_err(|e| e.to_string())?;
        if hand != [1.0, 1.0] {
            return Err(format!("hand trace gave {hand:?}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(707);
        let mut worst = 0.0f64;
        for i in 0..200 {
            let n = rng.random_range(1..=5);
            let len = rng.random_range(0..=3);
            let a = random_spd(&mut rng, n, 0.5, 10.0);
            let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..len)
                .map(|_| {
                    let s = normal_vec(&mut rng, n, 1.0);
                    let y: Vec<f64> = (&a * DVector::from_column_slice(&s)).iter().copied().collect();
                    (s, y)
                })
                .collect();
            let history: Vec<CurvaturePair> =
                pairs.iter().map(|(s, y)| CurvaturePair::new(s.clone(), y.clone()).unwrap()).collect();
            let g = normal_vec(&mut rng, n, 1.0);
            let z = lbfgs_two_loop(&g, pc(1.0), &history).map_err(|e| e.to_string())?;
            let expect = dense_bfgs(&pairs, n) * DVector::from_column_slice(&g);
            let err = (DVector::from_column_slice(&z) - &expect).norm() / expect.norm();
            worst = worst.max(err);
            if !(err <= 1e-10) {
                return Err(format!("instance {i} (n = {n}, history {len}): relative error {err:e}"));
            }
        }
        Ok(format!("hand trace exact, 200 instances, max relative error {worst:.3e}"))
    })();
    verdict(7, "two-loop recursion against the dense BFGS matrix", start, None, outcome);
}

fn central_difference(obj: &dyn Objective, w: &[f64]) -> Vec<f64> {
    let mut probe = w.to_vec();
    (0..w.len())
        .map(|i| {
            let h = 1e-6 * w[i].abs().max(1.0);
            probe[i] = w[i] + h;
            let up = obj.value(&probe).unwrap();
            probe[i] = w[i] - h;
            let down = obj.value(&probe).unwrap();
            probe[i] = w[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

#[test]
fn criterion_08_logistic_gradient_finite_differences() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst = 0.0f64;
    let mut outcome = Ok(());
    for i in 0..100 {
        let n = rng.random_range(1..=50);
        let d = rng.random_range(1..=20);
        let nnz = rng.random_range(1..=d);
        let (data, _) = generate_synthetic(n, d, nnz, rng.random()).unwrap();
        let lambda = rng.random_range(0.0..2.0);
        let obj = LogisticRegressionObjective::new(data, lambda).unwrap();
        let w = normal_vec(&mut rng, d, 1.0);
        let g = obj.gradient(&w).unwrap();
        let fd = central_difference(&obj, &w);
        let diff: Vec<f64> = g.iter().zip(&fd).map(|(a, b)| a - b).collect();
        let err = norm(&diff) / norm(&g);
        worst = worst.max(err);
        if !(err <= 1e-5) {
            outcome = Err(format!("instance {i} (n = {n}, d = {d}, lambda = {lambda}): relative error {err:e}"));
            break;
        }
    }
    verdict(
        8,
        "logistic gradient against central differences",
        start,
        None,
        outcome.map(|_| format!("100 instances, max relative error {worst:.3e}")),
    );
}

#[test]
fn criterion_09_synthetic_sweep_crossover() {
    let start = Instant::now();
    let outcome = (|| {
        let (data, _) = generate_synthetic(10_000, 1_000, 10, 909).map_err(|e| e.to_string())?;
        let obj = LogisticRegressionObjective::new(data, 1.0).map_err(|e| e.to_string())?;
        let cfg = OptimizerConfig { max_iters: 100, ..Default::default() };
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut lines = Vec::new();
        for method in [Method::GdPowerball, Method::LbfgsPowerball] {
            let curves = sweep(method, &obj, &cfg, &DEFAULT_GAMMAS, 10).map_err(|e| e.to_string())?;
            let path = dir.path().join(format!("{method}.csv"));
            write_sweep_csv(&curves, std::fs::File::create(&path).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let rows = std::fs::read_to_string(&path).map_err(|e| e.to_string())?.lines().count() - 1;
            let groups = curves.iter().map(|(g, _)| *g).collect::<Vec<_>>();
            if groups != DEFAULT_GAMMAS || rows != curves.iter().map(|(_, c)| c.len()).sum::<usize>() {
                return Err(format!("{method}: malformed sweep CSV"));
            }
            let baseline = &curves[0].1;
            let target = baseline.get(100).or(baseline.last()).copied().unwrap();
            let near = |c: &[f64]| {
                c.iter()
                    .position(|&v| v <= target * (1.0 + 1e-9))
                    .map_or("never within 1e-9 relative".to_string(), |k| {
                        format!("within 1e-9 relative from iteration {k}")
                    })
            };
            let crossings: Vec<String> = curves[1..]
                .iter()
                .map(|(g, c)| {
                    let below = first_crossing(c, target).map_or("never".to_string(), |k| format!("at iteration {k}"));
                    format!("gamma {g} {below} ({})", near(c))
                })
                .collect();
            let any = curves[1..].iter().any(|(_, c)| first_crossing(c, target).is_some_and(|k| k < 100));
            emit(&format!(
                "  {method}: gamma = 1 reaches {target:.9e} at iteration 100 ({}); \
                 below it: {}{}",
                near(baseline),
                crossings.join(", "),
                if any { "" } else { "; no crossover before iteration 100" }
            ));
            lines.push(format!("{method}: {}", crossings.join(", ")));
        }
        Ok(lines.join("; "))
    })();
    verdict(9, "synthetic gamma sweep, crossover iteration reported", start, Some(Duration::from_secs(120)), outcome);
}

#[test]
fn criterion_10_euler_consistency() {
    let start = Instant::now();
    let outcome = (|| {
        let obj = QuadraticObjective::diagonal(vec![1.0, 2.0, 3.0], vec![0.0; 3]).map_err(|e| e.to_string())?;
        let x0 = [1.0, -2.0, 1.5];
        let gamma = pc(0.5);
        let horizon = 0.1;
        let exact =
            integrate_gradient_flow(&obj, &x0, gamma, &OdeOptions { t_end: Some(horizon), ode_tol: 0.0, h_max: 1e-5 })
                .map_err(|e| e.to_string())?;
        // Maximum deviation over the ten coarse grid times t = 0.01, …, 0.1.
        let global_error = |h: f64| -> Result<f64, String> {
            let steps = (horizon / h).round() as usize;
            let cfg = OptimizerConfig {
                gamma,
                step: StepPolicy::Fixed(h),
                max_iters: steps,
                grad_tol: f64::MIN_POSITIVE,
                record_iterates: true,
                ..Default::default()
            };
            let trace = gradient_powerball(&obj, &x0, &cfg).map_err(|e| e.to_string())?;
            let stride = steps / 10;
            (1..=10)
                .map(|j| {
                    let t = j as f64 * horizon / 10.0;
                    let x = exact.state_at(t).ok_or("reference does not cover the horizon")?;
                    let d: Vec<f64> = trace.iterates[j * stride].iter().zip(&x).map(|(a, b)| a - b).collect();
                    Ok(norm(&d))
                })
                .try_fold(0.0f64, |m, e: Result<f64, String>| Ok(m.max(e?)))
        };
        let (coarse, fine) = (global_error(1e-2)?, global_error(1e-3)?);
        let ratio = coarse / fine;
        let detail = format!("error(h=1e-2) = {coarse:.3e}, error(h=1e-3) = {fine:.3e}, ratio {ratio:.3}");
        if (5.0..=20.0).contains(&ratio) {
            Ok(detail)
        } else {
            Err(detail)
        }
    })();
    verdict(10, "fixed-step iterates converge to the flow at first order", start, None, outcome);
}

fn random_dataset(rng: &mut ChaCha8Rng) -> SparseDataset {
    let n = rng.random_range(0..40);
    let d = rng.random_range(1..30);
    let mut row_ptr = vec![0];
    let (mut indices, mut values, mut labels) = (Vec::new(), Vec::new(), Vec::new());
    for _ in 0..n {
        let mut cols: Vec<usize> = (0..d).filter(|_| rng.random_bool(0.3)).collect();
        cols.dedup();
        for &c in &cols {
            let mag = 10f64.powi(rng.random_range(-300..300));
            let v: f64 = rng.sample::<f64, _>(StandardNormal) * mag;
            indices.push(c);
            values.push(if v == 0.0 { 1.0 } else { v });
        }
        row_ptr.push(indices.len());
        labels.push(if rng.random_bool(0.5) { 1.0 } else { -1.0 });
    }
    SparseDataset::from_csr(d, row_ptr, indices, values, labels).unwrap()
}

#[test]
fn criterion_11_libsvm_round_trip_and_generator_determinism() {
    let start = Instant::now();
    let outcome = (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(1111);
        for i in 0..100 {
            let ds = random_dataset(&mut rng);
            let mut first = Vec::new();
            write_libsvm(&ds, &mut first).map_err(|e| e.to_string())?;
            let back = read_libsvm(first.as_slice(), Some(ds.n_features())).map_err(|e| e.to_string())?;
            if back != ds {
                return Err(format!("round trip {i} changed the dataset"));
            }
            let mut second = Vec::new();
            write_libsvm(&back, &mut second).map_err(|e| e.to_string())?;
            if first != second {
                return Err(format!("round trip {i} is not byte-stable"));
            }
        }
        for i in 0..100 {
            let d = rng.random_range(1..200);
            let args = (rng.random_range(0..300), d, rng.random_range(0..=d), rng.random::<u64>());
            let a = generate_synthetic(args.0, args.1, args.2, args.3).map_err(|e| e.to_string())?;
            let b = generate_synthetic(args.0, args.1, args.2, args.3).map_err(|e| e.to_string())?;
            let (mut wa, mut wb) = (Vec::new(), Vec::new());
            write_libsvm(&a.0, &mut wa).map_err(|e| e.to_string())?;
            write_libsvm(&b.0, &mut wb).map_err(|e| e.to_string())?;
            if a != b || wa != wb {
                return Err(format!("generator call {i} with {args:?} is not deterministic"));
            }
        }
        Ok("100 round trips, 100 generator reruns".to_string())
    })();
    verdict(11, "LIBSVM round trip and generator determinism", start, Some(Duration::from_secs(5)), outcome);
}

#[test]
fn line_search_reference_agrees_with_library() {
    // Guards the reference implementation used in criterion 6.
    let (data, _) = generate_synthetic(200, 20, 5, 1).unwrap();
    let obj = LogisticRegressionObjective::new(data, 0.1).unwrap();
    let x = vec![0.3; 20];
    let (f, g) = obj.value_and_gradient(&x).unwrap();
    let ls = Backtracking::default();
    assert_eq!(reference_armijo(&obj, &x, f, &g, &g, &ls), backtracking_line_search(&obj, &x, f, &g, &g, &ls).ok());
}
