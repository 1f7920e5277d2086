//! Built-in verification suites. Each returns named checks with measured
//! slacks; the suite passes iff every check passes.

use radhj::diagnostics::{check_flux_monotone, check_scaled_derivative_monotone};
use radhj::{
    chi, convergence_report, derive_constants, profile_diagnostics, theta_from_max,
    trajectory_checks, Barrier, Check, EpsilonPolicy, GradientEnvelope, ProblemParams,
    RadialField, RadialGrid, RadialSolver, ReportOptions, SolverOptions, SteadyState, Trajectory,
};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::SCHEMA;

pub const SUITES: [&str; 4] = ["steady-family", "envelopes", "solver-properties", "convergence"];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub fn run_suite(name: &str) -> CliResult<SuiteReport> {
    let checks = match name {
        "steady-family" => steady_family()?,
        "envelopes" => envelopes()?,
        "solver-properties" => solver_properties()?,
        "convergence" => convergence()?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        schema: SCHEMA,
        suite: name.to_string(),
        checks,
        passed,
    })
}

fn params(p: f64, q: f64, n: u32) -> ProblemParams {
    ProblemParams::new(p, q, n).expect("admissible")
}

fn sample_set() -> Vec<ProblemParams> {
    vec![
        params(2.0, 0.5, 2),
        params(3.0, 1.0, 2),
        params(2.5, 1.2, 4),
        params(4.0, 0.5, 3),
        params(2.2, 0.1, 5),
    ]
}

fn steady_field(pp: ProblemParams, theta: f64, grid: RadialGrid) -> CliResult<RadialField> {
    let w = SteadyState::new(pp, theta)?;
    Ok(RadialField::new(grid, w.sample(&grid.nodes())?)?)
}

fn steady_family() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let mut closed = 0.0f64;
    for pp in sample_set() {
        let c = derive_constants(&pp);
        let w = SteadyState::new(pp, 0.0)?;
        for k in 0..=200 {
            let r = f64::from(k) / 200.0;
            closed = closed.max((w.eval(r)? - c.c0 / c.alpha * (1.0 - r.powf(c.alpha))).abs());
        }
    }
    checks.push(Check::at_most("w0_closed_form", closed, 1e-10));

    let mut fi = 0.0f64;
    for pp in sample_set() {
        let beta = derive_constants(&pp).beta;
        for theta in [0.0, 0.25, 0.5, 0.75] {
            let w = SteadyState::new(pp, theta)?;
            for k in 1..20 {
                let r = theta + 1e-3 + (1.0 - 2e-3 - theta) * f64::from(k) / 20.0;
                let d = w.eval_derivative(r)?;
                let v = r.powf(beta - 1.0) * chi(d, &pp) + (r.powf(beta) - theta.powf(beta)) / beta;
                fi = fi.max(v.abs());
            }
        }
    }
    checks.push(Check::at_most("first_integral", fi, 1e-8));

    let mut trip = 0.0f64;
    let mut endpoints = 0.0f64;
    for pp in sample_set() {
        for k in 0..20 {
            let theta = f64::from(k) / 20.0;
            let m = SteadyState::new(pp, theta)?.max_value()?;
            trip = trip.max((theta_from_max(m, &pp, 1e-10)? - theta).abs());
        }
        let top = derive_constants(&pp).max_steady_value();
        endpoints = endpoints
            .max(theta_from_max(top, &pp, 1e-10)?)
            .max(1.0 - theta_from_max(0.0, &pp, 1e-10)?);
    }
    checks.push(Check::at_most("max_map_round_trip", trip, 1e-8));
    checks.push(Check::at_most("max_map_endpoints", endpoints, 0.0));

    let grid = RadialGrid::new(256)?;
    let (mut scaled, mut flux) = (0.0f64, 0.0f64);
    for pp in sample_set() {
        for theta in [0.0, 0.3, 0.6] {
            let d = profile_diagnostics(&steady_field(pp, theta, grid)?, &pp);
            scaled = scaled.max(check_scaled_derivative_monotone(&d, 1e-6).measured);
            flux = flux.max(check_flux_monotone(&d, 1e-6).measured);
        }
    }
    checks.push(Check::at_most("steady_scaled_derivative_monotone", scaled, 1e-6));
    checks.push(Check::at_most("steady_flux_monotone", flux, 1e-6));

    let pp = params(2.0, 0.5, 2);
    let small = RadialGrid::new(64)?;
    let hump = RadialField::from_fn(small, |r| r * (1.0 - r))?;
    let ramp = RadialField::from_fn(small, |r| r)?;
    let c = check_scaled_derivative_monotone(&profile_diagnostics(&hump, &pp), 1e-6);
    checks.push(Check::at_least("negative_control_scaled_derivative", c.measured, 1e-6));
    let c = check_flux_monotone(&profile_diagnostics(&ramp, &pp), 1e-6);
    checks.push(Check::at_least("negative_control_flux", c.measured, 1e-6));
    Ok(checks)
}

fn envelopes() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let pp = params(3.0, 1.0, 2);
    let exact = GradientEnvelope::new(pp, 1.0, 0.0)?;
    checks.push(Check::at_most("envelope_w1_exact", (exact.value(1.0)? - 0.5).abs(), 0.0));
    let reg = GradientEnvelope::new(pp, 1.0, 1e-5)?;
    let mut worst = 0.0f64;
    for k in 0..=100 {
        let t = 0.1 * f64::from(k);
        let a = exact.value(t)?;
        worst = worst.max((reg.value(t)? - a).abs() / a);
    }
    checks.push(Check::at_most("envelope_regularized", worst, 1e-3));
    let mut residual = 0.0f64;
    let mut level = f64::NEG_INFINITY;
    for pp in sample_set() {
        for (center, m) in [(0.0, 0.01), (0.3, 1e-4), (0.5, 1.0)] {
            let b = Barrier::below_level(pp, center, m)?;
            level = level.max(b.sup() - m);
            for k in 1..10 {
                let s = b.lambda() * f64::from(k) / 10.0;
                residual = residual.max(b.stationarity_residual(s)?.abs());
            }
        }
    }
    checks.push(Check::at_most("barrier_stationary", residual, 1e-8));
    checks.push(Check::at_most("barrier_below_level", level, 1e-15));
    Ok(checks)
}

fn run(pp: ProblemParams, n: usize, u0: &RadialField, t_end: f64, outputs: usize) -> CliResult<(RadialSolver, Trajectory)> {
    let grid = RadialGrid::new(n)?;
    let solver = RadialSolver::with_policy(grid, pp, EpsilonPolicy::default(), SolverOptions::default())?;
    let times: Vec<f64> = (1..=outputs).map(|k| t_end * k as f64 / outputs as f64).collect();
    let traj = solver.solve(u0, t_end, &times)?;
    Ok((solver, traj))
}

fn solver_properties() -> CliResult<Vec<Check>> {
    let mut checks = Vec::new();
    let pp = params(2.0, 0.5, 2);
    let grid = RadialGrid::new(128)?;

    let (_, zero) = run(pp, 128, &RadialField::zeros(grid), 1.0, 8)?;
    let sup = zero.sup_norms.iter().fold(0.0f64, |a, b| a.max(*b));
    checks.push(Check::at_most("zero_stays_zero", sup, 0.0));

    let parabolic = RadialField::from_fn(grid, |r| 0.01 * (1.0 - r * r))?;
    let bump = RadialField::from_fn(grid, |r| {
        let x = (r - 0.4) / 0.3;
        if x.abs() < 1.0 {
            0.01 * (1.0 - x * x).powi(2)
        } else {
            0.0
        }
    })?;
    for (label, u0) in [("parabolic", &parabolic), ("bump", &bump)] {
        let (solver, traj) = run(pp, 128, u0, 1.0, 10)?;
        for mut c in trajectory_checks(&traj, &pp, solver.coefficients().epsilon())? {
            c.name = format!("{label}_{}", c.name);
            checks.push(c);
        }
    }

    let half = RadialField::new(grid, parabolic.values().iter().map(|v| 0.5 * v).collect())?;
    let (_, ta) = run(pp, 128, &half, 1.0, 8)?;
    let (_, tb) = run(pp, 128, &parabolic, 1.0, 8)?;
    let mut gap = f64::NEG_INFINITY;
    for (a, b) in ta.states.iter().zip(&tb.states) {
        for (x, y) in a.values().iter().zip(b.values()) {
            gap = gap.max(x - y);
        }
    }
    checks.push(Check::at_most("comparison_ordering", gap, 1e-6));

    let fine = RadialGrid::new(256)?;
    let w = steady_field(pp, 0.3, fine)?;
    let (_, traj) = run(pp, 256, &w, 1.0, 8)?;
    let drift = traj
        .states
        .iter()
        .map(|u| u.sup_distance(&w))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    checks.push(Check::at_most("stationarity_relative", drift / w.sup_norm(), 5e-3));
    Ok(checks)
}

/// Headline run: `0.01 (1 - r²)` on 512 cells, horizons 2 and 4.
fn convergence() -> CliResult<Vec<Check>> {
    let pp = params(2.0, 0.5, 2);
    let grid = RadialGrid::new(512)?;
    let u0 = RadialField::from_fn(grid, |r| 0.01 * (1.0 - r * r))?;
    let opts = ReportOptions::default();
    let (_, short) = run(pp, 512, &u0, 2.0, 40)?;
    let (_, long) = run(pp, 512, &u0, 4.0, 40)?;
    let a = convergence_report(&short, &pp, &opts)?;
    let b = convergence_report(&long, &pp, &opts)?;
    let mut checks = a.checks.clone();
    checks.push(Check::at_most(
        "final_distance_relative",
        a.final_distance(),
        0.1 * a.m_inf_est,
    ));
    checks.push(Check::at_most(
        "theta_fit_horizon_agreement",
        (a.theta_fit - b.theta_fit).abs(),
        0.02,
    ));
    Ok(checks)
}
