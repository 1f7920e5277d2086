//! The `simulate` pipeline: build initial data, integrate, assess.

use std::path::Path;

use radhj::{
    convergence_report, trajectory_checks, Check, ConvergenceReport, RadialField, RadialGrid,
    RadialSolver, ReportOptions, SteadyState, Trajectory,
};
use serde::Serialize;

use crate::config::{InitialData, RunConfig};
use crate::error::CliResult;
use crate::io::{self, SCHEMA};

pub fn initial_field(initial: &InitialData, cfg: &RunConfig, grid: RadialGrid) -> CliResult<RadialField> {
    let field = match initial {
        InitialData::Zero => RadialField::zeros(grid),
        InitialData::Steady { theta } => {
            let w = SteadyState::new(cfg.problem, *theta)?;
            RadialField::new(grid, w.sample(&grid.nodes())?)?
        }
        InitialData::Parabolic { amplitude } => {
            RadialField::from_fn(grid, |r| amplitude * (1.0 - r * r))?
        }
        InitialData::Bump {
            center,
            width,
            height,
        } => RadialField::from_fn(grid, |r| {
            let x = (r - center) / width;
            if x.abs() < 1.0 {
                height * (1.0 - x * x).powi(2)
            } else {
                0.0
            }
        })?,
        InitialData::File { path } => io::profile_from_file(path, grid)?,
    };
    Ok(field)
}

/// What is finite-horizon about the verdict, stated in the report itself.
#[derive(Debug, Clone, Serialize)]
pub struct Surrogates {
    pub horizon: f64,
    pub tail_fraction: f64,
    pub conv_tol: f64,
    pub tail_slack: f64,
    pub note: &'static str,
}

const SURROGATE_NOTE: &str = "convergence is an infinite-time statement; horizon, tail_fraction and \
conv_tol are fixed finite-horizon surrogates chosen from a grid-refinement study, not derived rates";

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub surrogates: Surrogates,
    pub report: ConvergenceReport,
    pub trajectory_checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub slack: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub schema: u32,
    pub p: f64,
    pub q: f64,
    pub dim: u32,
    pub cells: usize,
    pub epsilon: f64,
    pub horizon: f64,
    pub initial: InitialData,
    pub steps: usize,
    pub initial_sup: f64,
    pub final_sup: f64,
    pub m_inf_est: f64,
    pub theta_fit: f64,
    pub final_distance: f64,
    pub converged: bool,
    pub passed: bool,
    pub checks: Vec<CheckSummary>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trajectory: Trajectory,
    pub document: ReportDocument,
    pub summary: RunSummary,
}

pub fn simulate(cfg: &RunConfig) -> CliResult<RunOutcome> {
    cfg.validate()?;
    let grid = RadialGrid::new(cfg.grid.cells)?;
    let solver = RadialSolver::with_policy(
        grid,
        cfg.problem,
        cfg.grid.epsilon.policy(),
        cfg.time.solver_options(),
    )?;
    let u0 = initial_field(&cfg.initial, cfg, grid)?;
    let trajectory = solver.solve(&u0, cfg.time.horizon, &cfg.time.output_times())?;
    let eps = solver.coefficients().epsilon();
    let opts: ReportOptions = cfg.tolerances.report_options();
    let report = convergence_report(&trajectory, &cfg.problem, &opts)?;
    let checks = trajectory_checks(&trajectory, &cfg.problem, eps)?;
    let passed = report.all_passed() && checks.iter().all(|c| c.passed);
    let summary = RunSummary {
        schema: SCHEMA,
        p: cfg.problem.p(),
        q: cfg.problem.q(),
        dim: cfg.problem.dim(),
        cells: cfg.grid.cells,
        epsilon: eps,
        horizon: cfg.time.horizon,
        initial: cfg.initial.clone(),
        steps: trajectory.steps,
        initial_sup: u0.sup_norm(),
        final_sup: trajectory.last().map_or(0.0, RadialField::sup_norm),
        m_inf_est: report.m_inf_est,
        theta_fit: report.theta_fit,
        final_distance: report.final_distance(),
        converged: report.converged,
        passed,
        checks: report
            .checks
            .iter()
            .chain(&checks)
            .map(|c| CheckSummary {
                name: c.name.clone(),
                slack: c.slack,
                passed: c.passed,
            })
            .collect(),
    };
    let document = ReportDocument {
        schema: SCHEMA,
        surrogates: Surrogates {
            horizon: cfg.time.horizon,
            tail_fraction: opts.tail_fraction,
            conv_tol: opts.conv_tol,
            tail_slack: opts.tail_slack,
            note: SURROGATE_NOTE,
        },
        report,
        trajectory_checks: checks,
        passed,
    };
    Ok(RunOutcome {
        trajectory,
        document,
        summary,
    })
}

/// Writes `trajectory.csv`, `summary.json`, `report.json` and
/// `distance.csv` into `dir`.
pub fn write_run(outcome: &RunOutcome, cfg: &RunConfig, dir: &Path) -> CliResult<()> {
    io::write_text(
        &dir.join("trajectory.csv"),
        &io::trajectory_csv(&outcome.trajectory, cfg.output.stride),
    )?;
    io::write_json(&dir.join("summary.json"), &outcome.summary)?;
    io::write_json(&dir.join("report.json"), &outcome.document)?;
    let rep = &outcome.document.report;
    io::write_text(&dir.join("distance.csv"), &io::distance_csv(&rep.times, &rep.distance_series))?;
    Ok(())
}
