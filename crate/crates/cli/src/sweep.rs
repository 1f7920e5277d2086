//! Parameter sweeps: the cartesian product of the listed values applied to a
//! base configuration, run concurrently, reported one row per run.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use radhj::ProblemParams;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{InitialData, RunConfig};
use crate::error::{CliError, CliResult};
use crate::simulate::{simulate, write_run, RunSummary};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: RunConfig,
    pub sweep: SweepAxes,
}

/// Values to vary; an absent list keeps the base value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepAxes {
    #[serde(default)]
    pub p: Vec<f64>,
    #[serde(default)]
    pub q: Vec<f64>,
    #[serde(default)]
    pub dim: Vec<u32>,
    /// Replaces the initial data by the steady state of each `theta`.
    #[serde(default)]
    pub theta: Vec<f64>,
    #[serde(default)]
    pub cells: Vec<usize>,
    /// Concurrent runs; overridden by `--jobs`.
    #[serde(default = "default_jobs")]
    pub jobs: usize,
}

fn default_jobs() -> usize {
    1
}

fn axis<T: Copy>(values: &[T], base: T) -> Vec<T> {
    if values.is_empty() {
        vec![base]
    } else {
        values.to_vec()
    }
}

impl SweepSpec {
    pub fn parse(text: &str) -> CliResult<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Every combination, validated before anything runs.
    pub fn expand(&self) -> CliResult<Vec<RunConfig>> {
        let b = &self.base;
        let mut out = Vec::new();
        for p in axis(&self.sweep.p, b.problem.p()) {
            for q in axis(&self.sweep.q, b.problem.q()) {
                for dim in axis(&self.sweep.dim, b.problem.dim()) {
                    let problem = ProblemParams::new(p, q, dim)
                        .map_err(|e| CliError::Config(format!("sweep point (p={p}, q={q}, N={dim}): {e}")))?;
                    let initials: Vec<InitialData> = if self.sweep.theta.is_empty() {
                        vec![b.initial.clone()]
                    } else {
                        self.sweep.theta.iter().map(|&theta| InitialData::Steady { theta }).collect()
                    };
                    for initial in initials {
                        for cells in axis(&self.sweep.cells, b.grid.cells) {
                            let mut cfg = b.clone();
                            cfg.problem = problem;
                            cfg.initial = initial.clone();
                            cfg.grid.cells = cells;
                            cfg.validate()?;
                            out.push(cfg);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub q: f64,
    pub dim: u32,
    pub cells: usize,
    pub theta_init: Option<f64>,
    pub summary: Option<RunSummary>,
    pub error: Option<String>,
}

impl SweepRow {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.p
            .total_cmp(&other.p)
            .then(self.q.total_cmp(&other.q))
            .then(self.dim.cmp(&other.dim))
            .then(
                self.theta_init
                    .unwrap_or(-1.0)
                    .total_cmp(&other.theta_init.unwrap_or(-1.0)),
            )
            .then(self.cells.cmp(&other.cells))
    }

    pub fn passed(&self) -> bool {
        self.summary.as_ref().is_some_and(|s| s.passed)
    }
}

pub fn run_dir_name(cfg: &RunConfig) -> String {
    let mut name = format!(
        "p{}_q{}_N{}_n{}",
        cfg.problem.p(),
        cfg.problem.q(),
        cfg.problem.dim(),
        cfg.grid.cells
    );
    if let InitialData::Steady { theta } = cfg.initial {
        let _ = write!(name, "_theta{theta}");
    }
    name
}

/// Runs every configuration with at most `jobs` in flight. Each run writes
/// into its own subdirectory of `out` when given. Failures become rows.
pub fn run_sweep(configs: &[RunConfig], jobs: usize, out: Option<&Path>) -> CliResult<Vec<SweepRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    let mut rows: Vec<SweepRow> = pool.install(|| {
        configs
            .par_iter()
            .map(|cfg| {
                let dir: Option<PathBuf> = out.map(|o| o.join("runs").join(run_dir_name(cfg)));
                let result = simulate(cfg).and_then(|outcome| {
                    if let Some(d) = &dir {
                        write_run(&outcome, cfg, d)?;
                    }
                    Ok(outcome.summary)
                });
                let theta_init = match cfg.initial {
                    InitialData::Steady { theta } => Some(theta),
                    _ => None,
                };
                let (summary, error) = match result {
                    Ok(s) => (Some(s), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                SweepRow {
                    p: cfg.problem.p(),
                    q: cfg.problem.q(),
                    dim: cfg.problem.dim(),
                    cells: cfg.grid.cells,
                    theta_init,
                    summary,
                    error,
                }
            })
            .collect()
    });
    rows.sort_by(SweepRow::key_cmp);
    Ok(rows)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const SWEEP_HEADER: &str =
    "p,q,dim,cells,theta_init,epsilon,theta_fit,m_inf_est,final_distance,converged,passed,error,slacks";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for row in rows {
        let theta = row.theta_init.map(|t| t.to_string()).unwrap_or_default();
        let _ = write!(s, "{},{},{},{},{theta},", row.p, row.q, row.dim, row.cells);
        match &row.summary {
            Some(sm) => {
                let slacks: Vec<String> = sm.checks.iter().map(|c| format!("{}={}", c.name, c.slack)).collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},,{}",
                    sm.epsilon,
                    sm.theta_fit,
                    sm.m_inf_est,
                    sm.final_distance,
                    sm.converged,
                    sm.passed,
                    csv_field(&slacks.join(";"))
                );
            }
            None => {
                let err = row.error.as_deref().unwrap_or("");
                let _ = writeln!(s, ",,,,false,false,{},", csv_field(err));
            }
        }
    }
    s
}
