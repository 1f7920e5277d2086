use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use radhj::{derive_constants, ProblemParams, SteadyState};
use radhj_cli::error::{CliError, CliResult};
use radhj_cli::io::{self, SCHEMA};
use radhj_cli::simulate::{simulate, write_run};
use radhj_cli::sweep::{run_sweep, sweep_csv, SweepSpec};
use radhj_cli::verify::{run_suite, SUITES};
use radhj_cli::RunConfig;
use serde::Serialize;

/// Radial solutions of u_t = Δ_p u + |∇u|^q in the unit ball.
#[derive(Parser)]
#[command(name = "radhj", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate a steady state: r, w, w', first-integral residual.
    Steady(SteadyArgs),
    /// Map a maximum value to its theta (or theta to its maximum).
    Invert(SteadyArgs),
    /// Run one configuration and write trajectory, summary and report.
    Simulate(RunArgs),
    /// Run a built-in verification suite.
    Verify(VerifyArgs),
    /// Run a parameter sweep.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Take (p, q, N) from the `problem` section of this config.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    #[arg(long = "dim", default_value_t = 2)]
    dim: u32,
}

impl ProblemArgs {
    fn params(&self) -> CliResult<ProblemParams> {
        match &self.config {
            Some(path) => Ok(RunConfig::load(path)?.problem),
            None => Ok(ProblemParams::new(self.p, self.q, self.dim)?),
        }
    }
}

#[derive(Args)]
#[group(id = "member", required = true, multiple = false, args = ["theta", "max_value"])]
struct SteadyArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long = "max-value")]
    max_value: Option<f64>,
    /// Number of equally spaced radii in [0, 1].
    #[arg(long, default_value_t = 101)]
    samples: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn resolve_theta(args: &SteadyArgs, params: &ProblemParams) -> CliResult<(f64, f64)> {
    match (args.theta, args.max_value) {
        (Some(theta), None) => {
            let m = SteadyState::new(*params, theta)?.max_value()?;
            Ok((theta, m))
        }
        (None, Some(m)) => Ok((radhj::theta_from_max(m, params, radhj::steady::DEFAULT_THETA_TOL)?, m)),
        _ => Err(CliError::Usage("give exactly one of --theta, --max-value".into())),
    }
}

fn emit(out: Option<&Path>, file: &str, text: &str) -> CliResult<()> {
    match out {
        Some(dir) => io::write_text(&dir.join(file), text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_steady(args: &SteadyArgs) -> CliResult<bool> {
    let params = args.problem.params()?;
    let (theta, _) = resolve_theta(args, &params)?;
    if args.max_value.is_some() {
        eprintln!("theta = {theta}");
    }
    if args.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let w = SteadyState::new(params, theta)?;
    let k = (args.samples - 1) as f64;
    let radii: Vec<f64> = (0..args.samples).map(|i| i as f64 / k).collect();
    let values = w.sample(&radii)?;
    let mut text = String::from("r,w,dw,first_integral_residual\n");
    for (r, v) in radii.iter().zip(values) {
        let d = w.eval_derivative(*r)?;
        let res = w
            .first_integral_residual(*r)
            .map(|x| x.to_string())
            .unwrap_or_default();
        text.push_str(&format!("{r},{v},{d},{res}\n"));
    }
    emit(args.out.as_deref(), "steady.csv", &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct Inversion {
    schema: u32,
    p: f64,
    q: f64,
    dim: u32,
    max_steady_value: f64,
    max_value: f64,
    theta: f64,
}

fn cmd_invert(args: &SteadyArgs) -> CliResult<bool> {
    let params = args.problem.params()?;
    let (theta, m) = resolve_theta(args, &params)?;
    let doc = Inversion {
        schema: SCHEMA,
        p: params.p(),
        q: params.q(),
        dim: params.dim(),
        max_steady_value: derive_constants(&params).max_steady_value(),
        max_value: m,
        theta,
    };
    emit(args.out.as_deref(), "invert.json", &io::to_json(&doc)?)?;
    Ok(true)
}

fn cmd_simulate(args: &RunArgs, out_dir: &mut Option<PathBuf>) -> CliResult<bool> {
    *out_dir = args.out.clone();
    let cfg = RunConfig::load(&args.config)?;
    let dir = args
        .out
        .clone()
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("run"));
    *out_dir = Some(dir.clone());
    let outcome = simulate(&cfg)?;
    write_run(&outcome, &cfg, &dir)?;
    let s = &outcome.summary;
    eprintln!(
        "{} steps, M_inf {:.6e}, theta_fit {:.6}, final distance {:.3e}, converged {}",
        s.steps, s.m_inf_est, s.theta_fit, s.final_distance, s.converged
    );
    for c in s.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL {} (slack {:.3e})", c.name, c.slack);
    }
    Ok(s.passed)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<bool> {
    let report = run_suite(&args.suite)?;
    for c in &report.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("{tag} {}: measured {:.3e}, threshold {:.3e}", c.name, c.measured, c.threshold);
    }
    let file = format!("verify-{}.json", args.suite);
    emit(args.out.as_deref(), &file, &io::to_json(&report)?)?;
    Ok(report.passed)
}

fn cmd_sweep(args: &SweepArgs) -> CliResult<bool> {
    let spec = SweepSpec::load(&args.config)?;
    let configs = spec.expand()?;
    let jobs = args.jobs.unwrap_or(spec.sweep.jobs);
    eprintln!("{} runs, {jobs} at a time", configs.len());
    let rows = run_sweep(&configs, jobs, args.out.as_deref())?;
    let ok = rows.iter().all(|r| r.passed());
    emit(args.out.as_deref(), "sweep.csv", &sweep_csv(&rows))?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut error_dir: Option<PathBuf> = None;
    let result = match &cli.command {
        Command::Steady(a) => cmd_steady(a),
        Command::Invert(a) => cmd_invert(a),
        Command::Simulate(a) => cmd_simulate(a, &mut error_dir),
        Command::Verify(a) => {
            error_dir = a.out.clone();
            cmd_verify(a)
        }
        Command::Sweep(a) => {
            error_dir = a.out.clone();
            cmd_sweep(a)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(dir) = error_dir {
                if let Err(w) = io::write_json(&dir.join("error.json"), &e.to_record()) {
                    eprintln!("error: cannot write error.json: {w}");
                }
            }
            ExitCode::from(2)
        }
    }
}
