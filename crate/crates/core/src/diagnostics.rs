//! Structural checks on profiles and trajectories, and the convergence
//! report that fits the limiting steady state.

use serde::Serialize;

use crate::envelopes::{a_priori_a0, GradientEnvelope};
use crate::error::{Error, Result};
use crate::params::{abs_pow, chi, ProblemParams};
use crate::radial::{RadialField, Trajectory};
use crate::steady::{theta_from_max, SteadyState};

/// Pointwise quantities that are monotone or constant on steady profiles.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileDiagnostics {
    pub radii: Vec<f64>,
    pub derivative: Vec<f64>,
    /// `r^((N-1)/(p-1)) ∂_r u`
    pub scaled_derivative: Vec<f64>,
    /// `r^(β-1) χ(∂_r u) + r^β / β`
    pub first_integral: Vec<f64>,
    /// `r^(N-1) |∂_r u|^(p-2) ∂_r u`
    pub flux: Vec<f64>,
}

/// Centered differences inside, one-sided at both ends.
pub fn centered_derivative(field: &RadialField) -> Vec<f64> {
    let u = field.values();
    let n = u.len() - 1;
    let inv_h = field.grid().cells() as f64;
    (0..=n)
        .map(|i| match i {
            0 => (u[1] - u[0]) * inv_h,
            i if i == n => (u[n] - u[n - 1]) * inv_h,
            i => 0.5 * (u[i + 1] - u[i - 1]) * inv_h,
        })
        .collect()
}

pub fn profile_diagnostics(field: &RadialField, params: &ProblemParams) -> ProfileDiagnostics {
    let consts = params.constants();
    let radii = field.grid().nodes();
    let derivative = centered_derivative(field);
    let p = params.p();
    let nm1 = params.nm1();
    let beta = consts.beta;
    let mut scaled_derivative = Vec::with_capacity(radii.len());
    let mut first_integral = Vec::with_capacity(radii.len());
    let mut flux = Vec::with_capacity(radii.len());
    for (&r, &d) in radii.iter().zip(&derivative) {
        scaled_derivative.push(abs_pow(r, nm1 / (p - 1.0)) * d);
        first_integral.push(abs_pow(r, beta - 1.0) * chi(d, params) + r.powf(beta) / beta);
        flux.push(abs_pow(r, nm1) * abs_pow(d, p - 2.0) * d);
    }
    ProfileDiagnostics {
        radii,
        derivative,
        scaled_derivative,
        first_integral,
        flux,
    }
}

/// Outcome of one named check: `measured` is compared against `threshold`
/// and `slack = threshold - measured` (non-negative when it passes).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub threshold: f64,
    pub measured: f64,
    pub slack: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            threshold,
            measured,
            slack: threshold - measured,
            passed: measured <= threshold,
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            threshold,
            measured,
            slack: measured - threshold,
            passed: measured >= threshold,
        }
    }
}

fn max_increase(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
}

/// Non-increasing up to `tol`; `measured` is the largest increase between
/// neighbouring nodes.
pub fn check_scaled_derivative_monotone(diag: &ProfileDiagnostics, tol: f64) -> Check {
    Check::at_most(
        "scaled_derivative_monotone",
        max_increase(&diag.scaled_derivative),
        tol,
    )
}

pub fn check_flux_monotone(diag: &ProfileDiagnostics, tol: f64) -> Check {
    Check::at_most("flux_monotone", max_increase(&diag.flux), tol)
}

/// Finite-horizon surrogates for convergence; fixed once, not per run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportOptions {
    /// Fraction of the final output times averaged into `M_inf`.
    pub tail_fraction: f64,
    /// Absolute bound on the final sup distance to the fitted steady state.
    pub conv_tol: f64,
    /// Allowed relative growth between consecutive tail distances.
    pub tail_slack: f64,
    pub quad_tol: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            tail_fraction: 0.25,
            conv_tol: 5e-3,
            tail_slack: 0.1,
            quad_tol: crate::steady::DEFAULT_QUAD_TOL,
        }
    }
}

pub const MIN_OUTPUT_TIMES: usize = 8;
const DEGENERATE_MAX: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub m_inf_est: f64,
    pub theta_fit: f64,
    pub times: Vec<f64>,
    pub distance_series: Vec<f64>,
    pub checks: Vec<Check>,
    pub converged: bool,
}

impl ConvergenceReport {
    pub fn final_distance(&self) -> f64 {
        *self.distance_series.last().expect("at least eight samples")
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn tail_start(len: usize, fraction: f64) -> usize {
    let count = ((len as f64) * fraction).ceil().max(1.0) as usize;
    len - count.min(len)
}

/// Fits `theta` from the tail-averaged sup norm and measures the sup
/// distance of every sample to `w_theta`.
pub fn convergence_report(
    traj: &Trajectory,
    params: &ProblemParams,
    opts: &ReportOptions,
) -> Result<ConvergenceReport> {
    if traj.len() < MIN_OUTPUT_TIMES {
        return Err(Error::HorizonTooShort {
            got: traj.len(),
            need: MIN_OUTPUT_TIMES,
        });
    }
    if !(opts.tail_fraction > 0.0 && opts.tail_fraction <= 0.5) {
        return Err(Error::OutOfRange {
            name: "tail_fraction",
            value: opts.tail_fraction,
            range: "(0, 0.5]".into(),
        });
    }
    let start = tail_start(traj.len(), opts.tail_fraction);
    let tail = &traj.sup_norms[start..];
    let m_inf = tail.iter().sum::<f64>() / tail.len() as f64;
    let top = params.constants().max_steady_value();
    let mut checks = Vec::new();
    checks.push(Check::at_most("m_inf_admissible", m_inf, top));
    let theta = if m_inf < DEGENERATE_MAX {
        1.0
    } else if m_inf >= top {
        0.0
    } else {
        theta_from_max(m_inf, params, crate::steady::DEFAULT_THETA_TOL)?
    };
    let grid = traj.grid().expect("non-empty trajectory");
    let steady = SteadyState::new(*params, theta)?.with_quad_tol(opts.quad_tol);
    let target = RadialField::new(grid, steady.sample(&grid.nodes())?)?;
    let distance_series = traj
        .states
        .iter()
        .map(|s| s.sup_distance(&target))
        .collect::<Result<Vec<_>>>()?;
    let final_distance = *distance_series.last().expect("non-empty");
    checks.push(Check::at_most(
        "final_distance",
        final_distance,
        opts.conv_tol,
    ));
    let tail_growth = distance_series[start..]
        .windows(2)
        .map(|w| {
            if w[0] > 0.0 {
                w[1] / w[0] - 1.0
            } else if w[1] > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .fold(0.0, f64::max);
    checks.push(Check::at_most(
        "tail_distance_non_increasing",
        tail_growth,
        opts.tail_slack,
    ));
    let converged = checks.iter().all(|c| c.passed);
    Ok(ConvergenceReport {
        m_inf_est: m_inf,
        theta_fit: theta,
        times: traj.times.clone(),
        distance_series,
        checks,
        converged,
    })
}

/// Invariants every run must satisfy: positivity, the `||u0|| + ε` bound,
/// sup-norm monotonicity, and the gradient envelopes.
pub fn trajectory_checks(
    traj: &Trajectory,
    params: &ProblemParams,
    epsilon: f64,
) -> Result<Vec<Check>> {
    let u0 = traj
        .states
        .first()
        .ok_or_else(|| Error::Profile("empty trajectory".into()))?;
    let sup0 = u0.sup_norm();
    let (g_lo, g_hi) = u0.gradient_extrema();
    let lip = g_lo.abs().max(g_hi.abs());
    let min_value = traj
        .states
        .iter()
        .map(RadialField::min)
        .fold(f64::INFINITY, f64::min);
    let max_value = traj
        .states
        .iter()
        .map(RadialField::max)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut checks = vec![
        Check::at_least("non_negative", min_value, -1e-12),
        Check::at_most("bounded", max_value, sup0 + epsilon),
        Check::at_most("sup_norm_monotone", traj.max_sup_increase, 1e-6 * sup0),
    ];
    let a0 = a_priori_a0(sup0, lip, params);
    let lowest = traj.grad_min.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(Check::at_least(
        "gradient_lower_bound",
        lowest,
        -(1.05 * a0),
    ));
    if lip > 0.0 {
        let env = GradientEnvelope::for_initial_lipschitz(*params, lip, 0.0)?;
        let tol = 0.05 * env.w0();
        let mut worst = f64::NEG_INFINITY;
        for (t, g) in traj.times.iter().zip(&traj.grad_max) {
            worst = worst.max(g - env.value(*t)?);
        }
        checks.push(Check::at_most("gradient_envelope", worst, tol));
    }
    Ok(checks)
}
