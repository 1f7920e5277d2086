use serde::{Deserialize, Serialize};

use super::coeffs::RegularizedCoefficients;
use super::grid::{RadialField, RadialGrid};
use super::scheme::{Discretization, SourceScheme, Tridiagonal};
use crate::error::{Error, Result};
use crate::params::ProblemParams;

/// How `ε` is chosen for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "policy", content = "value")]
pub enum EpsilonPolicy {
    /// `ε = h^(1/2)`, so `ε → 0` under refinement.
    Grid,
    Fixed(f64),
}

/// Default regularization: small enough that the steady family is
/// reproduced to grid accuracy, large enough for Newton to converge.
pub const DEFAULT_EPSILON: f64 = 1e-10;

impl Default for EpsilonPolicy {
    fn default() -> Self {
        EpsilonPolicy::Fixed(DEFAULT_EPSILON)
    }
}

impl EpsilonPolicy {
    pub fn resolve(&self, grid: &RadialGrid) -> f64 {
        match *self {
            EpsilonPolicy::Grid => grid.h().sqrt(),
            EpsilonPolicy::Fixed(e) => e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum TimeStepping {
    /// Forward Euler with `dt <= cfl / max_i |∂L_i/∂u_i|`.
    Explicit { cfl: f64 },
    /// Backward Euler solved by Newton's method with a tridiagonal Jacobian.
    /// Steps start at `dt_max` and are halved when Newton stalls.
    Implicit { dt_max: f64 },
}

impl Default for TimeStepping {
    fn default() -> Self {
        TimeStepping::Implicit { dt_max: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverOptions {
    pub stepping: TimeStepping,
    pub source: SourceScheme,
}

/// Time-stamped samples of a run, all on one grid.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<RadialField>,
    pub sup_norms: Vec<f64>,
    pub grad_min: Vec<f64>,
    pub grad_max: Vec<f64>,
    /// Largest per-step increase of the sup norm over the whole run.
    pub max_sup_increase: f64,
    pub steps: usize,
}

impl Trajectory {
    fn new() -> Self {
        Self {
            times: Vec::new(),
            states: Vec::new(),
            sup_norms: Vec::new(),
            grad_min: Vec::new(),
            grad_max: Vec::new(),
            max_sup_increase: 0.0,
            steps: 0,
        }
    }

    fn record(&mut self, t: f64, state: &RadialField) {
        let (lo, hi) = state.gradient_extrema();
        self.times.push(t);
        self.sup_norms.push(state.sup_norm());
        self.grad_min.push(lo);
        self.grad_max.push(hi);
        self.states.push(state.clone());
    }

    /// Builds a trajectory from stored samples, e.g. read back from disk.
    /// Sup-norm increases are measured between samples only.
    pub fn from_states(times: Vec<f64>, states: Vec<RadialField>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::Grid(format!(
                "{} times for {} states",
                times.len(),
                states.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Grid("times must be strictly increasing".into()));
        }
        if let Some(first) = states.first() {
            if states.iter().any(|s| s.grid() != first.grid()) {
                return Err(Error::Grid("states live on different grids".into()));
            }
        }
        let mut traj = Self::new();
        for (t, s) in times.into_iter().zip(&states) {
            traj.record(t, s);
        }
        traj.max_sup_increase = max_step_increase(&traj.sup_norms);
        Ok(traj)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn grid(&self) -> Option<RadialGrid> {
        self.states.first().map(RadialField::grid)
    }

    pub fn last(&self) -> Option<&RadialField> {
        self.states.last()
    }
}

fn max_step_increase(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

const NEWTON_MAX_ITER: usize = 30;
const NEWTON_RTOL: f64 = 1e-12;
const MAX_HALVINGS: usize = 40;

/// Finite-volume solver for the regularized radial problem
/// `u_t = r^(1-N) (r^(N-1) a_ε(u_r²) u_r)_r + b_ε(u_r²)`, `u_r(0) = 0`, `u(1) = 0`.
#[derive(Debug, Clone)]
pub struct RadialSolver {
    grid: RadialGrid,
    disc: Discretization,
    options: SolverOptions,
}

struct Workspace {
    rhs: Vec<f64>,
    jac: Tridiagonal,
    scratch: Vec<f64>,
    trial: Vec<f64>,
    lv: Vec<f64>,
}

impl RadialSolver {
    pub fn new(grid: RadialGrid, coeffs: RegularizedCoefficients, options: SolverOptions) -> Self {
        Self {
            grid,
            disc: Discretization::new(grid, coeffs, options.source),
            options,
        }
    }

    pub fn with_policy(
        grid: RadialGrid,
        params: ProblemParams,
        eps: EpsilonPolicy,
        options: SolverOptions,
    ) -> Result<Self> {
        let coeffs = RegularizedCoefficients::new(eps.resolve(&grid), params)?;
        Ok(Self::new(grid, coeffs, options))
    }

    pub fn grid(&self) -> RadialGrid {
        self.grid
    }

    pub fn coefficients(&self) -> &RegularizedCoefficients {
        &self.disc.coeffs
    }

    pub fn options(&self) -> &SolverOptions {
        &self.options
    }

    fn workspace(&self) -> Workspace {
        let m = self.disc.unknowns();
        Workspace {
            rhs: vec![0.0; m],
            jac: Tridiagonal::zeros(m),
            scratch: Vec::with_capacity(m),
            trial: vec![0.0; m + 1],
            lv: vec![0.0; m],
        }
    }

    fn check_state(&self, state: &RadialField) -> Result<()> {
        if state.grid() != self.grid {
            return Err(Error::Grid("state does not live on the solver grid".into()));
        }
        let b = state.boundary_value();
        if b != 0.0 {
            return Err(Error::Dirichlet { value: b });
        }
        Ok(())
    }

    /// Explicit stability limit at `state` (infinite for implicit stepping).
    pub fn stable_dt(&self, state: &RadialField) -> f64 {
        match self.options.stepping {
            TimeStepping::Explicit { cfl } => self.disc.stable_dt(state.values(), cfl),
            TimeStepping::Implicit { .. } => f64::INFINITY,
        }
    }

    /// Advances `state` by one step of size `dt`.
    pub fn step(&self, state: &RadialField, dt: f64) -> Result<RadialField> {
        self.check_state(state)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::OutOfRange {
                name: "dt",
                value: dt,
                range: "(0, inf)".into(),
            });
        }
        let mut ws = self.workspace();
        let mut next = state.clone();
        match self.options.stepping {
            TimeStepping::Explicit { cfl } => {
                let limit = self.disc.stable_dt(state.values(), cfl);
                if dt > limit * (1.0 + 1e-12) {
                    return Err(Error::Unstable { dt, limit });
                }
                self.explicit_step(state.values(), next.values_mut(), dt, &mut ws);
            }
            TimeStepping::Implicit { .. } => {
                if !self.implicit_step(state.values(), next.values_mut(), dt, &mut ws) {
                    return Err(Error::Newton { time: f64::NAN, dt });
                }
            }
        }
        Ok(next)
    }

    fn explicit_step(&self, u: &[f64], out: &mut [f64], dt: f64, ws: &mut Workspace) {
        self.disc.apply(u, &mut ws.rhs);
        for (i, r) in ws.rhs.iter().enumerate() {
            out[i] = u[i] + dt * r;
        }
        out[self.disc.unknowns()] = 0.0;
    }

    fn residual_norm(&self, u: &[f64], v: &[f64], dt: f64, buf: &mut [f64]) -> f64 {
        self.disc.apply(v, buf);
        buf.iter()
            .enumerate()
            .fold(0.0f64, |m, (i, l)| m.max((v[i] - u[i] - dt * l).abs()))
    }

    /// Solves `v - dt L(v) = u` for `v` by Newton's method with a
    /// backtracking line search on the max-norm residual. Returns `false`
    /// if it does not converge.
    fn implicit_step(&self, u: &[f64], out: &mut [f64], dt: f64, ws: &mut Workspace) -> bool {
        let m = self.disc.unknowns();
        out.copy_from_slice(u);
        out[m] = 0.0;
        let scale = u.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
        let tol = NEWTON_RTOL * scale;
        for _ in 0..NEWTON_MAX_ITER {
            self.disc.apply_with_jacobian(out, &mut ws.rhs, &mut ws.jac);
            let mut res = 0.0f64;
            for i in 0..m {
                // R = v - u - dt L(v); solve (I - dt ∂L) δ = -R
                let r = out[i] - u[i] - dt * ws.rhs[i];
                ws.rhs[i] = -r;
                res = res.max(r.abs());
                ws.jac.lower[i] *= -dt;
                ws.jac.upper[i] *= -dt;
                ws.jac.diag[i] = 1.0 - dt * ws.jac.diag[i];
            }
            if res <= tol {
                return true;
            }
            if !res.is_finite() || !ws.jac.solve_in_place(&mut ws.rhs, &mut ws.scratch) {
                return false;
            }
            let step = ws.rhs[..m].iter().fold(0.0f64, |a, d| a.max(d.abs()));
            if step <= 0.1 * tol {
                for i in 0..m {
                    out[i] += ws.rhs[i];
                }
                return true;
            }
            let mut lambda = 1.0;
            loop {
                for i in 0..m {
                    ws.trial[i] = out[i] + lambda * ws.rhs[i];
                }
                ws.trial[m] = 0.0;
                let trial_res = self.residual_norm(u, &ws.trial, dt, &mut ws.lv);
                if trial_res <= tol {
                    out.copy_from_slice(&ws.trial);
                    return true;
                }
                if trial_res < (1.0 - 1e-4 * lambda) * res {
                    out.copy_from_slice(&ws.trial);
                    break;
                }
                lambda *= 0.5;
                if lambda < 1e-4 {
                    return false;
                }
            }
        }
        false
    }

    /// Integrates from `u0` at `t = 0`, recording `u0` and the states at each
    /// of the strictly increasing `output_times` (all in `(0, t_end]`).
    pub fn solve(&self, u0: &RadialField, t_end: f64, output_times: &[f64]) -> Result<Trajectory> {
        self.check_state(u0)?;
        if u0.min() < 0.0 {
            return Err(Error::Profile(format!(
                "initial data must be non-negative (min {})",
                u0.min()
            )));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::OutOfRange {
                name: "t_end",
                value: t_end,
                range: "(0, inf)".into(),
            });
        }
        if output_times.windows(2).any(|w| w[1] <= w[0])
            || output_times.iter().any(|&t| !(t > 0.0 && t <= t_end))
        {
            return Err(Error::Profile(
                "output times must be strictly increasing in (0, t_end]".into(),
            ));
        }
        let bound = 10.0 * u0.sup_norm() + 1.0;
        let mut traj = Trajectory::new();
        traj.record(0.0, u0);
        let mut ws = self.workspace();
        let mut state = u0.clone();
        let mut next = u0.clone();
        let mut t = 0.0;
        let mut sup = u0.sup_norm();
        let mut dt_implicit = match self.options.stepping {
            TimeStepping::Implicit { dt_max } => dt_max,
            TimeStepping::Explicit { .. } => 0.0,
        };
        for &target in output_times {
            while t < target {
                let remaining = target - t;
                let dt = match self.options.stepping {
                    TimeStepping::Explicit { cfl } => {
                        let dt = self.disc.stable_dt(state.values(), cfl).min(remaining);
                        self.explicit_step(state.values(), next.values_mut(), dt, &mut ws);
                        dt
                    }
                    TimeStepping::Implicit { dt_max } => {
                        let mut halvings = 0;
                        loop {
                            let dt = dt_implicit.min(remaining);
                            if self.implicit_step(state.values(), next.values_mut(), dt, &mut ws) {
                                // recover toward dt_max after a successful step
                                dt_implicit = (dt_implicit * 2.0).min(dt_max);
                                break dt;
                            }
                            halvings += 1;
                            if halvings > MAX_HALVINGS {
                                return Err(Error::Newton { time: t, dt });
                            }
                            dt_implicit = dt * 0.5;
                        }
                    }
                };
                // land exactly on the output time
                t = if dt >= remaining { target } else { t + dt };
                let new_sup = next.sup_norm();
                if !new_sup.is_finite() || new_sup > bound {
                    return Err(Error::BlowUp {
                        time: t,
                        value: new_sup,
                        bound,
                    });
                }
                traj.max_sup_increase = traj.max_sup_increase.max(new_sup - sup);
                sup = new_sup;
                traj.steps += 1;
                std::mem::swap(&mut state, &mut next);
            }
            traj.record(t, &state);
        }
        Ok(traj)
    }
}
