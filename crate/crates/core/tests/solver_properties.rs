//! Invariants of the regularized radial solver and of the diagnostics built
//! on top of it.

use proptest::prelude::*;
use radhj::diagnostics::centered_derivative;
use radhj::{
    convergence_report, profile_diagnostics, trajectory_checks, Barrier, EpsilonPolicy, Error,
    ProblemParams, RadialField, RadialGrid, RadialSolver, ReportOptions, SolverOptions,
    SteadyState, TimeStepping,
};

fn semilinear() -> ProblemParams {
    ProblemParams::new(2.0, 0.5, 2).unwrap()
}

fn solver(n: usize, params: ProblemParams) -> RadialSolver {
    let grid = RadialGrid::new(n).unwrap();
    RadialSolver::with_policy(grid, params, EpsilonPolicy::default(), SolverOptions::default())
        .unwrap()
}

fn uniform_times(t_end: f64, count: usize) -> Vec<f64> {
    (1..=count).map(|k| t_end * k as f64 / count as f64).collect()
}

fn parabolic(grid: RadialGrid, amp: f64) -> RadialField {
    RadialField::from_fn(grid, |r| amp * (1.0 - r * r)).unwrap()
}

fn bump(grid: RadialGrid, center: f64, width: f64, height: f64) -> RadialField {
    RadialField::from_fn(grid, |r| {
        let x = (r - center) / width;
        if x.abs() < 1.0 {
            height * (1.0 - x * x).powi(2)
        } else {
            0.0
        }
    })
    .unwrap()
}

fn steady(grid: RadialGrid, params: ProblemParams, theta: f64) -> RadialField {
    let w = SteadyState::new(params, theta).unwrap();
    RadialField::new(grid, w.sample(&grid.nodes()).unwrap()).unwrap()
}

#[test]
fn zero_stays_zero() {
    let s = solver(32, semilinear());
    let u0 = RadialField::zeros(s.grid());
    let traj = s.solve(&u0, 1.0, &uniform_times(1.0, 4)).unwrap();
    assert!(traj.states.iter().all(|u| u.sup_norm() == 0.0));
}

#[test]
fn nonzero_boundary_value_is_rejected() {
    let s = solver(32, semilinear());
    let u0 = RadialField::from_fn(s.grid(), |r| 1.0 - 0.5 * r).unwrap();
    assert!(matches!(s.solve(&u0, 1.0, &[1.0]), Err(Error::Dirichlet { .. })));
    assert!(matches!(s.step(&u0, 1e-3), Err(Error::Dirichlet { .. })));
}

#[test]
fn negative_initial_data_is_rejected() {
    let s = solver(32, semilinear());
    let u0 = RadialField::from_fn(s.grid(), |r| -0.01 * (1.0 - r)).unwrap();
    assert!(s.solve(&u0, 1.0, &[1.0]).is_err());
}

#[test]
fn explicit_step_beyond_limit_is_unstable() {
    let grid = RadialGrid::new(32).unwrap();
    let opts = SolverOptions {
        stepping: TimeStepping::Explicit { cfl: 0.9 },
        ..SolverOptions::default()
    };
    let s = RadialSolver::with_policy(grid, semilinear(), EpsilonPolicy::Fixed(1e-2), opts).unwrap();
    let u0 = parabolic(grid, 0.01);
    let limit = s.stable_dt(&u0);
    assert!(limit.is_finite() && limit > 0.0);
    assert!(s.step(&u0, 0.5 * limit).is_ok());
    assert!(matches!(s.step(&u0, 2.0 * limit), Err(Error::Unstable { .. })));
}

#[test]
fn explicit_and_implicit_agree_for_moderate_epsilon() {
    let grid = RadialGrid::new(32).unwrap();
    let params = semilinear();
    let run = |stepping| {
        let opts = SolverOptions {
            stepping,
            ..SolverOptions::default()
        };
        let s = RadialSolver::with_policy(grid, params, EpsilonPolicy::Fixed(1e-2), opts).unwrap();
        s.solve(&parabolic(grid, 0.01), 0.2, &[0.2]).unwrap()
    };
    let ex = run(TimeStepping::Explicit { cfl: 0.5 });
    let im = run(TimeStepping::Implicit { dt_max: 1e-5 });
    let d = ex.last().unwrap().sup_distance(im.last().unwrap()).unwrap();
    assert!(d < 1e-4 * 0.01, "{d}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn runs_respect_trajectory_invariants(
        center in 0.0f64..0.6, width in 0.15f64..0.4, height in 0.001f64..0.05,
    ) {
        let s = solver(64, semilinear());
        let u0 = bump(s.grid(), center, width, height);
        prop_assume!(u0.boundary_value() == 0.0);
        let traj = s.solve(&u0, 1.0, &uniform_times(1.0, 10)).unwrap();
        let eps = s.coefficients().epsilon();
        for c in trajectory_checks(&traj, &semilinear(), eps).unwrap() {
            prop_assert!(c.passed, "{:?}", c);
        }
    }

    #[test]
    fn comparison_ordering(amp in 0.001f64..0.05, factor in 0.0f64..1.0, width in 0.2f64..0.5) {
        let s = solver(64, semilinear());
        let b = bump(s.grid(), 0.3, width, amp);
        let a = RadialField::new(s.grid(), b.values().iter().map(|v| factor * v).collect()).unwrap();
        let times = uniform_times(1.0, 8);
        let ta = s.solve(&a, 1.0, &times).unwrap();
        let tb = s.solve(&b, 1.0, &times).unwrap();
        for (ua, ub) in ta.states.iter().zip(&tb.states) {
            for (x, y) in ua.values().iter().zip(ub.values()) {
                prop_assert!(*x <= *y + 1e-6);
            }
        }
    }
}

#[test]
fn p_greater_than_two_respects_invariants() {
    let params = ProblemParams::new(3.0, 1.0, 3).unwrap();
    let s = solver(64, params);
    let u0 = parabolic(s.grid(), 0.05);
    let traj = s.solve(&u0, 2.0, &uniform_times(2.0, 10)).unwrap();
    for c in trajectory_checks(&traj, &params, s.coefficients().epsilon()).unwrap() {
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn stationarity_improves_under_refinement() {
    let params = semilinear();
    let mut dists = Vec::new();
    for n in [128, 256, 512] {
        let s = solver(n, params);
        let u0 = steady(s.grid(), params, 0.3);
        let traj = s.solve(&u0, 1.0, &uniform_times(1.0, 5)).unwrap();
        let worst = traj
            .states
            .iter()
            .map(|u| u.sup_distance(&u0).unwrap())
            .fold(0.0f64, f64::max);
        dists.push(worst);
    }
    for w in dists.windows(2) {
        assert!(w[1] <= 0.7 * w[0], "{dists:?}");
    }
}

#[test]
fn time_regularity() {
    // a square-root modulus in time predicts d(t/4) ≈ d(t)/2; allow 50% slack
    let s = solver(128, semilinear());
    let u0 = parabolic(s.grid(), 0.01);
    let traj = s.solve(&u0, 0.04, &[0.01, 0.02, 0.04]).unwrap();
    let d1 = traj.states[1].sup_distance(&traj.states[0]).unwrap();
    let d4 = traj.states[3].sup_distance(&traj.states[0]).unwrap();
    assert!(d1 > 0.0 && d1 <= d4);
    assert!(d1 <= 0.75 * d4, "{d1} {d4}");
}

#[test]
fn barrier_stays_below_solution() {
    let params = semilinear();
    let s = solver(128, params);
    let u0 = parabolic(s.grid(), 0.01);
    let rho = 0.6;
    let m = 0.01 * (1.0 - rho * rho);
    let barrier = Barrier::below_level(params, 0.0, m).unwrap();
    assert!(barrier.lambda() <= rho);
    let traj = s.solve(&u0, 2.0, &uniform_times(2.0, 8)).unwrap();
    for u in &traj.states {
        for (r, v) in s.grid().nodes().iter().zip(u.values()) {
            if let Some(b) = barrier.value_on_sphere(*r) {
                assert!(*v >= b - 1e-9, "r {r}: {v} < {b}");
            }
        }
    }
}

#[test]
fn first_integral_flattens_along_the_run() {
    let params = semilinear();
    let s = solver(256, params);
    let u0 = parabolic(s.grid(), 0.01);
    let times = uniform_times(0.4, 8);
    let traj = s.solve(&u0, 0.4, &times).unwrap();
    let report = convergence_report(&traj, &params, &ReportOptions::default()).unwrap();
    let lo = report.theta_fit + 0.1;
    let variance = |u: &RadialField| {
        let d = profile_diagnostics(u, &params);
        let vals: Vec<f64> = d
            .radii
            .iter()
            .zip(&d.first_integral)
            .filter(|(r, _)| **r > lo && **r < 0.9)
            .map(|(_, v)| *v)
            .collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64
    };
    let half = traj.len() / 2;
    let series: Vec<f64> = traj.states[half..].iter().map(variance).collect();
    for w in series.windows(2) {
        assert!(w[1] <= w[0], "{series:?}");
    }
}

#[test]
fn steady_first_integral_error_scales_with_h() {
    let params = semilinear();
    let beta = params.constants().beta;
    for k in 0..10 {
        let theta = 0.08 * f64::from(k);
        let mut ratios = Vec::new();
        for n in [64usize, 128, 256] {
            let grid = RadialGrid::new(n).unwrap();
            let d = profile_diagnostics(&steady(grid, params, theta), &params);
            let gamma = theta.powf(beta) / beta;
            let worst = d
                .radii
                .iter()
                .zip(&d.first_integral)
                .filter(|(r, _)| **r > theta + 0.05 && **r < 0.95)
                .map(|(_, v)| (v - gamma).abs())
                .fold(0.0f64, f64::max);
            ratios.push(worst / grid.h());
        }
        assert!(ratios.iter().all(|c| *c <= 1.0), "theta {theta}: {ratios:?}");
    }
}

#[test]
fn centered_derivative_is_exact_on_quadratics() {
    let grid = RadialGrid::new(16).unwrap();
    let u = RadialField::from_fn(grid, |r| 1.0 - r * r).unwrap();
    let d = centered_derivative(&u);
    for (i, r) in grid.nodes().iter().enumerate().skip(1).take(14) {
        assert!((d[i] + 2.0 * r).abs() < 1e-12);
    }
}

#[test]
fn reports_are_deterministic() {
    let params = semilinear();
    let run = || {
        let s = solver(64, params);
        let traj = s.solve(&parabolic(s.grid(), 0.01), 0.8, &uniform_times(0.8, 8)).unwrap();
        let rep = convergence_report(&traj, &params, &ReportOptions::default()).unwrap();
        serde_json::to_string(&rep).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn stationary_run_fits_its_own_theta() {
    let params = semilinear();
    let s = solver(256, params);
    let u0 = steady(s.grid(), params, 0.3);
    let traj = s.solve(&u0, 1.0, &uniform_times(1.0, 8)).unwrap();
    let rep = convergence_report(&traj, &params, &ReportOptions::default()).unwrap();
    assert!((rep.theta_fit - 0.3).abs() <= 0.02, "{}", rep.theta_fit);
    let top = u0.sup_norm();
    assert!(rep.distance_series.iter().all(|d| *d <= 5e-3 * top), "{:?}", rep.distance_series);
    assert!(rep.converged);
}
