//! Shared fixtures for the benchmarks.

use radhj::{EpsilonPolicy, ProblemParams, RadialField, RadialGrid, RadialSolver, SolverOptions};

pub fn semilinear() -> ProblemParams {
    ProblemParams::new(2.0, 0.5, 2).expect("admissible")
}

pub fn parabolic_solver(cells: usize, options: SolverOptions) -> (RadialSolver, RadialField) {
    let grid = RadialGrid::new(cells).expect("cells >= 2");
    let solver = RadialSolver::with_policy(grid, semilinear(), EpsilonPolicy::default(), options)
        .expect("valid epsilon");
    let u0 = RadialField::from_fn(grid, |r| 0.01 * (1.0 - r * r)).expect("finite");
    (solver, u0)
}
