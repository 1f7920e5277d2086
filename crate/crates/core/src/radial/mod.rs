//! Regularized radial parabolic problem: coefficients, mesh, finite-volume
//! operator and time integration.

mod coeffs;
mod grid;
mod scheme;
mod solver;

pub use coeffs::RegularizedCoefficients;
pub use grid::{RadialField, RadialGrid};
pub use scheme::SourceScheme;
pub use solver::{
    EpsilonPolicy, RadialSolver, SolverOptions, TimeStepping, Trajectory, DEFAULT_EPSILON,
};
