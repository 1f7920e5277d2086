//! Radial solutions of `u_t = Δ_p u + |∇u|^q` in the unit ball.
//!
//! * [`params`]: admissible exponents, derived constants, radial operators.
//! * [`steady`]: the one-parameter family of flat-topped steady states.
//! * [`radial`]: the regularized finite-volume parabolic solver.
//! * [`envelopes`]: gradient envelope, a priori bound and barrier subsolutions.
//! * [`diagnostics`]: profile identities and the convergence report.

pub mod diagnostics;
pub mod envelopes;
pub mod error;
pub mod params;
pub mod quadrature;
pub mod radial;
pub mod steady;

pub use diagnostics::{
    convergence_report, profile_diagnostics, trajectory_checks, Check, ConvergenceReport,
    ProfileDiagnostics, ReportOptions,
};
pub use envelopes::{a_priori_a0, Barrier, GradientEnvelope};
pub use error::{Error, Result};
pub use params::{chi, derive_constants, DerivedConstants, ProblemParams};
pub use radial::{
    EpsilonPolicy, RadialField, RadialGrid, RadialSolver, RegularizedCoefficients, SolverOptions,
    SourceScheme, TimeStepping, Trajectory,
};
pub use steady::{theta_from_max, SteadyState};
