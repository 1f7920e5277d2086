use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("quadrature did not reach tolerance {tol:e} on [{a}, {b}] (error estimate {err:e})")]
    Quadrature { a: f64, b: f64, tol: f64, err: f64 },

    #[error("time step {dt:e} exceeds the stability limit {limit:e}")]
    Unstable { dt: f64, limit: f64 },

    #[error("boundary value {value:e} at r = 1 violates the Dirichlet condition")]
    Dirichlet { value: f64 },

    #[error("grid mismatch: {0}")]
    Grid(String),

    #[error("solution left the a priori bound at t = {time}: max {value:e} > {bound:e}")]
    BlowUp { time: f64, value: f64, bound: f64 },

    #[error("nonlinear solve failed at t = {time} with dt = {dt:e}")]
    Newton { time: f64, dt: f64 },

    #[error("trajectory too short: {got} output times, need at least {need}")]
    HorizonTooShort { got: usize, need: usize },

    #[error("invalid profile: {0}")]
    Profile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
