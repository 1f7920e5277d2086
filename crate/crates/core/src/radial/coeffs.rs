use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ProblemParams;

/// Regularized diffusion `a_ε(ξ) = (ε² + ξ)^((p-2)/2)` and source
/// `b_ε(ξ) = (ε² + ξ)^(q/2) - ε^q`, both frozen at their `ξ = 1/ε` values
/// beyond that point. `ξ` is the squared radial gradient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegularizedCoefficients {
    epsilon: f64,
    params: ProblemParams,
    #[serde(skip)]
    eps2: f64,
    #[serde(skip)]
    eps_q: f64,
    #[serde(skip)]
    cap: f64,
}

impl RegularizedCoefficients {
    pub fn new(epsilon: f64, params: ProblemParams) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: epsilon,
                range: "(0, 1)".into(),
            });
        }
        Ok(Self {
            epsilon,
            params,
            eps2: epsilon * epsilon,
            eps_q: epsilon.powf(params.q()),
            cap: 1.0 / epsilon,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    fn check_xi(xi: f64) -> Result<()> {
        if xi >= 0.0 {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                name: "xi",
                value: xi,
                range: "[0, inf)".into(),
            })
        }
    }

    pub fn coeff_a(&self, xi: f64) -> Result<f64> {
        Self::check_xi(xi)?;
        Ok(self.a(xi))
    }

    pub fn coeff_b(&self, xi: f64) -> Result<f64> {
        Self::check_xi(xi)?;
        Ok(self.b(xi))
    }

    #[inline]
    pub(crate) fn a(&self, xi: f64) -> f64 {
        let p = self.params.p();
        if p == 2.0 {
            1.0
        } else {
            (self.eps2 + xi.min(self.cap)).powf(0.5 * (p - 2.0))
        }
    }

    /// `a_ε'(ξ)`, zero on the frozen plateau.
    #[inline]
    pub(crate) fn a_prime(&self, xi: f64) -> f64 {
        let p = self.params.p();
        if p == 2.0 || xi >= self.cap {
            0.0
        } else {
            0.5 * (p - 2.0) * (self.eps2 + xi).powf(0.5 * (p - 4.0))
        }
    }

    #[inline]
    pub(crate) fn b(&self, xi: f64) -> f64 {
        let x = self.eps2 + xi.min(self.cap);
        x.powf(0.5 * self.params.q()) - self.eps_q
    }

    #[inline]
    pub(crate) fn b_prime(&self, xi: f64) -> f64 {
        if xi >= self.cap {
            0.0
        } else {
            let q = self.params.q();
            0.5 * q * (self.eps2 + xi).powf(0.5 * q - 1.0)
        }
    }

    /// Radial flux `a_ε(g²) g` and its derivative in `g`.
    #[inline]
    pub(crate) fn flux(&self, g: f64) -> (f64, f64) {
        let xi = g * g;
        let a = self.a(xi);
        (a * g, a + 2.0 * xi * self.a_prime(xi))
    }
}
