//! A priori envelopes for radial solutions: the gradient bound `W(t)`, the
//! constant `A_0` and the barrier subsolutions `v_λ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{abs_pow, stationary_residual_radial, DerivedConstants, ProblemParams};
use crate::radial::RegularizedCoefficients;

/// Solution of `W' + (N-1) a(W²) W = 0`, `W(0) = W0`, with `a(ξ) = ξ^((p-2)/2)`
/// when `epsilon == 0` and the regularized `a_ε` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradientEnvelope {
    params: ProblemParams,
    w0: f64,
    epsilon: f64,
}

impl GradientEnvelope {
    pub fn new(params: ProblemParams, w0: f64, epsilon: f64) -> Result<Self> {
        if !(w0 > 0.0 && w0.is_finite()) {
            return Err(Error::OutOfRange {
                name: "W0",
                value: w0,
                range: "(0, inf)".into(),
            });
        }
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: epsilon,
                range: "[0, 1)".into(),
            });
        }
        Ok(Self {
            params,
            w0,
            epsilon,
        })
    }

    /// Envelope for initial data with Lipschitz constant `lip`: `W0 = 2 lip`.
    pub fn for_initial_lipschitz(params: ProblemParams, lip: f64, epsilon: f64) -> Result<Self> {
        Self::new(params, 2.0 * lip, epsilon)
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    /// Time scale `W0^(2-p) / ((p-2)(N-1))`, or `1/(N-1)` when `p = 2`.
    pub fn characteristic_time(&self) -> f64 {
        let p = self.params.p();
        let nm1 = self.params.nm1();
        if p == 2.0 {
            1.0 / nm1
        } else {
            self.w0.powf(2.0 - p) / ((p - 2.0) * nm1)
        }
    }

    fn closed_form(&self, t: f64) -> f64 {
        let p = self.params.p();
        let nm1 = self.params.nm1();
        if p == 2.0 {
            self.w0 * (-nm1 * t).exp()
        } else {
            (self.w0.powf(2.0 - p) + (p - 2.0) * nm1 * t).powf(-1.0 / (p - 2.0))
        }
    }

    fn integrate(&self, t: f64) -> Result<f64> {
        let coeffs = RegularizedCoefficients::new(self.epsilon, self.params)?;
        let nm1 = self.params.nm1();
        let rate = |w: f64| -nm1 * coeffs.a(w * w) * w;
        let h_max = 1e-3 * self.characteristic_time();
        let steps = (t / h_max).ceil().max(1.0) as usize;
        let h = t / steps as f64;
        let mut w = self.w0;
        for _ in 0..steps {
            let k1 = rate(w);
            let k2 = rate(w + 0.5 * h * k1);
            let k3 = rate(w + 0.5 * h * k2);
            let k4 = rate(w + h * k3);
            w += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        Ok(w)
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::OutOfRange {
                name: "t",
                value: t,
                range: "[0, inf)".into(),
            });
        }
        if t == 0.0 {
            return Ok(self.w0);
        }
        if self.epsilon == 0.0 {
            Ok(self.closed_form(t))
        } else {
            self.integrate(t)
        }
    }
}

/// Smallest `A_0` allowed by the a priori construction:
/// `2^(1/(p-1-q)) + 2 (1 + ||u0||_inf + ||∇u0||_inf)`.
pub fn a_priori_a0(u0_sup: f64, u0_lip: f64, params: &ProblemParams) -> f64 {
    2f64.powf(1.0 / params.gap()) + 2.0 * (1.0 + u0_sup + u0_lip)
}

/// `v_λ(x) = λ^α w_0(|x - x0| / λ)` on the ball `B_λ(x0)`, a stationary
/// solution vanishing on the sphere `|x - x0| = λ`. Only the distance
/// `|x0|` of the center from the origin enters for radial comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Barrier {
    center: f64,
    lambda: f64,
    params: ProblemParams,
    consts: DerivedConstants,
}

impl Barrier {
    pub fn new(params: ProblemParams, center: f64, lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&center) {
            return Err(Error::OutOfRange {
                name: "x0",
                value: center,
                range: "[0, 1)".into(),
            });
        }
        if !(lambda > 0.0 && lambda <= 1.0 - center) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                range: format!("(0, 1 - |x0|] = (0, {}]", 1.0 - center),
            });
        }
        Ok(Self {
            center,
            lambda,
            params,
            consts: params.constants(),
        })
    }

    /// `λ_m = min{1 - |x0|, (m α / c0)^((p-1-q)/(p-q))}`, the largest radius
    /// whose barrier stays below the level `m`.
    pub fn lambda_m(params: &ProblemParams, center: f64, m: f64) -> f64 {
        let c = params.constants();
        (1.0 - center).min((m * c.alpha / c.c0).powf(1.0 / c.alpha))
    }

    /// Barrier of radius [`Barrier::lambda_m`].
    pub fn below_level(params: ProblemParams, center: f64, m: f64) -> Result<Self> {
        Self::new(params, center, Self::lambda_m(&params, center, m))
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    fn scale(&self) -> f64 {
        self.lambda.powf(self.consts.alpha)
    }

    fn check_s(&self, s: f64) -> Result<()> {
        if (0.0..=self.lambda).contains(&s) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                name: "s",
                value: s,
                range: format!("[0, lambda] = [0, {}]", self.lambda),
            })
        }
    }

    /// `v_λ` at distance `s` from the center, via `w_0(ρ) = c0/α (1 - ρ^α)`.
    pub fn value(&self, s: f64) -> Result<f64> {
        self.check_s(s)?;
        let rho = s / self.lambda;
        Ok(self.scale() * self.consts.max_steady_value() * (1.0 - rho.powf(self.consts.alpha)))
    }

    /// `||v_λ||_inf = λ^α c0/α`.
    pub fn sup(&self) -> f64 {
        self.scale() * self.consts.max_steady_value()
    }

    /// `f(s, ∂_s v_λ, ∂²_s v_λ)` from the scaled closed forms; zero in `(0, λ)`.
    pub fn stationarity_residual(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s < self.lambda) {
            return Err(Error::OutOfRange {
                name: "s",
                value: s,
                range: format!("(0, lambda) = (0, {})", self.lambda),
            });
        }
        let c = &self.consts;
        let k = c.alpha - 1.0;
        let rho = s / self.lambda;
        let d1 = -self.scale() / self.lambda * c.c0 * abs_pow(rho, k);
        let d2 = -self.scale() / (self.lambda * self.lambda) * c.c0 * k * rho.powf(k - 1.0);
        stationary_residual_radial(s, d1, d2, &self.params)
    }

    /// Largest value of `v_λ` seen on the sphere `|x| = r`, i.e. at distance
    /// `|r - |x0||` from the center, or `None` when that sphere misses the ball.
    pub fn value_on_sphere(&self, r: f64) -> Option<f64> {
        let s = (r - self.center).abs();
        (s < self.lambda).then(|| self.value(s).expect("inside the ball"))
    }
}
