//! The steady-state family `w_theta`.
//!
//! Each member is flat on `[0, theta]` and strictly decreasing on
//! `(theta, 1]` with
//! `w_theta(r) = c0 ∫_{max(r, theta)}^1 (ρ - theta^β ρ^(1-β))^(1/(p-1-q)) dρ`.
//! The integrand has an algebraic zero at `ρ = theta`, so the quadrature is
//! graded geometrically toward that point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{chi, DerivedConstants, ProblemParams};
use crate::quadrature::{graded_breaks, integrate_panels};

pub const DEFAULT_QUAD_TOL: f64 = 1e-12;
pub const DEFAULT_THETA_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 60;
const GRADING_DEPTH: u32 = 48;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteadyState {
    params: ProblemParams,
    consts: DerivedConstants,
    theta: f64,
    quad_tol: f64,
}

impl SteadyState {
    pub fn new(params: ProblemParams, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                range: "[0, 1]".into(),
            });
        }
        Ok(Self {
            params,
            consts: params.constants(),
            theta,
            quad_tol: DEFAULT_QUAD_TOL,
        })
    }

    pub fn with_quad_tol(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn params(&self) -> &ProblemParams {
        &self.params
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.consts
    }

    fn exponent(&self) -> f64 {
        1.0 / self.params.gap()
    }

    /// `ρ - theta^β ρ^(1-β)`, computed as `-ρ expm1(-β ln1p((ρ - theta)/theta))`
    /// so the cancellation near `ρ = theta` is exact.
    fn inner(&self, rho: f64) -> f64 {
        let th = self.theta;
        if th == 0.0 {
            return rho;
        }
        let d = rho - th;
        if d <= 0.0 {
            return 0.0;
        }
        -rho * (-self.consts.beta * (d / th).ln_1p()).exp_m1()
    }

    fn integrand(&self, rho: f64) -> f64 {
        let v = self.inner(rho);
        if v <= 0.0 {
            0.0
        } else {
            v.powf(self.exponent())
        }
    }

    fn check_r(r: f64) -> Result<()> {
        if (0.0..=1.0).contains(&r) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: "[0, 1]".into(),
            })
        }
    }

    fn integral(&self, lo: f64, hi: f64, tol: f64) -> Result<f64> {
        if lo >= hi {
            return Ok(0.0);
        }
        let f = |x: f64| self.integrand(x);
        let breaks = graded_breaks(self.theta, lo, hi, GRADING_DEPTH);
        Ok(integrate_panels(&f, &breaks, tol / self.consts.c0)?.value)
    }

    /// `w_theta(r)` to within `quad_tol`; exactly zero at `r = 1`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        Self::check_r(r)?;
        let lo = r.max(self.theta);
        Ok(self.consts.c0 * self.integral(lo, 1.0, self.quad_tol)?)
    }

    /// Values at ascending radii in `[0, 1]`, accumulated panel by panel from
    /// `r = 1` inward. The total quadrature error stays within `quad_tol`.
    pub fn sample(&self, radii: &[f64]) -> Result<Vec<f64>> {
        for &r in radii {
            Self::check_r(r)?;
        }
        if radii.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Profile("radii must be ascending".into()));
        }
        let mut knots: Vec<f64> = radii.iter().map(|&r| r.max(self.theta)).collect();
        knots.push(1.0);
        let pieces = knots.len().max(1) as f64;
        let tol = self.quad_tol / pieces;
        let mut out = vec![0.0; radii.len()];
        let mut acc = 0.0;
        for i in (0..radii.len()).rev() {
            acc += self.consts.c0 * self.integral(knots[i], knots[i + 1], tol)?;
            out[i] = acc;
        }
        Ok(out)
    }

    /// `∂_r w_theta(r)`: zero on `[0, theta]`, `-c0 (r - theta^β r^(1-β))^(1/(p-1-q))` beyond.
    pub fn eval_derivative(&self, r: f64) -> Result<f64> {
        Self::check_r(r)?;
        Ok(-self.consts.c0 * self.integrand(r))
    }

    /// `∂²_r w_theta(r)` on `(theta, 1]`, from differentiating the closed-form derivative.
    pub fn eval_second_derivative(&self, r: f64) -> Result<f64> {
        Self::check_r(r)?;
        if r <= self.theta {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: format!("(theta, 1] = ({}, 1]", self.theta),
            });
        }
        let k = self.exponent();
        let beta = self.consts.beta;
        let inner = self.inner(r);
        let ratio = if self.theta == 0.0 {
            0.0
        } else {
            (beta * (self.theta / r).ln()).exp()
        };
        Ok(-self.consts.c0 * k * inner.powf(k - 1.0) * (1.0 + (beta - 1.0) * ratio))
    }

    /// `||w_theta||_inf = w_theta(0)`.
    pub fn max_value(&self) -> Result<f64> {
        self.eval(0.0)
    }

    /// First integral `r^(β-1) chi(∂_r w) + r^β/β - theta^β/β`, identically
    /// zero on `(theta, 1)`.
    pub fn first_integral_residual(&self, r: f64) -> Result<f64> {
        if !(r > self.theta && r < 1.0) {
            return Err(Error::OutOfRange {
                name: "r",
                value: r,
                range: format!("(theta, 1) = ({}, 1)", self.theta),
            });
        }
        let beta = self.consts.beta;
        let dw = self.eval_derivative(r)?;
        Ok(r.powf(beta - 1.0) * chi(dw, &self.params)
            + (r.powf(beta) - self.theta.powf(beta)) / beta)
    }
}

const TOP_ROUNDING: f64 = 1e-12;

/// Inverts the strictly decreasing map `theta -> ||w_theta||_inf` by
/// bisection. `tol` bounds the final bracket width in `theta`. Values
/// within rounding (`1e-12` relative) above `c0/alpha` map to `0`, so the
/// quadrature value of `||w_0||_inf` is accepted.
pub fn theta_from_max(max: f64, params: &ProblemParams, tol: f64) -> Result<f64> {
    let top = params.constants().max_steady_value();
    if !(0.0..=top * (1.0 + TOP_ROUNDING)).contains(&max) {
        return Err(Error::OutOfRange {
            name: "M",
            value: max,
            range: format!("[0, c0/alpha] = [0, {top}]"),
        });
    }
    if max == 0.0 {
        return Ok(1.0);
    }
    if max >= top {
        return Ok(0.0);
    }
    // relative accuracy matters when M is tiny
    let quad_tol = DEFAULT_QUAD_TOL.min(DEFAULT_QUAD_TOL * max);
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let m = SteadyState::new(*params, mid)?
            .with_quad_tol(quad_tol)
            .max_value()?;
        if m > max {
            lo = mid;
        } else if m < max {
            hi = mid;
        } else {
            return Ok(mid);
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn semilinear() -> ProblemParams {
        ProblemParams::new(2.0, 0.5, 2).unwrap()
    }

    #[test]
    fn trivial_member_vanishes() {
        let w = SteadyState::new(semilinear(), 1.0).unwrap();
        for r in [0.0, 0.3, 1.0] {
            assert_eq!(w.eval(r).unwrap(), 0.0);
            assert_eq!(w.eval_derivative(r).unwrap(), 0.0);
        }
        assert_eq!(w.max_value().unwrap(), 0.0);
    }

    #[test]
    fn theta_zero_closed_form() {
        let w = SteadyState::new(semilinear(), 0.0).unwrap();
        assert!((w.eval(0.0).unwrap() - 1.0 / 27.0).abs() < 1e-13);
        assert!((w.eval_derivative(1.0).unwrap() + 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(w.eval(1.0).unwrap(), 0.0);
    }

    #[test]
    fn plateau_and_edge() {
        let w = SteadyState::new(semilinear(), 0.5).unwrap();
        assert_eq!(w.eval_derivative(0.25).unwrap(), 0.0);
        assert_eq!(w.eval_derivative(0.5).unwrap(), 0.0);
        assert_eq!(w.eval(0.1).unwrap(), w.eval(0.5).unwrap());
        let m = w.max_value().unwrap();
        assert!(m > 0.0 && m < 1.0 / 27.0);
    }

    #[test]
    fn out_of_range_inputs() {
        let w = SteadyState::new(semilinear(), 0.5).unwrap();
        assert!(w.eval(1.5).is_err());
        assert!(w.eval(-0.1).is_err());
        assert!(w.first_integral_residual(0.4).is_err());
        assert!(w.first_integral_residual(1.0).is_err());
        assert!(SteadyState::new(semilinear(), 1.2).is_err());
    }

    #[test]
    fn first_integral_examples() {
        let w = SteadyState::new(semilinear(), 0.0).unwrap();
        for r in [0.1, 0.5, 0.9] {
            assert!(w.first_integral_residual(r).unwrap().abs() < 1e-12);
        }
        let w = SteadyState::new(semilinear(), 0.5).unwrap();
        assert!(w.first_integral_residual(0.75).unwrap().abs() < 1e-10);
    }

    #[test]
    fn sample_matches_pointwise() {
        let w = SteadyState::new(semilinear(), 0.37).unwrap();
        let radii: Vec<f64> = (0..=64).map(|i| f64::from(i) / 64.0).collect();
        let s = w.sample(&radii).unwrap();
        for (r, v) in radii.iter().zip(&s) {
            assert!((w.eval(*r).unwrap() - v).abs() < 2e-12, "r = {r}");
        }
        assert!(w.sample(&[0.5, 0.2]).is_err());
    }

    #[test]
    fn inversion_endpoints() {
        let pp = semilinear();
        assert_eq!(theta_from_max(0.0, &pp, 1e-10).unwrap(), 1.0);
        assert_eq!(theta_from_max(1.0 / 27.0, &pp, 1e-10).unwrap(), 0.0);
        let m = SteadyState::new(pp, 0.3).unwrap().max_value().unwrap();
        assert!((theta_from_max(m, &pp, 1e-12).unwrap() - 0.3).abs() < 1e-9);
        let err = theta_from_max(0.04, &pp, 1e-10).unwrap_err();
        assert!(err.to_string().contains("c0/alpha"), "{err}");
        assert!(theta_from_max(-1e-3, &pp, 1e-10).is_err());
    }
}
