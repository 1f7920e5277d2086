//! Problem parameters, derived constants and the pointwise radial operators.
//!
//! The equation is `u_t = Δ_p u + |∇u|^q` in the unit ball of `R^N` with
//! `p >= 2`, `0 < q < p - 1` and `N >= 2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents `(p, q)` and space dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ProblemParams {
    p: f64,
    q: f64,
    dim: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    p: f64,
    q: f64,
    dim: u32,
}

impl TryFrom<RawParams> for ProblemParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        ProblemParams::new(raw.p, raw.q, raw.dim)
    }
}

impl From<ProblemParams> for RawParams {
    fn from(pp: ProblemParams) -> Self {
        RawParams {
            p: pp.p,
            q: pp.q,
            dim: pp.dim,
        }
    }
}

impl ProblemParams {
    pub fn new(p: f64, q: f64, dim: u32) -> Result<Self> {
        if !(p.is_finite() && q.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "p = {p} and q = {q} must be finite"
            )));
        }
        if p < 2.0 {
            return Err(Error::InvalidParams(format!("p >= 2 violated (p = {p})")));
        }
        if q <= 0.0 {
            return Err(Error::InvalidParams(format!("q > 0 violated (q = {q})")));
        }
        if q >= p - 1.0 {
            return Err(Error::InvalidParams(format!(
                "q < p - 1 violated (q = {q}, p - 1 = {})",
                p - 1.0
            )));
        }
        if dim < 2 {
            return Err(Error::InvalidParams(format!("N >= 2 violated (N = {dim})")));
        }
        Ok(Self { p, q, dim })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// `N - 1` as a float.
    pub(crate) fn nm1(&self) -> f64 {
        f64::from(self.dim) - 1.0
    }

    /// `p - 1 - q`, strictly positive.
    pub(crate) fn gap(&self) -> f64 {
        self.p - 1.0 - self.q
    }

    pub fn constants(&self) -> DerivedConstants {
        derive_constants(self)
    }
}

/// Constants attached to the steady-state family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// `(p - q) / (p - 1 - q)`, the exponent of `w_0`.
    pub alpha: f64,
    /// `1 + (N - 1)(p - 1 - q) / (p - 1)`.
    pub beta: f64,
    /// Scale of the steady-state derivative,
    /// `((p - 1 - q) / ((p - 1) beta))^(1 / (p - 1 - q))`.
    pub c0: f64,
}

impl DerivedConstants {
    /// `||w_0||_inf = c0 / alpha`, the largest steady maximum.
    pub fn max_steady_value(&self) -> f64 {
        self.c0 / self.alpha
    }
}

/// The constant `c0` uses `(p - 1) beta` in the denominator: this is the
/// value for which `w_theta` solves the stationary equation and its first
/// integral is constant.
pub fn derive_constants(params: &ProblemParams) -> DerivedConstants {
    let (p, q) = (params.p, params.q);
    let gap = params.gap();
    let alpha = (p - q) / gap;
    let beta = 1.0 + params.nm1() * gap / (p - 1.0);
    let c0 = (gap / ((p - 1.0) * beta)).powf(1.0 / gap);
    DerivedConstants { alpha, beta, c0 }
}

/// `|x|^e` for `e >= 0`, with `0^0 = 1`.
#[inline]
pub(crate) fn abs_pow(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        let ax = x.abs();
        if ax == 0.0 {
            0.0
        } else {
            ax.powf(e)
        }
    }
}

/// `sign(x) |x|^e` for `e > 0`.
#[inline]
pub(crate) fn signed_pow(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        abs_pow(x, e).copysign(x)
    }
}

/// `chi(z) = (p - 1)/(p - 1 - q) |z|^(p - 2 - q) z`.
///
/// Odd and strictly increasing. Evaluated as `sign(z) |z|^(p - 1 - q)` so the
/// negative exponent `p - 2 - q < 0` never meets `z = 0`.
pub fn chi(z: f64, params: &ProblemParams) -> f64 {
    let gap = params.gap();
    (params.p - 1.0) / gap * signed_pow(z, gap)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "r",
            value: r,
            range: "(0, 1)".into(),
        })
    }
}

/// Radial p-Laplacian part `f_0(r, mu, zeta) = -(p-1)|mu|^(p-2) zeta - (N-1)/r |mu|^(p-2) mu`.
pub fn p_laplace_residual_radial(
    r: f64,
    mu: f64,
    zeta: f64,
    params: &ProblemParams,
) -> Result<f64> {
    check_radius(r)?;
    let w = abs_pow(mu, params.p - 2.0);
    Ok(-(params.p - 1.0) * w * zeta - params.nm1() / r * w * mu)
}

/// Full stationary operator `f(r, mu, zeta) = f_0(r, mu, zeta) - |mu|^q`.
pub fn stationary_residual_radial(
    r: f64,
    mu: f64,
    zeta: f64,
    params: &ProblemParams,
) -> Result<f64> {
    Ok(p_laplace_residual_radial(r, mu, zeta, params)? - abs_pow(mu, params.q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: f64, q: f64, n: u32) -> ProblemParams {
        ProblemParams::new(p, q, n).unwrap()
    }

    #[test]
    fn constants_semilinear() {
        let c = derive_constants(&pp(2.0, 0.5, 2));
        assert!((c.alpha - 3.0).abs() < 1e-15);
        assert!((c.beta - 1.5).abs() < 1e-15);
        assert!((c.c0 - 1.0 / 9.0).abs() < 1e-15);
        assert!((c.max_steady_value() - 1.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn constants_linear_exponent() {
        let c = derive_constants(&pp(3.0, 1.0, 2));
        assert!((c.alpha - 2.0).abs() < 1e-15);
        assert!((c.beta - 1.5).abs() < 1e-15);
        assert!((c.c0 - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_inadmissible() {
        let err = ProblemParams::new(2.0, 1.5, 2).unwrap_err();
        assert!(err.to_string().contains("q < p - 1"), "{err}");
        assert!(ProblemParams::new(1.5, 0.2, 2)
            .unwrap_err()
            .to_string()
            .contains("p >= 2"));
        assert!(ProblemParams::new(2.0, 0.0, 2)
            .unwrap_err()
            .to_string()
            .contains("q > 0"));
        assert!(ProblemParams::new(2.0, 0.5, 1)
            .unwrap_err()
            .to_string()
            .contains("N >= 2"));
        assert!(ProblemParams::new(f64::NAN, 0.5, 2).is_err());
    }

    #[test]
    fn chi_values() {
        assert_eq!(chi(0.0, &pp(2.0, 0.5, 2)), 0.0);
        assert!((chi(-0.5, &pp(3.0, 1.0, 2)) + 1.0).abs() < 1e-15);
        assert!((chi(1.0, &pp(2.0, 0.5, 2)) - 2.0).abs() < 1e-15);
        assert!(chi(-1e-300, &pp(2.0, 0.5, 2)).is_finite());
    }

    #[test]
    fn residual_values() {
        let p = pp(2.0, 0.5, 2);
        assert_eq!(stationary_residual_radial(0.5, 0.0, 0.0, &p).unwrap(), 0.0);
        let f = stationary_residual_radial(0.5, -1.0, 0.0, &p).unwrap();
        assert!((f - 1.0).abs() < 1e-15);
        let f0 = p_laplace_residual_radial(0.5, -1.0, 0.0, &p).unwrap();
        assert!((f0 - 2.0).abs() < 1e-15);
        assert!(stationary_residual_radial(0.0, -1.0, 0.0, &p).is_err());
        assert!(stationary_residual_radial(1.0, -1.0, 0.0, &p).is_err());
    }

    #[test]
    fn degenerate_weight_at_zero_gradient() {
        // p = 2: |mu|^0 = 1, the operator is linear
        let lin = p_laplace_residual_radial(0.5, 0.0, 3.0, &pp(2.0, 0.5, 2)).unwrap();
        assert!((lin + 3.0).abs() < 1e-15);
        // p > 2: the diffusion degenerates
        let deg = p_laplace_residual_radial(0.5, 0.0, 3.0, &pp(3.0, 0.5, 2)).unwrap();
        assert_eq!(deg, 0.0);
    }

    #[test]
    fn serde_validates() {
        let ok: ProblemParams = serde_json::from_str(r#"{"p":2.0,"q":0.5,"dim":2}"#).unwrap();
        assert_eq!(ok, pp(2.0, 0.5, 2));
        assert!(serde_json::from_str::<ProblemParams>(r#"{"p":2.0,"q":1.5,"dim":2}"#).is_err());
    }
}
