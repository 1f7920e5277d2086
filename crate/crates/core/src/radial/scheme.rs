//! Semi-discrete finite-volume operator on the radial mesh.
//!
//! Node `i < n` owns the control volume `[r_{i-1/2}, r_{i+1/2}] ∩ [0, 1]`
//! in the measure `r^(N-1) dr`. Fluxes `a_ε(g²) g` are evaluated with the
//! face gradient `g = (u_{i+1} - u_i)/h`; at the origin only the outer face
//! contributes, which reproduces `2N a (u_1 - u_0)/h²`. The node `r_n = 1`
//! carries the Dirichlet value and is not an unknown.

use serde::{Deserialize, Serialize};

use super::coeffs::RegularizedCoefficients;
use super::grid::RadialGrid;

/// Discretization of the gradient source `b_ε(|∂_r u|²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceScheme {
    /// `b_ε(((u_{i+1} - u_{i-1})/2h)²)`. Second order; monotone only while
    /// diffusion dominates the source on the cell scale.
    Centered,
    /// `b_ε(min(D⁻u, 0)² + max(D⁺u, 0)²)`. First order and monotone under
    /// the same step restriction as the diffusion.
    #[default]
    Upwind,
}

/// Tridiagonal matrix stored by bands; row `i` is
/// `lower[i] x_{i-1} + diag[i] x_i + upper[i] x_{i+1}`.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(m: usize) -> Self {
        Self {
            lower: vec![0.0; m],
            diag: vec![0.0; m],
            upper: vec![0.0; m],
        }
    }

    /// Thomas algorithm, overwriting `rhs` with the solution. Returns `false`
    /// on a vanishing pivot.
    pub fn solve_in_place(&self, rhs: &mut [f64], scratch: &mut Vec<f64>) -> bool {
        let m = rhs.len();
        scratch.clear();
        scratch.resize(m, 0.0);
        let mut denom = self.diag[0];
        if denom == 0.0 || !denom.is_finite() {
            return false;
        }
        scratch[0] = self.upper[0] / denom;
        rhs[0] /= denom;
        for i in 1..m {
            denom = self.diag[i] - self.lower[i] * scratch[i - 1];
            if denom == 0.0 || !denom.is_finite() {
                return false;
            }
            scratch[i] = self.upper[i] / denom;
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) / denom;
        }
        for i in (0..m - 1).rev() {
            rhs[i] -= scratch[i] * rhs[i + 1];
        }
        true
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Discretization {
    pub coeffs: RegularizedCoefficients,
    pub source: SourceScheme,
    cells: usize,
    inv_h: f64,
    /// `area[i] / vol[i]` for the outer face `i + 1/2` of node `i`.
    out_w: Vec<f64>,
    /// `area / vol` for the inner face `i - 1/2` of node `i` (zero at the origin).
    in_w: Vec<f64>,
}

impl Discretization {
    pub fn new(grid: RadialGrid, coeffs: RegularizedCoefficients, source: SourceScheme) -> Self {
        let n = grid.cells();
        let h = grid.h();
        let dim = coeffs.params().dim() as i32;
        let nd = f64::from(dim);
        let face = |i: usize| (i as f64 + 0.5) * h;
        let mut out_w = Vec::with_capacity(n);
        let mut in_w = Vec::with_capacity(n);
        for i in 0..n {
            let outer = face(i);
            let inner = if i == 0 { 0.0 } else { face(i - 1) };
            let vol = (outer.powi(dim) - inner.powi(dim)) / nd;
            out_w.push(outer.powi(dim - 1) / vol);
            in_w.push(if i == 0 {
                0.0
            } else {
                inner.powi(dim - 1) / vol
            });
        }
        Self {
            coeffs,
            source,
            cells: n,
            inv_h: 1.0 / h,
            out_w,
            in_w,
        }
    }

    /// Number of unknowns (`n`, the boundary node excluded).
    pub fn unknowns(&self) -> usize {
        self.cells
    }

    #[inline]
    fn left(u: &[f64], i: usize) -> f64 {
        // ghost u_{-1} = u_1
        if i == 0 {
            u[1]
        } else {
            u[i - 1]
        }
    }

    /// Squared source gradient at node `i` and its partial derivatives with
    /// respect to `(u_{i-1}, u_i, u_{i+1})`, the left slot referring to `u_1`
    /// at the origin.
    #[inline]
    fn source_xi(&self, u: &[f64], i: usize) -> (f64, [f64; 3]) {
        let ih = self.inv_h;
        let ul = Self::left(u, i);
        match self.source {
            SourceScheme::Centered => {
                if i == 0 {
                    return (0.0, [0.0; 3]);
                }
                let g = 0.5 * (u[i + 1] - ul) * ih;
                (g * g, [-g * ih, 0.0, g * ih])
            }
            SourceScheme::Upwind => {
                let m = ((u[i] - ul) * ih).min(0.0);
                let mx = ((u[i + 1] - u[i]) * ih).max(0.0);
                let dl = -2.0 * m * ih;
                let dr = 2.0 * mx * ih;
                (m * m + mx * mx, [dl, -dl - dr, dr])
            }
        }
    }

    /// `L(u)` at the unknown nodes; `u` includes the boundary node.
    pub fn apply(&self, u: &[f64], out: &mut [f64]) {
        let n = self.cells;
        let ih = self.inv_h;
        let mut flux_in = 0.0;
        for i in 0..n {
            let (flux_out, _) = self.coeffs.flux((u[i + 1] - u[i]) * ih);
            let diff = self.out_w[i] * flux_out - self.in_w[i] * flux_in;
            let (xi, _) = self.source_xi(u, i);
            out[i] = diff + self.coeffs.b(xi);
            flux_in = flux_out;
        }
    }

    /// `L(u)` and its Jacobian with respect to the unknowns.
    pub fn apply_with_jacobian(&self, u: &[f64], out: &mut [f64], jac: &mut Tridiagonal) {
        let n = self.cells;
        let ih = self.inv_h;
        let mut flux_in = 0.0;
        let mut dflux_in = 0.0;
        for i in 0..n {
            let (flux_out, dflux_out) = self.coeffs.flux((u[i + 1] - u[i]) * ih);
            let wo = self.out_w[i];
            let wi = self.in_w[i];
            out[i] = wo * flux_out - wi * flux_in;
            // d/du of wo F((u_{i+1}-u_i)/h) - wi F((u_i - u_{i-1})/h)
            jac.upper[i] = wo * dflux_out * ih;
            jac.diag[i] = -(wo * dflux_out + wi * dflux_in) * ih;
            jac.lower[i] = wi * dflux_in * ih;

            let (xi, dxi) = self.source_xi(u, i);
            out[i] += self.coeffs.b(xi);
            let bp = self.coeffs.b_prime(xi);
            if i == 0 {
                jac.upper[0] += bp * (dxi[0] + dxi[2]);
            } else {
                jac.lower[i] += bp * dxi[0];
                jac.upper[i] += bp * dxi[2];
            }
            jac.diag[i] += bp * dxi[1];
            flux_in = flux_out;
            dflux_in = dflux_out;
        }
        // u_n is pinned
        jac.upper[n - 1] = 0.0;
    }

    /// Largest explicit Euler step keeping every diagonal coefficient of
    /// `u + dt L(u)` non-negative at the current state, scaled by `cfl`.
    pub fn stable_dt(&self, u: &[f64], cfl: f64) -> f64 {
        let n = self.cells;
        let ih = self.inv_h;
        let mut rate: f64 = 0.0;
        let mut dflux_in = 0.0;
        for i in 0..n {
            let (_, dflux_out) = self.coeffs.flux((u[i + 1] - u[i]) * ih);
            let mut d = (self.out_w[i] * dflux_out + self.in_w[i] * dflux_in) * ih;
            let (xi, dxi) = self.source_xi(u, i);
            d += (self.coeffs.b_prime(xi) * dxi[1]).abs();
            rate = rate.max(d);
            dflux_in = dflux_out;
        }
        if rate > 0.0 {
            cfl / rate
        } else {
            f64::INFINITY
        }
    }
}
