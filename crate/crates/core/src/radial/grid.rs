use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform mesh `r_i = i / n`, `i = 0..=n`, on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadialGrid {
    cells: usize,
}

impl RadialGrid {
    pub fn new(cells: usize) -> Result<Self> {
        if cells < 2 {
            return Err(Error::Grid(format!("need at least 2 cells, got {cells}")));
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        1.0 / self.cells as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        i as f64 / self.cells as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.cells).map(|i| self.r(i)).collect()
    }
}

/// A profile sampled on every node of a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialField {
    grid: RadialGrid,
    values: Vec<f64>,
}

impl RadialField {
    pub fn new(grid: RadialGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Profile("non-finite value".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: RadialGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: RadialGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().into_iter().map(f).collect())
    }

    /// Resamples scattered `(r, value)` pairs onto the grid by piecewise
    /// linear interpolation, which preserves monotonicity of the data.
    /// Radii must cover `[0, 1]`.
    pub fn from_samples(grid: RadialGrid, samples: &[(f64, f64)]) -> Result<Self> {
        let mut pts = samples.to_vec();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.len() < 2 {
            return Err(Error::Profile("need at least two samples".into()));
        }
        if pts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Profile("duplicate radius".into()));
        }
        let (first, last) = (pts[0].0, pts[pts.len() - 1].0);
        if first > 0.0 || last < 1.0 {
            return Err(Error::Profile(format!(
                "samples span [{first}, {last}], need [0, 1]"
            )));
        }
        let mut j = 0;
        let values = grid
            .nodes()
            .into_iter()
            .map(|r| {
                while pts[j + 1].0 < r {
                    j += 1;
                }
                let (r0, v0) = pts[j];
                let (r1, v1) = pts[j + 1];
                v0 + (v1 - v0) * (r - r0) / (r1 - r0)
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> RadialGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(u_{i+1} - u_i) / h` for `i = 0..n`.
    pub fn forward_differences(&self) -> Vec<f64> {
        let inv_h = self.grid.cells as f64;
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]) * inv_h)
            .collect()
    }

    /// Smallest and largest forward difference.
    pub fn gradient_extrema(&self) -> (f64, f64) {
        self.forward_differences()
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
                (lo.min(d), hi.max(d))
            })
    }

    pub fn sup_distance(&self, other: &RadialField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::Grid("fields live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Sup distance to a field on a grid whose cell count is a multiple of
    /// ours, compared at the shared nodes.
    pub fn sup_distance_coarse(&self, fine: &RadialField) -> Result<f64> {
        let (nc, nf) = (self.grid.cells, fine.grid.cells);
        if nf % nc != 0 {
            return Err(Error::Grid(format!(
                "{nf} cells is not a refinement of {nc}"
            )));
        }
        let stride = nf / nc;
        Ok((0..=nc).fold(0.0, |m, i| {
            m.max((self.values[i] - fine.values[i * stride]).abs())
        }))
    }

    pub fn boundary_value(&self) -> f64 {
        *self.values.last().expect("grid has nodes")
    }
}
