//! Cell-centred rectangular grids and scalar fields on them.
//!
//! A [`Grid`] is the box `[0, L_1] x ... x [0, L_n]` with `N_a` cells per
//! axis and nodes at the cell centres `x_j = (j + 1/2) L / N`. Field values
//! are stored row-major: axis 0 is the outermost index.
//!
//! Each grid carries a precomputed cosine basis per axis. The basis functions
//! `cos(k pi x / L)`, `k = 0..N-1`, sampled at the nodes are the eigenvectors
//! of the three-point Laplacian with reflecting (zero-flux) ghost nodes, so
//! the spectral operators in [`crate::spectral`] are exact for that operator.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Dense cosine/sine tables for one axis.
#[derive(Debug)]
pub(crate) struct AxisBasis {
    pub n: usize,
    /// `cos[j * n + k] = cos(k pi (j + 1/2) / n)`
    pub cos: Vec<f64>,
    /// `sin[j * n + k] = sin(k pi (j + 1/2) / n)`
    pub sin: Vec<f64>,
    /// Three-point Neumann eigenvalues `(2 / h^2)(1 - cos(k pi / n))`.
    pub eig: Vec<f64>,
    /// Continuum wavenumbers `k pi / L`.
    pub wavenumber: Vec<f64>,
}

impl AxisBasis {
    fn new(n: usize, length: f64) -> Self {
        let h = length / n as f64;
        let mut cos = vec![0.0; n * n];
        let mut sin = vec![0.0; n * n];
        for j in 0..n {
            for k in 0..n {
                let theta = PI * k as f64 * (j as f64 + 0.5) / n as f64;
                cos[j * n + k] = theta.cos();
                sin[j * n + k] = theta.sin();
            }
        }
        let eig = (0..n)
            .map(|k| 2.0 / (h * h) * (1.0 - (PI * k as f64 / n as f64).cos()))
            .collect();
        let wavenumber = (0..n).map(|k| PI * k as f64 / length).collect();
        Self {
            n,
            cos,
            sin,
            eig,
            wavenumber,
        }
    }
}

/// A rectangular cell-centred grid with zero-flux walls.
#[derive(Clone)]
pub struct Grid {
    extent: Vec<f64>,
    points: Vec<usize>,
    pub(crate) axes: Arc<Vec<AxisBasis>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("extent", &self.extent)
            .field("points", &self.points)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.extent == other.extent && self.points == other.points
    }
}

pub const MIN_POINTS: usize = 4;
pub const MAX_DIM: usize = 3;

impl Grid {
    pub fn new(extent: Vec<f64>, points: Vec<usize>) -> Result<Self> {
        let dim = extent.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidGrid(format!("dimension must be 1..={MAX_DIM}, got {dim}")));
        }
        if points.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "{} extents but {} point counts",
                dim,
                points.len()
            )));
        }
        if let Some(l) = extent.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidGrid(format!("extent must be positive, got {l}")));
        }
        if let Some(n) = points.iter().find(|&&n| n < MIN_POINTS) {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points per axis, got {n}"
            )));
        }
        let axes = extent
            .iter()
            .zip(&points)
            .map(|(&l, &n)| AxisBasis::new(n, l))
            .collect();
        Ok(Self {
            extent,
            points,
            axes: Arc::new(axes),
        })
    }

    /// `[0, length]` with `n` cells.
    pub fn line(length: f64, n: usize) -> Result<Self> {
        Self::new(vec![length], vec![n])
    }

    /// `[0, lx] x [0, ly]` with `nx x ny` cells.
    pub fn rect(lx: f64, ly: f64, nx: usize, ny: usize) -> Result<Self> {
        Self::new(vec![lx, ly], vec![nx, ny])
    }

    /// Box standing in for the whole space: each side is `8 sqrt(d_max t_end)`
    /// (at least `min_extent`), so that compactly supported data stays far
    /// from the walls over the horizon.
    pub fn cauchy_box(dim: usize, d_max: f64, t_end: f64, min_extent: f64, n: usize) -> Result<Self> {
        let side = (8.0 * (d_max * t_end).sqrt()).max(min_extent);
        Self::new(vec![side; dim], vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.extent.len()
    }

    pub fn extent(&self) -> &[f64] {
        &self.extent
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    /// Grid spacing per axis.
    pub fn spacing(&self) -> Vec<f64> {
        self.extent
            .iter()
            .zip(&self.points)
            .map(|(l, &n)| l / n as f64)
            .collect()
    }

    /// Largest spacing over the axes.
    pub fn max_spacing(&self) -> f64 {
        self.spacing().into_iter().fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.points.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().iter().product()
    }

    pub fn volume(&self) -> f64 {
        self.extent.iter().product()
    }

    /// Multi-index of a flat node (or mode) index.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.points[a];
            flat /= self.points[a];
        }
        idx
    }

    /// Physical coordinates of node `flat`.
    pub fn node(&self, flat: usize) -> Vec<f64> {
        let h = self.spacing();
        self.multi_index(flat)
            .iter()
            .zip(&h)
            .map(|(&j, &h)| (j as f64 + 0.5) * h)
            .collect()
    }

    /// Discrete Neumann Laplacian eigenvalue of every mode, flat order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.len())
            .map(|flat| {
                self.multi_index(flat)
                    .iter()
                    .zip(self.axes.iter())
                    .map(|(&k, ax)| ax.eig[k])
                    .sum()
            })
            .collect()
    }
}

/// Scalar values at the nodes of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("field contains non-finite values".into()));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        Self::from_parts(grid.clone(), vec![c; grid.len()])
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.node(i))).collect();
        Self::from_parts(grid.clone(), values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_parts(self.grid.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Field) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + alpha * b)
            .collect();
        Self::from_parts(self.grid.clone(), values)
    }

    pub fn scale(&self, alpha: f64) -> Self {
        self.map(|v| alpha * v)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Midpoint-rule integral over the box.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_volume()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0.0)
    }

    /// Largest absolute pointwise difference.
    pub fn max_abs_diff(&self, other: &Field) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid::line(1.0, 3).is_err());
        assert!(Grid::line(0.0, 8).is_err());
        assert!(Grid::line(-1.0, 8).is_err());
        assert!(Grid::new(vec![], vec![]).is_err());
        assert!(Grid::new(vec![1.0; 4], vec![4; 4]).is_err());
        assert!(Grid::new(vec![1.0, 1.0], vec![4]).is_err());
        assert!(Grid::rect(1.0, 2.0, 4, 8).is_ok());
    }

    #[test]
    fn nodes_are_cell_centres() {
        let g = Grid::rect(1.0, 2.0, 4, 8).unwrap();
        assert_eq!(g.len(), 32);
        assert_eq!(g.node(0), vec![0.125, 0.125]);
        assert_eq!(g.node(9), vec![0.375, 0.375]);
        assert_eq!(g.multi_index(31), vec![3, 7]);
        for i in 0..g.len() {
            let x = g.node(i);
            assert!(x[0] > 0.0 && x[0] < 1.0 && x[1] > 0.0 && x[1] < 2.0);
        }
    }

    #[test]
    fn cauchy_box_scales_with_diffusion_length() {
        let g = Grid::cauchy_box(2, 4.0, 1.0, 1.0, 16).unwrap();
        assert_eq!(g.extent(), &[16.0, 16.0]);
        let g = Grid::cauchy_box(1, 1e-6, 1.0, 1.0, 16).unwrap();
        assert_eq!(g.extent(), &[1.0]);
    }

    #[test]
    fn field_basics() {
        let g = Grid::line(2.0, 8).unwrap();
        let f = Field::constant(&g, 1.5);
        assert_eq!(f.integral(), 3.0);
        assert_eq!(f.mean(), 1.5);
        assert!(Field::new(g.clone(), vec![0.0; 7]).is_err());
        assert!(Field::new(g.clone(), vec![f64::NAN; 8]).is_err());
        let x = Field::from_fn(&g, |x| x[0]);
        assert_eq!(x.min(), 0.125);
        assert_eq!(x.max(), 1.875);
    }
}
