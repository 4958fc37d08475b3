//! Cosine-basis operators: transforms, Laplacian, heat semigroup and norms.
//!
//! Coefficients use the normalisation
//! `psi(x_j) = sum_k c_k cos(k pi x_j / L)`, so a constant field has
//! coefficient vector `(c, 0, 0, ...)` and `cos(pi x / L)` has a single unit
//! coefficient at `k = 1`. The Laplacian multiplies mode `k` by `-lambda_k`,
//! with `lambda_k` the three-point Neumann eigenvalue; the semigroup
//! `e^{t d Delta}` multiplies it by `exp(-t d lambda_k)` and has no time
//! discretisation error.
//!
//! Derivatives for the `C^1`/`C^2` norms are spectral: the cosine series is
//! differentiated term by term with the continuum wavenumbers `k pi / L` and
//! evaluated at the nodes. The gradient part of a norm is the largest
//! single-axis derivative; the second-derivative part is the largest entry
//! of the Hessian.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{AxisBasis, Field, Grid};

/// Applies `op(line_in, line_out)` to every line of `data` along `axis`.
fn along_axis(data: &[f64], shape: &[usize], axis: usize, op: impl Fn(&[f64], &mut [f64])) -> Vec<f64> {
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![0.0; data.len()];
    let mut line = vec![0.0; n];
    let mut res = vec![0.0; n];
    for o in 0..outer {
        for i in 0..inner {
            let base = o * n * inner + i;
            for j in 0..n {
                line[j] = data[base + j * inner];
            }
            op(&line, &mut res);
            for j in 0..n {
                out[base + j * inner] = res[j];
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Synth {
    /// `sum_k c_k cos(k pi x / L)`
    Value,
    /// d/dx of the series.
    First,
    /// d^2/dx^2 of the series.
    Second,
}

fn analyse_line(ax: &AxisBasis, line: &[f64], out: &mut [f64]) {
    let n = ax.n;
    for (k, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for (j, &v) in line.iter().enumerate() {
            s += v * ax.cos[j * n + k];
        }
        let w = if k == 0 { 1.0 } else { 2.0 };
        *o = w * s / n as f64;
    }
}

fn synth_line(ax: &AxisBasis, kind: Synth, coeffs: &[f64], out: &mut [f64]) {
    let n = ax.n;
    for (j, o) in out.iter_mut().enumerate() {
        let row = j * n;
        *o = match kind {
            Synth::Value => coeffs.iter().zip(&ax.cos[row..row + n]).map(|(c, b)| c * b).sum(),
            Synth::First => -coeffs
                .iter()
                .zip(&ax.sin[row..row + n])
                .zip(&ax.wavenumber)
                .map(|((c, b), k)| c * b * k)
                .sum::<f64>(),
            Synth::Second => -coeffs
                .iter()
                .zip(&ax.cos[row..row + n])
                .zip(&ax.wavenumber)
                .map(|((c, b), k)| c * b * k * k)
                .sum::<f64>(),
        };
    }
}

fn synthesize(grid: &Grid, coeffs: &[f64], kinds: &[Synth]) -> Vec<f64> {
    let mut data = coeffs.to_vec();
    for (a, (ax, &kind)) in grid.axes.iter().zip(kinds).enumerate() {
        data = along_axis(&data, grid.points(), a, |l, o| synth_line(ax, kind, l, o));
    }
    data
}

/// Cosine coefficients of `field`, flat mode order matching the node order.
pub fn cosine_coefficients(field: &Field) -> Vec<f64> {
    let grid = field.grid();
    let mut data = field.values().to_vec();
    for (a, ax) in grid.axes.iter().enumerate() {
        data = along_axis(&data, grid.points(), a, |l, o| analyse_line(ax, l, o));
    }
    data
}

/// Inverse of [`cosine_coefficients`].
pub fn from_cosine_coefficients(coeffs: &[f64], grid: &Grid) -> Result<Field> {
    if coeffs.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: coeffs.len(),
        });
    }
    let values = synthesize(grid, coeffs, &vec![Synth::Value; grid.dim()]);
    Ok(Field::from_parts(grid.clone(), values))
}

pub(crate) fn synthesize_values(grid: &Grid, coeffs: &[f64]) -> Field {
    Field::from_parts(grid.clone(), synthesize(grid, coeffs, &vec![Synth::Value; grid.dim()]))
}

/// `d * Delta_h field`.
pub fn laplacian(field: &Field, d: f64) -> Field {
    let grid = field.grid();
    let eig = grid.eigenvalues();
    let c: Vec<f64> = cosine_coefficients(field)
        .iter()
        .zip(&eig)
        .map(|(c, l)| -d * l * c)
        .collect();
    synthesize_values(grid, &c)
}

/// `e^{t d Delta_h} field`.
pub fn apply_heat_semigroup(field: &Field, d: f64, t: f64) -> Result<Field> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    if !(d > 0.0) {
        return Err(Error::InvalidConfig(format!("diffusivity must be positive, got {d}")));
    }
    Ok(HeatPropagator::new(field.grid(), d, t).apply(field))
}

/// Precomputed mode multipliers `exp(-t d lambda_k)` for repeated use.
#[derive(Clone, Debug)]
pub struct HeatPropagator {
    grid: Grid,
    factors: Vec<f64>,
}

impl HeatPropagator {
    pub fn new(grid: &Grid, d: f64, t: f64) -> Self {
        let factors = grid.eigenvalues().iter().map(|l| (-t * d * l).exp()).collect();
        Self {
            grid: grid.clone(),
            factors,
        }
    }

    pub fn apply(&self, field: &Field) -> Field {
        let c: Vec<f64> = cosine_coefficients(field)
            .iter()
            .zip(&self.factors)
            .map(|(c, f)| c * f)
            .collect();
        synthesize_values(&self.grid, &c)
    }
}

/// Discrete `C^0`, `C^1`, `C^2` norms of a field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormTriple {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl NormTriple {
    pub const ZERO: NormTriple = NormTriple {
        c0: 0.0,
        c1: 0.0,
        c2: 0.0,
    };

    /// Componentwise maximum, used for sup-in-time norms.
    pub fn max(self, other: NormTriple) -> NormTriple {
        NormTriple {
            c0: self.c0.max(other.c0),
            c1: self.c1.max(other.c1),
            c2: self.c2.max(other.c2),
        }
    }
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Spectral derivative `d/dx_axis` of `field` at the nodes.
pub fn derivative(field: &Field, axis: usize) -> Vec<f64> {
    let c = cosine_coefficients(field);
    derivative_from_coeffs(field.grid(), &c, &[axis])
}

fn derivative_from_coeffs(grid: &Grid, coeffs: &[f64], axes: &[usize]) -> Vec<f64> {
    let mut kinds = vec![Synth::Value; grid.dim()];
    for &a in axes {
        kinds[a] = match kinds[a] {
            Synth::Value => Synth::First,
            _ => Synth::Second,
        };
    }
    synthesize(grid, coeffs, &kinds)
}

/// `c0 = max |psi|`, `c1 = c0 + max_a max |d_a psi|`,
/// `c2 = c1 + max_{a<=b} max |d_a d_b psi|`.
pub fn norms(field: &Field) -> NormTriple {
    let grid = field.grid();
    let c = cosine_coefficients(field);
    let c0 = field.sup_norm();
    let mut g: f64 = 0.0;
    let mut s: f64 = 0.0;
    for a in 0..grid.dim() {
        g = g.max(sup(&derivative_from_coeffs(grid, &c, &[a])));
        for b in a..grid.dim() {
            s = s.max(sup(&derivative_from_coeffs(grid, &c, &[a, b])));
        }
    }
    NormTriple {
        c0,
        c1: c0 + g,
        c2: c0 + g + s,
    }
}

/// `c0` and `c1` only; skips the Hessian.
pub fn c1_norm(field: &Field) -> (f64, f64) {
    let grid = field.grid();
    let c = cosine_coefficients(field);
    let c0 = field.sup_norm();
    let g = (0..grid.dim())
        .map(|a| sup(&derivative_from_coeffs(grid, &c, &[a])))
        .fold(0.0, f64::max);
    (c0, c0 + g)
}
