//! The standard four-species test case.
//!
//! Diffusivities `d = (1, 10, 0.1, 5)` on `[0, 1]` and positive Gaussian bumps
//! as initial data:
//!
//! ```text
//! u_i(x, 0) = A (0.5 + b_i exp(-((x - c_i) / 0.1)^2))
//! b = (1, 0.8, 1.2, 0.6),  c = (0.3, 0.45, 0.6, 0.75)
//! ```
//!
//! with amplitude `A = 1` by default. Each bump is summed with its mirror
//! images in both walls (`-c_i` and `2 - c_i`), which makes the data
//! compatible with the zero-flux condition: without the images the last bump
//! has slope about 0.06 at `x = 1`, and the resulting boundary layer spoils
//! time differences near `t = 0`.

use crate::grid::{Field, Grid};
use crate::network::{four_species, ReactionNetwork};
use crate::simulator::{DomainKind, SolverConfig};

pub const DIFFUSIVITIES: [f64; 4] = [1.0, 10.0, 0.1, 5.0];
const HEIGHTS: [f64; 4] = [1.0, 0.8, 1.2, 0.6];
const CENTRES: [f64; 4] = [0.3, 0.45, 0.6, 0.75];
const WIDTH: f64 = 0.1;

/// Bump data for species `i` on `grid` (first axis).
pub fn bump(grid: &Grid, i: usize, amplitude: f64) -> Field {
    let c = CENTRES[i];
    Field::from_fn(grid, |x| {
        let g = |centre: f64| {
            let s = (x[0] - centre) / WIDTH;
            (-s * s).exp()
        };
        amplitude * (0.5 + HEIGHTS[i] * (g(c) + g(-c) + g(2.0 - c)))
    })
}

/// Knobs of the benchmark run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchmarkSpec {
    pub points: usize,
    pub amplitude: f64,
    pub t_end: f64,
    /// Number of halvings of `h`, `dt` and the snapshot interval.
    pub refinement: u32,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        Self {
            points: 256,
            amplitude: 1.0,
            t_end: 1.0,
            refinement: 0,
        }
    }
}

impl BenchmarkSpec {
    pub fn with_points(mut self, n: usize) -> Self {
        self.points = n;
        self
    }

    pub fn with_amplitude(mut self, a: f64) -> Self {
        self.amplitude = a;
        self
    }

    pub fn with_t_end(mut self, t: f64) -> Self {
        self.t_end = t;
        self
    }

    /// Halves `h`, `dt` and the snapshot interval once more.
    pub fn refined(mut self) -> Self {
        self.refinement += 1;
        self
    }

    pub fn config(&self) -> SolverConfig {
        self.config_for(four_species())
    }

    /// Same grid, data and steps, with another four-species network.
    pub fn config_for(&self, network: ReactionNetwork) -> SolverConfig {
        let scale = 2f64.powi(self.refinement as i32);
        let n = self.points * scale as usize;
        let grid = Grid::line(1.0, n).expect("benchmark grid is valid");
        let dt = 1.0 / 256.0 / scale;
        SolverConfig {
            network,
            diffusivities: DIFFUSIVITIES.to_vec(),
            initial_data: (0..4).map(|i| bump(&grid, i, self.amplitude)).collect(),
            grid,
            t_end: self.t_end,
            dt_init: dt,
            dt_min: dt * 1e-6,
            dt_max: dt,
            snapshot_interval: 1.0 / 128.0 / scale,
            domain: DomainKind::Bounded,
        }
    }
}

/// The default run: `N = 256`, `T = 1`, `A = 1`.
pub fn four_species_benchmark() -> SolverConfig {
    BenchmarkSpec::default().config()
}
