//! Numerical laboratory for dissipative reaction-diffusion systems.
//!
//! The crate simulates `du_i/dt - d_i Delta u_i = f_i(u)` on boxes with
//! zero-flux walls. It also checks the quantities that control global
//! existence for such systems when the diffusivities differ:
//!
//! - [`network`]: polynomial rate laws and sampled checks of quasi-positivity,
//!   mass dissipation/conservation, entropy dissipation and growth bounds.
//! - [`grid`], [`spectral`], [`duhamel`]: cell-centred grids, the exact
//!   discrete Neumann heat semigroup, spectral `C^k` norms and a
//!   variation-of-constants solver.
//! - [`simulator`]: positivity-preserving Strang splitting with step
//!   rejection, plus mass/entropy/norm diagnostics.
//! - [`proof`]: entropy variables, the auxiliary dual problem and the
//!   inequality margins built on them.
//! - [`lemma2`]: empirical constants of the `C^1`/`C^2` interpolation
//!   estimates and the semigroup smoothing constants.
//!
//! The `book/` directory holds a narrative guide; its code samples are
//! compiled and run as doc-tests of this crate.

pub mod benchmark;
pub mod duhamel;
pub mod error;
pub mod field_io;
pub mod grid;
pub mod lemma2;
pub mod network;
pub mod proof;
pub mod simulator;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{Field, Grid};
pub use network::ReactionNetwork;
pub use simulator::{simulate, SolverConfig, Trajectory};
pub use spectral::NormTriple;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/networks.md")]
    mod networks {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/simulating.md")]
    mod simulating {}
    #[doc = include_str!("../../../book/src/proof.md")]
    mod proof {}
    #[doc = include_str!("../../../book/src/lemma2.md")]
    mod lemma2 {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
