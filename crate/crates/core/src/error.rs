use crate::simulator::Trajectory;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("negative state component u[{index}] = {value}")]
    NegativeInput { index: usize, value: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("negative time t = {0}")]
    NegativeTime(f64),

    #[error("negative shift k = {0}")]
    NegativeShift(f64),

    #[error("empty time mesh")]
    EmptyTimeMesh,

    #[error("need at least {needed} snapshots, got {got}")]
    TooFewSnapshots { needed: usize, got: usize },

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Step size fell below `dt_min`; the partial trajectory ends at the last valid state.
    #[error("blowup suspected at t = {time}: step size {dt} below dt_min")]
    BlowupSuspected {
        time: f64,
        dt: f64,
        partial: Box<Trajectory>,
    },

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64, partial: Box<Trajectory> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
