use thiserror::Error;

/// Errors raised by the simulator and its analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid needs a power-of-two point count >= 8, got {0}")]
    GridSize(usize),

    #[error("degenerate interval [{min}, {max}]")]
    DegenerateInterval { min: f64, max: f64 },

    #[error("wave packet not contained in the grid: {0}")]
    PacketOutsideGrid(String),

    #[error("negative-momentum weight {weight:e} exceeds threshold {threshold:e}")]
    NegativeMomentum { weight: f64, threshold: f64 },

    #[error("channel {n} outside clock range [-{j}, {j}]")]
    ChannelOutOfRange { n: i64, j: u32 },

    #[error("norm drift {drift:e} exceeds tolerance {tolerance:e}")]
    NormDrift { drift: f64, tolerance: f64 },

    #[error("boundary occupancy {occupancy:e} exceeds {limit:e}; the packet wraps around the periodic grid")]
    BoundaryContamination { occupancy: f64, limit: f64 },

    #[error("collision not finished: region occupancy {occupancy:e} exceeds {limit:e} at t_final")]
    CollisionNotFinished { occupancy: f64, limit: f64 },

    #[error("theta grid of {points} points undersamples {channels} clock channels (need >= {required})")]
    UndersampledTheta {
        points: usize,
        channels: usize,
        required: usize,
    },

    #[error("density has a negative value {0:e} beyond rounding noise")]
    NegativeDensity(f64),

    #[error("no probability mass inside window [{0}, {1}]")]
    EmptyWindow(f64, f64),

    #[error("time grids differ")]
    GridMismatch,

    #[error("instance too large for the theta-grid evolver: {0}")]
    GuardExceeded(String),

    #[error("operation requires {expected} mode")]
    WrongMode { expected: &'static str },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
