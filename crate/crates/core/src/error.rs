use thiserror::Error;

/// Errors reported by the diagnostic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A time parameter was zero, negative, or not finite.
    #[error("time parameter must be positive and finite, got {0}")]
    InvalidTime(f64),

    /// A tolerance was outside `(0, 1)`.
    #[error("tolerance must lie in (0, 1), got {0}")]
    InvalidTolerance(f64),

    /// An input coordinate was NaN or infinite.
    #[error("coordinate must be finite, got {0}")]
    NonFiniteCoordinate(f64),

    /// A circle coordinate fell outside the fundamental domain `[0, 1)`.
    #[error("circle coordinate must lie in [0, 1), got {0}")]
    CoordinateOutOfRange(f64),

    /// An operation that needs at least one point received none.
    #[error("point set is empty")]
    EmptyPointSet,

    /// A kernel specification violated its contract.
    #[error("invalid kernel spec: {0}")]
    InvalidKernel(String),

    /// An integration interval was malformed or longer than the circle.
    #[error("invalid interval [{a}, {b}]: {reason}")]
    InvalidInterval { a: f64, b: f64, reason: &'static str },

    /// The spectral energy route would need more frequencies than the cap.
    #[error("spectral method infeasible: needs {required} frequencies, cap is {cap}")]
    SpectralInfeasible { required: u64, cap: u64 },

    /// The sphere kernel was asked for a time below its series floor.
    #[error("sphere heat kernel requires t >= {min:e}, got {got:e}")]
    TimeBelowFloor { got: f64, min: f64 },

    /// A sphere point was not a unit vector.
    #[error("sphere point must be a unit vector, |x| = {norm}")]
    NotUnitVector { norm: f64 },

    /// A torus point had the wrong dimension.
    #[error("torus point has dimension {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },

    /// The discrepancy bound is not applicable (degenerate point set).
    #[error("bound inapplicable: point set has discrepancy {0}, need 0 < d_n < 1")]
    BoundInapplicable(f64),

    /// Calibration could not find a constant on the search grid.
    #[error("calibration failed: bound does not hold for any c <= {0}")]
    CalibrationFailed(f64),

    /// A schedule of times was not strictly ascending.
    #[error("time schedule must be strictly ascending and positive")]
    InvalidSchedule,

    /// A computed energy profile increased beyond numerical slack,
    /// which indicates a kernel evaluation bug or corrupted input.
    #[error("energy profile not nonincreasing: E({t_lo}) = {e_lo} < E({t_hi}) = {e_hi} beyond slack {slack:e}")]
    NotMonotone { t_lo: f64, e_lo: f64, t_hi: f64, e_hi: f64, slack: f64 },

    /// A generator specification had invalid parameters.
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    /// A step-approximation accuracy parameter was out of range.
    #[error("step approximation eps out of supported range, got {0}")]
    InvalidEps(f64),

    /// A serialized point set could not be parsed.
    #[error("malformed point file: {0}")]
    MalformedFile(String),

    /// An underlying I/O operation failed.
    #[error("io error: {0}")]
    Io(String),

    /// A parameter outside any of the categories above.
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
