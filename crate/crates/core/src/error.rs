use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 4")]
    InvalidGridSize(usize),

    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },

    #[error("function flagged real has imaginary part {0:e}")]
    NotReal(f64),

    #[error("bandwidth ({m}, {n}) reaches Nyquist for grid size {grid_size}")]
    BandwidthExceedsNyquist { m: usize, n: usize, grid_size: usize },

    #[error("index ({m}, {n}) outside coefficient bandwidth ({m_band}, {n_band})")]
    OutOfBandwidth { m: usize, n: usize, m_band: usize, n_band: usize },

    #[error("argument {0} is congruent to 0 mod 2π")]
    SingularArgument(f64),

    #[error("point ({x}, {y}) lies within {eps:e} of a singular line; use the direct kernel")]
    SingularTube { x: f64, y: f64, eps: f64 },

    #[error("truncation cap K={cap} outside [1, {max}]")]
    InvalidTruncation { cap: usize, max: usize },

    #[error("order {got} below minimum {min}")]
    OrderTooSmall { got: usize, min: usize },

    #[error("region at scale n={0} is empty (2^(n-3) < 1)")]
    EmptyRegion(u32),

    #[error("x={x} does not lie in any [α_m, β_m] at scale n={n}")]
    NotInRegion { x: f64, n: u32 },

    #[error("resolution too coarse: {what} needs grid size >= {needed}, got {got}")]
    Resolution { what: &'static str, needed: usize, got: usize },

    #[error("grid mismatch: {0} vs {1}")]
    GridMismatch(usize, usize),

    #[error("negative argument {0} for a Young function")]
    NegativeInput(f64),

    #[error("non-finite sample encountered")]
    NonFinite,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
