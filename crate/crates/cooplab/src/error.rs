use thiserror::Error;

/// Errors surfaced by game construction, decomposition, classification,
/// dynamics, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected_rows}x{expected_cols}, got {got_rows}x{got_cols}")]
    DimensionMismatch {
        expected_rows: usize,
        expected_cols: usize,
        got_rows: usize,
        got_cols: usize,
    },

    #[error("non-finite payoff entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("invalid mixed strategy: {0}")]
    InvalidProfile(String),

    #[error("epsilon must be non-negative")]
    NegativeEpsilon,

    #[error("unsupported game class `{0}`")]
    UnsupportedClass(String),

    #[error("input game is not a normalized harmonic game")]
    NotHarmonic,

    #[error("both dimensions must be at least {min}")]
    DimensionTooSmall { min: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("cycle index ({row}, {col}) out of range for a {rows}x{cols} game")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("numerical stall: switch interval {interval:.3e} in w at log-time {s:.6}")]
    NumericalStall { s: f64, interval: f64 },

    #[error("not enough traced path data to evaluate the certificate")]
    InsufficientPathData,

    #[error("threshold bracket invalid: labels at endpoints are {lo_label} and {hi_label}")]
    BracketInvalid { lo_label: String, hi_label: String },

    #[error("components violate subspace membership: {0}")]
    MembershipViolation(String),

    #[error("unknown builtin game `{0}`")]
    UnknownName(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid CSV: {0}")]
    InvalidCsv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
