//! Error type shared across the library.

use thiserror::Error;

/// Unified error for construction, parsing, and numeric preconditions.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector or tensor had the wrong length for the declared dimensions.
    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },

    /// An index was out of range for the declared dimensions.
    #[error("index out of range for {what}: {index} >= {bound}")]
    IndexOutOfRange {
        what: String,
        index: usize,
        bound: usize,
    },

    /// Expression text failed to parse; `offset` is a byte offset into the
    /// source string.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// Expression evaluation hit an undefined operation (division by zero,
    /// log of a non-positive number, fractional power of a negative base).
    #[error("domain error in `{context}`: {message}")]
    Domain { context: String, message: String },

    /// A structural precondition failed (non-stochastic row outside the
    /// renormalization tolerance, non-finite entry, empty grid, and so on).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// A belief kernel puts mass on a cell that the reference product
    /// measure assigns zero probability.
    #[error(
        "absolute continuity fails for player {player} at own type {own_type}: \
         kernel mass {mass} on null cell (state {state}, opponent cell {opponent_cell})"
    )]
    NotAbsolutelyContinuous {
        player: usize,
        own_type: usize,
        state: usize,
        opponent_cell: usize,
        mass: f64,
    },

    /// The pure-profile enumeration guard tripped: the profile space is
    /// larger than the configured ceiling.
    #[error("pure profile space too large: {size} profiles exceeds the guard of {guard}")]
    SearchSpaceTooLarge { size: f64, guard: f64 },

    /// An operation received inputs that belong to different games or
    /// incompatible shapes.
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
}

impl Error {
    /// Convenience constructor for [`Error::Invalid`].
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
