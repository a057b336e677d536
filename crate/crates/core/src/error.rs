use std::fmt;

/// Which side of an admissible interval a value fell on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Below => f.write_str("below"),
            Side::Above => f.write_str("above"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{what}: {count} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        count: String,
        cap: u64,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{quantity} = {value} is {side} the admissible range [{lower}, {upper}]")]
    Domain {
        quantity: &'static str,
        value: f64,
        lower: f64,
        upper: f64,
        side: Side,
    },

    #[error("index {index} outside {lower}..={upper}")]
    InvalidIndex {
        index: usize,
        lower: usize,
        upper: usize,
    },

    #[error("label {label} out of range for dimension {d}")]
    InvalidLabel { label: usize, d: usize },

    #[error("no passing p_crit found below 1 for d = {d} (epsilon = {epsilon})")]
    NoSolution { d: usize, epsilon: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("normalization error: {0}")]
    Normalization(String),

    #[error("classical bound unavailable: {0}")]
    BoundUnavailable(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by enumeration caps or an infeasible search,
    /// as opposed to malformed input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::NoSolution { .. } | Error::BoundUnavailable(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
