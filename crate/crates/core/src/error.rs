use thiserror::Error;

use crate::model::Site;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration has {found} spins but the volume has {expected} sites")]
    DomainMismatch { expected: usize, found: usize },

    #[error("spin value {value} exceeds the spin bound {bound}")]
    SpinOutOfRange { value: i32, bound: u32 },

    #[error("{what}: requested {requested}, budget is {limit}")]
    Budget {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("potential does not vanish on a zero spin: V({x}, {y}, {sx}, {sy}) = {value}")]
    AssumptionA {
        x: Site,
        y: Site,
        sx: i32,
        sy: i32,
        value: f64,
    },

    #[error("coupling has infinite range but no tail certificate was supplied")]
    MissingTailCertificate,

    #[error("coupling sum diverges: decay exponent {decay} must be positive")]
    DivergentTail { decay: f64 },

    #[error("edge weights violate the stability bound: row sum {row_sum} exceeds 2B = {two_b}")]
    StabilityViolated { row_sum: f64, two_b: f64 },

    #[error("activity table covers polymers up to size {max_size}, volume has {volume} sites")]
    IncompleteTable { max_size: usize, volume: usize },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error reflects bad input or an exhausted budget rather than a
    /// failed identity.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Inconsistent(_))
    }
}
