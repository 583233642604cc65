use thiserror::Error;

/// Errors raised by polygon construction, validation and the experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge lengths: {0}")]
    InvalidEdgeLengths(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("mismatched polygons: {0}")]
    Mismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid sign pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid bend direction: {0}")]
    InvalidDirection(String),

    #[error("enumeration over {n} edges exceeds the limit of {max}")]
    TooManyEdges { n: usize, max: usize },

    /// A numerical routine failed where the mathematics guarantees success.
    #[error("internal numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
