use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("at least 3 cities are required, got {0}")]
    TooFewCities(usize),

    #[error("instance too dense: {roads} roads requested but {n} cities allow at most {max}")]
    TooDense { n: usize, roads: usize, max: usize },

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("city {city} out of range for an instance with {n} cities")]
    CityOutOfRange { city: usize, n: usize },

    #[error("self-loop on city {0}")]
    SelfLoop(usize),

    #[error("duplicate road {0} -> {1}")]
    DuplicateRoad(usize, usize),

    #[error("tour has {tour} cities but the instance has {instance}")]
    SizeMismatch { tour: usize, instance: usize },

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("exact oracle refuses {n} cities (limit {max})")]
    OracleTooLarge { n: usize, max: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam { name, reason: reason.into() }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
