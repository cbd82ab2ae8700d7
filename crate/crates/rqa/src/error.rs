use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series too short: need more than {needed} samples, got {actual}")]
    SeriesTooShort { needed: usize, actual: usize },

    #[error("series has no variance")]
    ConstantSeries,

    #[error("no recurrent points at radius {radius}")]
    NoRecurrence { radius: f64 },

    #[error("no diagonal carries recurrent points; the probability is undefined")]
    UndefinedProbability,

    #[error("size guard exceeded for {context}: {actual} > {limit}")]
    Guard {
        context: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
