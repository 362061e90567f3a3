use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A probability, crossover or fraction outside its admissible range.
    #[error("{name} = {value} is outside {range}")]
    Domain {
        name: String,
        value: f64,
        range: &'static str,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid axis sets: {0}")]
    InvalidAxes(String),

    #[error("joint table would have {entries} entries (limit {limit})")]
    TableTooLarge { entries: String, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Parameters are individually valid but the analysis is undefined for them.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(name: impl Into<String>, value: f64, range: &'static str) -> Self {
        Error::Domain {
            name: name.into(),
            value,
            range,
        }
    }
}

/// Rejects NaN and values outside `[lo, hi]`.
pub(crate) fn check_range(
    name: &str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<f64> {
    if value.is_nan() || value < lo || value > hi {
        Err(Error::domain(name, value, range))
    } else {
        Ok(value)
    }
}
