use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("c0 must be strictly positive, got {0}")]
    NonPositiveC0(f64),
    #[error("norm order must be a finite real >= 1, got {0}")]
    BadNormOrder(f64),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("length mismatch: {actual} actual values, {forecast} forecasts")]
    LengthMismatch { actual: usize, forecast: usize },
    #[error("poisson mean must lie in (0, 30], got {0}")]
    LambdaOutOfRange(f64),
    #[error("number of matches must be at least 1")]
    NoMatches,
    #[error("at least one forecaster is required")]
    NoForecasters,
    #[error("invalid score `{input}`: {reason}")]
    InvalidScore { input: String, reason: String },
    #[error("duplicate record for match `{match_id}`, forecaster `{forecaster_id}`")]
    DuplicateKey { match_id: String, forecaster_id: String },
}
