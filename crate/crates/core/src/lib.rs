//! Evaluation of exact-score soccer forecasts.
//!
//! The per-match penalty combines a category term (win/draw/loss mismatch,
//! scaled by `c0`) with a normalized Minkowski distance between
//! variance-stabilized goal vectors. Around that core the crate provides
//! competition-level aggregation, exhaustive structural checks, naive
//! baselines and a Poisson match simulator.
//!
//! The numeric code is generic over [`Real`]; the aliases below fix the
//! scalar for the common cases.

pub mod analysis;
mod error;
pub mod metric;
pub mod model;
mod real;
pub mod simulate;

pub use error::Error;
pub use metric::{
    category_penalty, classify, forecast_penalty, mean_forecast_penalty, minkowski_norm, normalized_distance,
    normalized_minkowski_distance, smape, transform_goals,
};
pub use model::{MatchRecord, Outcome, PenaltyScheme, Score, Transform};
pub use real::Real;

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub type MetricConfig = model::MetricConfig<f64>;
pub type MetricConfigF32 = model::MetricConfig<f32>;
pub type PenaltyBreakdown = model::PenaltyBreakdown<f64>;
pub type PenaltyBreakdownF32 = model::PenaltyBreakdown<f32>;
pub type OverlapReport = analysis::OverlapReport<f64>;
pub type MetricAxiomReport = analysis::MetricAxiomReport<f64>;
