//! Domain types shared by the metric, analysis and simulation code.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Real, Result};

/// Largest goal count accepted when parsing external input.
pub const MAX_PARSED_GOALS: u32 = 99;

/// Final score of a match. `g1` is the reference (home) team.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Score {
    pub g1: u32,
    pub g2: u32,
}

impl Score {
    pub const fn new(g1: u32, g2: u32) -> Self {
        Self { g1, g2 }
    }

    /// Both goal counts swapped, i.e. the same match seen from team 2.
    pub const fn swapped(self) -> Self {
        Self { g1: self.g2, g2: self.g1 }
    }

    pub fn outcome(self) -> Outcome {
        crate::metric::classify(self)
    }
}

/// Parses a single goal count, rejecting negatives, garbage and values above
/// [`MAX_PARSED_GOALS`].
pub fn parse_goals(input: &str) -> Result<u32> {
    let trimmed = input.trim();
    let invalid = |reason: &str| Error::InvalidScore { input: input.to_string(), reason: reason.to_string() };
    if trimmed.starts_with('-') {
        return Err(invalid("goal count must be non-negative"));
    }
    let goals: u32 = trimmed.parse().map_err(|_| invalid("goal count must be a non-negative integer"))?;
    if goals > MAX_PARSED_GOALS {
        return Err(invalid("goal count above 99"));
    }
    Ok(goals)
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.g1, self.g2)
    }
}

impl FromStr for Score {
    type Err = Error;

    /// Accepts `"<g1>-<g2>"`, e.g. `"2-1"`.
    fn from_str(s: &str) -> Result<Self> {
        let (left, right) = s
            .split_once('-')
            .ok_or_else(|| Error::InvalidScore { input: s.to_string(), reason: "expected <g1>-<g2>".to_string() })?;
        Ok(Score::new(parse_goals(left)?, parse_goals(right)?))
    }
}

/// Match result from team 1's point of view. Variants are ordered
/// `Loss < Draw < Win`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    Loss,
    Draw,
    Win,
}

impl Outcome {
    /// Ordinal rank: Win = 2, Draw = 1, Loss = 0.
    pub const fn rank(self) -> u32 {
        match self {
            Outcome::Loss => 0,
            Outcome::Draw => 1,
            Outcome::Win => 2,
        }
    }

    /// League points under the 3/1/0 system.
    pub const fn points(self) -> u32 {
        match self {
            Outcome::Loss => 0,
            Outcome::Draw => 1,
            Outcome::Win => 3,
        }
    }

    pub const fn letter(self) -> char {
        match self {
            Outcome::Loss => 'L',
            Outcome::Draw => 'D',
            Outcome::Win => 'W',
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Monotone transformation applied to goal counts before measuring distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    Identity,
    /// `g -> 2 * sqrt(g + 3/8)`
    #[default]
    Anscombe,
    /// `g -> sqrt(g) + sqrt(g + 1)`
    FreemanTukey,
}

impl Transform {
    pub const ALL: [Transform; 3] = [Transform::Identity, Transform::Anscombe, Transform::FreemanTukey];

    pub fn apply<T: Real>(self, goals: u32) -> T {
        let g = T::from_count(goals);
        match self {
            Transform::Identity => g,
            Transform::Anscombe => T::lit(2.0) * (g + T::lit(0.375)).sqrt(),
            Transform::FreemanTukey => g.sqrt() + (g + T::one()).sqrt(),
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Transform::Identity => "identity",
            Transform::Anscombe => "anscombe",
            Transform::FreemanTukey => "freeman-tukey",
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How a win/draw/loss mismatch is converted to a multiple of `c0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PenaltyScheme {
    /// 0 same, 1 adjacent, 2 opposite category.
    #[default]
    Symmetric,
    /// 0 same, 1 for D/L, 2 for W/D, 3 for W/L: the gap in league points.
    Asymmetric,
}

impl PenaltyScheme {
    pub fn multiplier(self, actual: Outcome, forecast: Outcome) -> u32 {
        match self {
            PenaltyScheme::Symmetric => actual.rank().abs_diff(forecast.rank()),
            PenaltyScheme::Asymmetric => actual.points().abs_diff(forecast.points()),
        }
    }

    pub const fn max_multiplier(self) -> u32 {
        match self {
            PenaltyScheme::Symmetric => 2,
            PenaltyScheme::Asymmetric => 3,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            PenaltyScheme::Symmetric => "symmetric",
            PenaltyScheme::Asymmetric => "asymmetric",
        }
    }
}

impl fmt::Display for PenaltyScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters of the forecast penalty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig<T = f64> {
    /// Unit category penalty.
    pub c0: T,
    /// Minkowski norm order.
    pub r: T,
    pub transform: Transform,
    pub scheme: PenaltyScheme,
}

impl<T: Real> Default for MetricConfig<T> {
    /// `c0 = 1`, Euclidean norm, Anscombe transform, symmetric scheme.
    fn default() -> Self {
        Self { c0: T::one(), r: T::lit(2.0), transform: Transform::Anscombe, scheme: PenaltyScheme::Symmetric }
    }
}

impl<T: Real> MetricConfig<T> {
    pub fn new(c0: T, r: T, transform: Transform, scheme: PenaltyScheme) -> Result<Self> {
        Self { c0, r, transform, scheme }.validate()
    }

    pub fn with_c0(self, c0: T) -> Self {
        Self { c0, ..self }
    }

    pub fn with_norm_order(self, r: T) -> Self {
        Self { r, ..self }
    }

    pub fn with_transform(self, transform: Transform) -> Self {
        Self { transform, ..self }
    }

    pub fn with_scheme(self, scheme: PenaltyScheme) -> Self {
        Self { scheme, ..self }
    }

    pub fn validate(self) -> Result<Self> {
        validate_config(self)
    }
}

/// Returns the config unchanged if `c0 > 0` and `r` is a finite real `>= 1`.
pub fn validate_config<T: Real>(config: MetricConfig<T>) -> Result<MetricConfig<T>> {
    if !config.c0.is_finite() || config.c0 <= T::zero() {
        return Err(Error::NonPositiveC0(config.c0.to_f64().unwrap_or(f64::NAN)));
    }
    if !config.r.is_finite() || config.r < T::one() {
        return Err(Error::BadNormOrder(config.r.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(config)
}

/// Category term, distance term and their sum for one forecast.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyBreakdown<T = f64> {
    pub c_term: T,
    pub d_term: T,
    pub fp: T,
}

impl<T: Real> PenaltyBreakdown<T> {
    pub fn new(c_term: T, d_term: T) -> Self {
        Self { c_term, d_term, fp: c_term + d_term }
    }
}

/// One forecast of one match by one forecaster.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub match_id: String,
    pub forecaster_id: String,
    pub actual: Score,
    pub forecast: Score,
}

/// Fails on the first repeated `(match_id, forecaster_id)` pair.
pub fn check_unique_keys(records: &[MatchRecord]) -> Result<()> {
    let mut seen = std::collections::HashSet::with_capacity(records.len());
    for rec in records {
        if !seen.insert((rec.match_id.as_str(), rec.forecaster_id.as_str())) {
            return Err(Error::DuplicateKey {
                match_id: rec.match_id.clone(),
                forecaster_id: rec.forecaster_id.clone(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_config_is_valid() {
        let cfg = MetricConfig::<f64>::default();
        assert_eq!(validate_config(cfg), Ok(cfg));
        assert_eq!(cfg.c0, 1.0);
        assert_eq!(cfg.r, 2.0);
        assert_eq!(cfg.transform, Transform::Anscombe);
        assert_eq!(cfg.scheme, PenaltyScheme::Symmetric);
    }

    #[test]
    fn half_c0_with_l1_asymmetric_is_valid() {
        let cfg = MetricConfig { c0: 0.5, r: 1.0, transform: Transform::Identity, scheme: PenaltyScheme::Asymmetric };
        assert_eq!(validate_config(cfg), Ok(cfg));
    }

    #[test]
    fn rejects_bad_c0() {
        let base = MetricConfig::<f64>::default();
        assert_eq!(validate_config(base.with_c0(0.0)), Err(Error::NonPositiveC0(0.0)));
        assert_eq!(validate_config(base.with_c0(-1.0)), Err(Error::NonPositiveC0(-1.0)));
        assert!(matches!(validate_config(base.with_c0(f64::NAN)), Err(Error::NonPositiveC0(_))));
    }

    #[test]
    fn rejects_bad_norm_order() {
        let base = MetricConfig::<f64>::default();
        assert_eq!(validate_config(base.with_norm_order(0.5)), Err(Error::BadNormOrder(0.5)));
        assert!(matches!(validate_config(base.with_norm_order(f64::NAN)), Err(Error::BadNormOrder(_))));
        assert!(matches!(validate_config(base.with_norm_order(f64::INFINITY)), Err(Error::BadNormOrder(_))));
        assert!(validate_config(base.with_norm_order(1.0)).is_ok());
    }

    #[test]
    fn asymmetric_multipliers_match_point_gaps() {
        use Outcome::*;
        let s = PenaltyScheme::Asymmetric;
        assert_eq!(s.multiplier(Draw, Loss), 1);
        assert_eq!(s.multiplier(Loss, Draw), 1);
        assert_eq!(s.multiplier(Win, Draw), 2);
        assert_eq!(s.multiplier(Draw, Win), 2);
        assert_eq!(s.multiplier(Win, Loss), 3);
        assert_eq!(s.multiplier(Loss, Win), 3);
        assert_eq!(s.multiplier(Win, Win), 0);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("2-1".parse::<Score>().is_ok());
        assert!("2:1".parse::<Score>().is_err());
        assert!("-1-2".parse::<Score>().is_err());
        assert!("100-0".parse::<Score>().is_err());
        assert!("a-0".parse::<Score>().is_err());
        assert_eq!(parse_goals(" 99 "), Ok(99));
        assert!(parse_goals("-1").is_err());
        assert!(parse_goals("1.5").is_err());
    }

    #[test]
    fn duplicate_keys_detected() {
        let rec = |m: &str, f: &str| MatchRecord {
            match_id: m.into(),
            forecaster_id: f.into(),
            actual: Score::new(1, 0),
            forecast: Score::new(1, 0),
        };
        assert!(check_unique_keys(&[rec("m1", "a"), rec("m1", "b"), rec("m2", "a")]).is_ok());
        assert_eq!(
            check_unique_keys(&[rec("m1", "a"), rec("m1", "a")]),
            Err(Error::DuplicateKey { match_id: "m1".into(), forecaster_id: "a".into() })
        );
    }

    proptest! {
        #[test]
        fn score_round_trips(g1 in 0u32..=99, g2 in 0u32..=99) {
            let s = Score::new(g1, g2);
            prop_assert_eq!(s.to_string().parse::<Score>().unwrap(), s);
        }

        #[test]
        fn transforms_strictly_increasing(g in 0u32..500) {
            for t in Transform::ALL {
                prop_assert!(t.apply::<f64>(g) < t.apply::<f64>(g + 1));
                prop_assert!(t.apply::<f32>(g) < t.apply::<f32>(g + 1));
            }
        }
    }
}
