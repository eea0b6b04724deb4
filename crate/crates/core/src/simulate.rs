//! Independent-Poisson match simulator and toy forecasters.
//!
//! Randomness comes from ChaCha8. Match `i` of a run seeded with `seed`
//! draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`, so a match's
//! score depends only on `(seed, i)` and parallel generation reproduces the
//! sequential output. Forecaster `k` uses its own key,
//! `splitmix64(seed ^ splitmix64(k + 1))`, on the same per-match stream.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{absolute_error, squared_error};
use crate::metric::{classify, forecast_penalty};
use crate::model::{MetricConfig, Score};
use crate::{Error, Real, Result};

/// Upper limit on the Poisson mean accepted by [`sample_poisson`].
pub const MAX_LAMBDA: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub lambda1: f64,
    pub lambda2: f64,
    pub n_matches: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(self) -> Result<Self> {
        check_lambda(self.lambda1)?;
        check_lambda(self.lambda2)?;
        if self.n_matches == 0 {
            return Err(Error::NoMatches);
        }
        Ok(self)
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= MAX_LAMBDA {
        Ok(())
    } else {
        Err(Error::LambdaOutOfRange(lambda))
    }
}

/// Draws from Poisson(`lambda`) by inverting the CDF with a sequential
/// search from zero. One uniform draw per sample.
pub fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> Result<u32> {
    check_lambda(lambda)?;
    let u: f64 = rng.gen();
    let mut k = 0u32;
    let mut pmf = (-lambda).exp();
    let mut cdf = pmf;
    // pmf reaching zero means the CDF has stalled just below one
    while u > cdf && pmf > 0.0 {
        k += 1;
        pmf *= lambda / f64::from(k);
        cdf += pmf;
    }
    Ok(k)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn substream(key: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index as u64);
    rng
}

fn forecaster_key(seed: u64, forecaster: usize) -> u64 {
    splitmix64(seed ^ splitmix64(forecaster as u64 + 1))
}

fn draw_score(lambda1: f64, lambda2: f64, rng: &mut ChaCha8Rng) -> Result<Score> {
    Ok(Score::new(sample_poisson(lambda1, rng)?, sample_poisson(lambda2, rng)?))
}

/// `n_matches` scores with independent Poisson components.
pub fn generate_matches(sim: &SimConfig) -> Result<Vec<Score>> {
    let sim = sim.validate()?;
    (0..sim.n_matches)
        .into_par_iter()
        .map(|i| draw_score(sim.lambda1, sim.lambda2, &mut substream(sim.seed, i)))
        .collect()
}

/// How a synthetic forecaster produces its forecast for a match.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ForecasterModel {
    /// Always the same score.
    Constant(Score),
    /// Independent draws from Poisson(`lambda * exp(bias)`) per team.
    PoissonSampler { bias1: f64, bias2: f64 },
    /// `(round(lambda1), round(lambda2))`.
    RoundedMean,
}

impl ForecasterModel {
    fn forecast(&self, sim: &SimConfig, rng: &mut ChaCha8Rng) -> Result<Score> {
        match *self {
            ForecasterModel::Constant(score) => Ok(score),
            ForecasterModel::PoissonSampler { bias1, bias2 } => {
                draw_score(sim.lambda1 * bias1.exp(), sim.lambda2 * bias2.exp(), rng)
            }
            ForecasterModel::RoundedMean => Ok(Score::new(sim.lambda1.round() as u32, sim.lambda2.round() as u32)),
        }
    }
}

impl fmt::Display for ForecasterModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForecasterModel::Constant(score) => write!(f, "constant:{score}"),
            ForecasterModel::PoissonSampler { bias1, bias2 } => write!(f, "poisson:{bias1},{bias2}"),
            ForecasterModel::RoundedMean => f.write_str("rounded-mean"),
        }
    }
}

impl FromStr for ForecasterModel {
    type Err = String;

    /// `constant:<g1>-<g2>`, `poisson[:<bias1>,<bias2>]` or `rounded-mean`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        match (kind, arg) {
            ("constant", Some(score)) => score.parse().map(ForecasterModel::Constant).map_err(|e: Error| e.to_string()),
            ("poisson", None) => Ok(ForecasterModel::PoissonSampler { bias1: 0.0, bias2: 0.0 }),
            ("poisson", Some(biases)) => {
                let (b1, b2) = biases.split_once(',').ok_or("expected poisson:<bias1>,<bias2>")?;
                let parse = |b: &str| b.trim().parse::<f64>().map_err(|_| format!("invalid bias `{b}`"));
                let (bias1, bias2) = (parse(b1)?, parse(b2)?);
                if !bias1.is_finite() || !bias2.is_finite() {
                    return Err("biases must be finite".into());
                }
                Ok(ForecasterModel::PoissonSampler { bias1, bias2 })
            }
            ("rounded-mean", None) => Ok(ForecasterModel::RoundedMean),
            _ => Err(format!(
                "unknown forecaster `{s}` (expected constant:<g1>-<g2>, poisson[:<b1>,<b2>] or rounded-mean)"
            )),
        }
    }
}

/// Aggregate criteria for one forecaster.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow<T> {
    pub forecaster: String,
    pub n_matches: usize,
    pub mfp: T,
    pub mean_se: T,
    pub mean_mad: T,
    /// Fraction of matches whose win/draw/loss category was forecast correctly.
    pub hit_rate: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Experiment<T> {
    pub sim: SimConfig,
    pub config: MetricConfig<T>,
    pub rows: Vec<ExperimentRow<T>>,
}

/// Criteria of one forecaster over a fixed list of actual scores and its
/// forecasts.
pub fn score_forecasts<T: Real>(
    label: String,
    actuals: &[Score],
    forecasts: &[Score],
    config: &MetricConfig<T>,
) -> Result<ExperimentRow<T>> {
    if actuals.len() != forecasts.len() {
        return Err(Error::LengthMismatch { actual: actuals.len(), forecast: forecasts.len() });
    }
    if actuals.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut fp = T::zero();
    let mut se = T::zero();
    let mut mad = T::zero();
    let mut hits = 0usize;
    for (&a, &f) in actuals.iter().zip(forecasts) {
        fp = fp + forecast_penalty(a, f, config).fp;
        se = se + T::from_u64(squared_error(a, f)).expect("representable");
        mad = mad + T::from_u64(absolute_error(a, f)).expect("representable");
        hits += usize::from(classify(a) == classify(f));
    }
    let n = T::from_usize(actuals.len()).expect("representable");
    Ok(ExperimentRow {
        forecaster: label,
        n_matches: actuals.len(),
        mfp: fp / n,
        mean_se: se / n,
        mean_mad: mad / n,
        hit_rate: T::from_usize(hits).expect("representable") / n,
    })
}

/// Simulates the matches once and scores every forecaster against them.
pub fn run_experiment<T: Real>(
    sim: &SimConfig,
    forecasters: &[ForecasterModel],
    config: &MetricConfig<T>,
) -> Result<Experiment<T>> {
    if forecasters.is_empty() {
        return Err(Error::NoForecasters);
    }
    let config = config.validate()?;
    let actuals = generate_matches(sim)?;
    let rows = forecasters
        .iter()
        .enumerate()
        .map(|(k, model)| {
            let key = forecaster_key(sim.seed, k);
            let forecasts = (0..actuals.len())
                .into_par_iter()
                .map(|i| model.forecast(sim, &mut substream(key, i)))
                .collect::<Result<Vec<_>>>()?;
            score_forecasts(model.to_string(), &actuals, &forecasts, &config)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Experiment { sim: *sim, config, rows })
}
