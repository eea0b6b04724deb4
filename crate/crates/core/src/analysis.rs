//! Structural checks of the penalty and naive baselines.
//!
//! The checks are exhaustive scans over small score grids: every
//! actual/forecast pair (or every triple, for the triangle inequality) with
//! goal counts in `0..=grid_max`.

use rayon::prelude::*;
use serde::Serialize;

use crate::metric::{classify, forecast_penalty, normalized_distance};
use crate::model::{MetricConfig, Score, Transform};
use crate::Real;

pub const DEFAULT_OVERLAP_GRID: u32 = 10;
pub const DEFAULT_AXIOM_GRID: u32 = 5;

/// Absolute tolerance for the metric-axiom scan.
pub const AXIOM_TOLERANCE: f64 = 1e-12;

/// Typical actual/forecast pairs grouped by category doublet: draw/draw,
/// win/win, win/draw and win/loss.
pub const REFERENCE_PAIRS: [(Score, Score); 18] = {
    const fn p(a1: u32, a2: u32, f1: u32, f2: u32) -> (Score, Score) {
        (Score::new(a1, a2), Score::new(f1, f2))
    }
    [
        p(0, 0, 1, 1),
        p(0, 0, 2, 2),
        p(0, 0, 3, 3),
        p(1, 1, 2, 2),
        p(2, 1, 1, 0),
        p(2, 1, 3, 2),
        p(2, 1, 4, 3),
        p(2, 1, 3, 1),
        p(2, 1, 4, 2),
        p(2, 1, 0, 0),
        p(2, 1, 1, 1),
        p(2, 1, 2, 2),
        p(2, 1, 0, 1),
        p(2, 1, 1, 2),
        p(2, 1, 2, 3),
        p(2, 1, 1, 3),
        p(2, 0, 0, 2),
        p(3, 0, 0, 3),
    ]
};

/// Sum of squared goal differences on raw counts.
pub fn squared_error(actual: Score, forecast: Score) -> u64 {
    let d1 = u64::from(actual.g1.abs_diff(forecast.g1));
    let d2 = u64::from(actual.g2.abs_diff(forecast.g2));
    d1 * d1 + d2 * d2
}

/// Sum of absolute goal differences on raw counts.
pub fn absolute_error(actual: Score, forecast: Score) -> u64 {
    u64::from(actual.g1.abs_diff(forecast.g1)) + u64::from(actual.g2.abs_diff(forecast.g2))
}

/// Whether the penalty ranks a (0,0) forecast of a 2-1 win ahead of a 0-1
/// forecast. Squared error ranks them the other way round (5 vs 4).
pub fn counterexample_check<T: Real>(config: &MetricConfig<T>) -> bool {
    let actual = Score::new(2, 1);
    let draw = forecast_penalty(actual, Score::new(0, 0), config).fp;
    let loss = forecast_penalty(actual, Score::new(0, 1), config).fp;
    draw < loss
}

/// All scores with both goal counts in `0..=grid_max`.
pub fn score_grid(grid_max: u32) -> Vec<Score> {
    (0..=grid_max).flat_map(|g1| (0..=grid_max).map(move |g2| Score::new(g1, g2))).collect()
}

/// Observed penalty range for one category-mismatch level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRange<T> {
    /// Scheme multiplier; the category term of this level is `multiplier * c0`.
    pub multiplier: u32,
    pub pairs: u64,
    pub fp_min: Option<T>,
    pub fp_max: Option<T>,
}

impl<T: Real> LevelRange<T> {
    fn empty(multiplier: u32) -> Self {
        Self { multiplier, pairs: 0, fp_min: None, fp_max: None }
    }

    fn observe(&mut self, fp: T) {
        self.pairs += 1;
        self.fp_min = Some(self.fp_min.map_or(fp, |m| m.min(fp)));
        self.fp_max = Some(self.fp_max.map_or(fp, |m| m.max(fp)));
    }

    fn merge(mut self, other: Self) -> Self {
        self.pairs += other.pairs;
        self.fp_min = match (self.fp_min, other.fp_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.fp_max = match (self.fp_max, other.fp_max) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        self
    }
}

/// Separation verdict between level `lower` and level `lower + 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Separation {
    pub lower: u32,
    pub upper: u32,
    /// `fp_max(lower) <= fp_min(upper)`; vacuously true if either is empty.
    pub separated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapReport<T> {
    pub grid_max: u32,
    pub config: MetricConfig<T>,
    pub levels: Vec<LevelRange<T>>,
    pub separations: Vec<Separation>,
}

impl<T: Real> OverlapReport<T> {
    pub fn all_separated(&self) -> bool {
        self.separations.iter().all(|s| s.separated)
    }
}

/// Buckets the penalty of every grid pair by category-mismatch level.
pub fn overlap_report<T: Real>(config: &MetricConfig<T>, grid_max: u32) -> OverlapReport<T> {
    let grid = score_grid(grid_max);
    let n_levels = config.scheme.max_multiplier() + 1;
    let fresh = || (0..n_levels).map(LevelRange::empty).collect::<Vec<_>>();

    let levels = grid
        .par_iter()
        .map(|&actual| {
            let mut local = fresh();
            for &forecast in &grid {
                let level = config.scheme.multiplier(classify(actual), classify(forecast));
                local[level as usize].observe(forecast_penalty(actual, forecast, config).fp);
            }
            local
        })
        .reduce(fresh, |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect());

    let separations = levels
        .windows(2)
        .map(|w| Separation {
            lower: w[0].multiplier,
            upper: w[1].multiplier,
            separated: match (w[0].fp_max, w[1].fp_min) {
                (Some(hi), Some(lo)) => hi <= lo,
                _ => true,
            },
        })
        .collect();

    OverlapReport { grid_max, config: *config, levels, separations }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricAxiomReport<T> {
    pub grid_max: u32,
    pub transform: Transform,
    pub r: T,
    pub pairs_checked: u64,
    pub triples_checked: u64,
    pub symmetry_violations: u64,
    pub identity_violations: u64,
    pub triangle_violations: u64,
    /// Minimum of `D(a,c) + D(c,b) - D(a,b)` over all triples.
    pub worst_triangle_slack: T,
}

impl<T: Real> MetricAxiomReport<T> {
    pub fn is_metric(&self) -> bool {
        self.symmetry_violations == 0 && self.identity_violations == 0 && self.triangle_violations == 0
    }
}

/// Exhaustively checks symmetry, identity of indiscernibles and the
/// triangle inequality of the normalized distance on the score grid.
pub fn metric_axiom_report<T: Real>(transform: Transform, r: T, grid_max: u32) -> MetricAxiomReport<T> {
    let grid = score_grid(grid_max);
    let n = grid.len();
    let tol = T::lit(AXIOM_TOLERANCE);

    let dist: Vec<Vec<T>> =
        grid.par_iter().map(|&a| grid.iter().map(|&b| normalized_distance(a, b, transform, r)).collect()).collect();

    let mut symmetry_violations = 0;
    let mut identity_violations = 0;
    for (i, row) in dist.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            if (d - dist[j][i]).abs() > tol {
                symmetry_violations += 1;
            }
            if (d <= tol) != (i == j) {
                identity_violations += 1;
            }
        }
    }

    let (triangle_violations, worst_triangle_slack) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut count = 0u64;
            let mut worst = T::infinity();
            for j in 0..n {
                for k in 0..n {
                    let slack = dist[i][k] + dist[k][j] - dist[i][j];
                    worst = worst.min(slack);
                    if slack < -tol {
                        count += 1;
                    }
                }
            }
            (count, worst)
        })
        .reduce(|| (0, T::infinity()), |a, b| (a.0 + b.0, a.1.min(b.1)));

    let n = n as u64;
    MetricAxiomReport {
        grid_max,
        transform,
        r,
        pairs_checked: n * n,
        triples_checked: n * n * n,
        symmetry_violations,
        identity_violations,
        triangle_violations,
        worst_triangle_slack,
    }
}
