//! The forecast penalty and its building blocks.
//!
//! For an actual score `A` and a forecast `F` the penalty is
//!
//! ```text
//! FP(A, F) = C(A, F) + D(A, F)
//! D(A, F)  = ||t(A) - t(F)||_r / (||t(A)||_r + ||t(F)||_r)
//! ```
//!
//! where `C` is `c0` times the category-mismatch multiplier of the chosen
//! [`PenaltyScheme`] and `t` is a componentwise [`Transform`]. `D` lies in
//! `[0, 1]` by the triangle inequality of the norm, so `FP` stays within
//! `[level * c0, level * c0 + 1]` for every mismatch level.

use num_traits::{Num, Signed};

use crate::model::{MetricConfig, Outcome, PenaltyBreakdown, PenaltyScheme, Score, Transform};
use crate::{Error, Real, Result};

pub fn classify(score: Score) -> Outcome {
    use std::cmp::Ordering::*;
    match score.g1.cmp(&score.g2) {
        Greater => Outcome::Win,
        Equal => Outcome::Draw,
        Less => Outcome::Loss,
    }
}

/// `c0` times the scheme's multiplier. Symmetric in `(actual, forecast)`.
pub fn category_penalty<T: Real>(actual: Outcome, forecast: Outcome, scheme: PenaltyScheme, c0: T) -> T {
    T::from_count(scheme.multiplier(actual, forecast)) * c0
}

pub fn transform_goals<T: Real>(score: Score, transform: Transform) -> [T; 2] {
    [transform.apply(score.g1), transform.apply(score.g2)]
}

/// Minkowski `L_r` norm, `(sum |v_i|^r)^(1/r)`, for finite `r >= 1`.
pub fn minkowski_norm<T: Real>(v: &[T], r: T) -> T {
    if r == T::one() {
        return v.iter().map(|x| x.abs()).sum();
    }
    if r == T::lit(2.0) {
        return v.iter().map(|&x| x * x).sum::<T>().sqrt();
    }
    // Scale by the largest component so that large `r` neither overflows nor
    // underflows.
    let scale = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let sum: T = v.iter().map(|x| (x.abs() / scale).powf(r)).sum();
    scale * sum.powf(r.recip())
}

/// `||a - f||_r / (||a||_r + ||f||_r)`, with `0` when both vectors are zero.
///
/// Panics if the slices differ in length.
pub fn normalized_minkowski_distance<T: Real>(actual: &[T], forecast: &[T], r: T) -> T {
    assert_eq!(actual.len(), forecast.len(), "vectors must have equal length");
    let denom = minkowski_norm(actual, r) + minkowski_norm(forecast, r);
    if denom == T::zero() {
        return T::zero();
    }
    let diff: Vec<T> = actual.iter().zip(forecast).map(|(&a, &f)| a - f).collect();
    minkowski_norm(&diff, r) / denom
}

/// Normalized distance between transformed goal vectors.
pub fn normalized_distance<T: Real>(actual: Score, forecast: Score, transform: Transform, r: T) -> T {
    let a = transform_goals::<T>(actual, transform);
    let f = transform_goals::<T>(forecast, transform);
    normalized_minkowski_distance(&a, &f, r)
}

/// Category penalty plus normalized distance. `config` is assumed validated.
pub fn forecast_penalty<T: Real>(actual: Score, forecast: Score, config: &MetricConfig<T>) -> PenaltyBreakdown<T> {
    let c_term = category_penalty(classify(actual), classify(forecast), config.scheme, config.c0);
    let d_term = normalized_distance(actual, forecast, config.transform, config.r);
    PenaltyBreakdown::new(c_term, d_term)
}

/// Arithmetic mean of the penalty over a set of matches.
pub fn mean_forecast_penalty<T, I>(pairs: I, config: &MetricConfig<T>) -> Result<T>
where
    T: Real,
    I: IntoIterator<Item = (Score, Score)>,
{
    let (sum, n) = pairs
        .into_iter()
        .fold((T::zero(), 0usize), |(sum, n), (a, f)| (sum + forecast_penalty(a, f, config).fp, n + 1));
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(sum / T::from_usize(n).expect("count representable"))
}

/// Symmetric mean absolute percent error, `mean(|F - A| / (|F| + |A|))`.
///
/// A term with `A = F = 0` counts as zero error. Generic over any signed
/// numeric type, so it also evaluates exactly over rationals.
pub fn smape<T>(actuals: &[T], forecasts: &[T]) -> Result<T>
where
    T: Num + Signed + Clone,
{
    if actuals.len() != forecasts.len() {
        return Err(Error::LengthMismatch { actual: actuals.len(), forecast: forecasts.len() });
    }
    if actuals.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut sum = T::zero();
    let mut n = T::zero();
    for (a, f) in actuals.iter().zip(forecasts) {
        let denom = f.abs() + a.abs();
        if !denom.is_zero() {
            sum = sum + (f.clone() - a.clone()).abs() / denom;
        }
        n = n + T::one();
    }
    Ok(sum / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn s(g1: u32, g2: u32) -> Score {
        Score::new(g1, g2)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(s(2, 1)), Outcome::Win);
        assert_eq!(classify(s(0, 0)), Outcome::Draw);
        assert_eq!(classify(s(0, 1)), Outcome::Loss);
    }

    #[test]
    fn category_penalty_examples() {
        use Outcome::*;
        use PenaltyScheme::*;
        assert_eq!(category_penalty(Win, Win, Symmetric, 1.0), 0.0);
        assert_eq!(category_penalty(Win, Draw, Symmetric, 1.0), 1.0);
        assert_eq!(category_penalty(Win, Loss, Asymmetric, 1.0), 3.0);
        assert_eq!(category_penalty(Win, Loss, Symmetric, 0.5), 1.0);
        for a in [Win, Draw, Loss] {
            for f in [Win, Draw, Loss] {
                for scheme in [Symmetric, Asymmetric] {
                    assert_eq!(category_penalty(a, f, scheme, 0.7), category_penalty(f, a, scheme, 0.7));
                }
            }
        }
    }

    #[test]
    fn transform_examples() {
        let [a1, a2] = transform_goals::<f64>(s(0, 0), Transform::Anscombe);
        // 2 * sqrt(3/8), 40-digit reference
        assert!(close(a1, 1.224_744_871_391_589, 1e-15));
        assert_eq!(a1, a2);
        assert_eq!(transform_goals::<f64>(s(0, 0), Transform::FreemanTukey), [1.0, 1.0]);
        assert_eq!(transform_goals::<f64>(s(2, 1), Transform::Identity), [2.0, 1.0]);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(minkowski_norm(&[3.0, 4.0], 2.0), 5.0);
        assert_eq!(minkowski_norm(&[3.0, 4.0], 1.0), 7.0);
        assert!(close(minkowski_norm(&[-1.0, 1.0], 2.0), std::f64::consts::SQRT_2, 1e-15));
        assert_eq!(minkowski_norm(&[0.0, 0.0], 3.0), 0.0);
        // general path agrees with the closed forms
        assert!(close(minkowski_norm(&[3.0, 4.0], 2.0 + 1e-12), 5.0, 1e-9));
        // (27 + 64)^(1/3)
        assert!(close(minkowski_norm(&[3.0, -4.0], 3.0), 91f64.cbrt(), 1e-14));
        // large orders approach the max norm without overflow
        assert!(close(minkowski_norm(&[3.0, 4.0], 500.0), 4.0, 1e-2));
    }

    #[test]
    fn distance_examples() {
        let d = |a, f, t, r| normalized_distance::<f64>(a, f, t, r);
        assert!(close(d(s(2, 1), s(0, 0), Transform::Anscombe, 2.0), 0.387, 5e-4));
        assert!(close(d(s(2, 1), s(0, 0), Transform::Anscombe, 1.0), 0.378, 5e-4));
        for t in Transform::ALL {
            for r in [1.0, 1.5, 2.0, 3.0] {
                assert_eq!(d(s(2, 1), s(2, 1), t, r), 0.0);
            }
        }
        assert_eq!(d(s(0, 0), s(3, 3), Transform::Identity, 2.0), 1.0);
        assert!(close(d(s(3, 0), s(0, 3), Transform::Anscombe, 1.0), 0.5, 5e-4));
        // zero denominator
        assert_eq!(d(s(0, 0), s(0, 0), Transform::Identity, 2.0), 0.0);
    }

    #[test]
    fn penalty_examples() {
        let cfg = MetricConfig::<f64>::default();
        assert!(close(forecast_penalty(s(2, 1), s(0, 1), &cfg).fp, 2.285, 5e-4));
        assert!(close(forecast_penalty(s(1, 1), s(2, 2), &cfg).fp, 0.136, 5e-4));
        let l1 = cfg.with_norm_order(1.0);
        assert!(close(forecast_penalty(s(2, 1), s(1, 2), &l1).fp, 2.136, 5e-4));
        let b = forecast_penalty(s(2, 1), s(0, 0), &cfg);
        assert_eq!(b.c_term, 1.0);
        assert_eq!(b.fp, b.c_term + b.d_term);
    }

    #[test]
    fn penalty_in_f32_tracks_f64() {
        let c64 = MetricConfig::<f64>::default();
        let c32 = MetricConfig::<f32>::default();
        for a in [s(2, 1), s(0, 0), s(3, 0)] {
            for f in [s(0, 1), s(4, 3), s(1, 1)] {
                let x = forecast_penalty(a, f, &c64).fp;
                let y = forecast_penalty(a, f, &c32).fp as f64;
                assert!(close(x, y, 1e-6), "{a} vs {f}: {x} {y}");
            }
        }
    }

    #[test]
    fn mfp_examples() {
        let cfg = MetricConfig::<f64>::default();
        let pairs = [(s(2, 1), s(3, 2)), (s(2, 1), s(0, 0))];
        // (FP(3,2) + FP(0,0)) / 2 from a 40-digit recomputation
        assert!(close(mean_forecast_penalty(pairs, &cfg).unwrap(), 0.748_033_432_550_412_8, 1e-12));
        let perfect = std::iter::repeat_n((s(1, 2), s(1, 2)), 7);
        assert_eq!(mean_forecast_penalty(perfect, &cfg).unwrap(), 0.0);
        assert_eq!(mean_forecast_penalty(std::iter::empty(), &cfg), Err(Error::EmptyDataset));
    }

    #[test]
    fn smape_examples() {
        assert_eq!(smape(&[2.0, 1.0], &[2.0, 1.0]).unwrap(), 0.0);
        assert_eq!(smape(&[2.0], &[0.0]).unwrap(), 1.0);
        assert!(close(smape(&[2.0, 2.0], &[1.0, 3.0]).unwrap(), 0.266667, 5e-7));
        assert_eq!(smape(&[0.0, 2.0], &[0.0, 2.0]).unwrap(), 0.0);
        assert_eq!(smape::<f64>(&[], &[]), Err(Error::EmptyDataset));
        assert_eq!(smape(&[1.0], &[1.0, 2.0]), Err(Error::LengthMismatch { actual: 1, forecast: 2 }));
    }

    #[test]
    fn smape_exact_over_rationals() {
        let r = |n: i64| Ratio::from_integer(n);
        let got = smape(&[r(2), r(2)], &[r(1), r(3)]).unwrap();
        // (1/3 + 1/5) / 2
        assert_eq!(got, Ratio::new(4, 15));
    }

    fn score() -> impl Strategy<Value = Score> {
        (0u32..=6, 0u32..=6).prop_map(|(a, b)| Score::new(a, b))
    }

    fn transform() -> impl Strategy<Value = Transform> {
        prop::sample::select(Transform::ALL.to_vec())
    }

    fn norm_order() -> impl Strategy<Value = f64> {
        prop_oneof![Just(1.0), Just(1.5), Just(2.0), Just(3.0), 1.0f64..8.0]
    }

    proptest! {
        #[test]
        fn fp_symmetric_under_swap(a in score(), f in score(), t in transform(), r in norm_order(),
                                   c0 in 0.1f64..3.0, asym in any::<bool>()) {
            let scheme = if asym { PenaltyScheme::Asymmetric } else { PenaltyScheme::Symmetric };
            let cfg = MetricConfig { c0, r, transform: t, scheme };
            let x = forecast_penalty(a, f, &cfg).fp;
            let y = forecast_penalty(f, a, &cfg).fp;
            prop_assert!((x - y).abs() <= 1e-12);
        }

        #[test]
        fn team_relabeling_invariance(a in score(), f in score(), t in transform(), r in norm_order(), c0 in 0.1f64..3.0) {
            let cfg = MetricConfig { c0, r, transform: t, scheme: PenaltyScheme::Symmetric };
            let d1 = normalized_distance(a, f, t, r);
            let d2 = normalized_distance(a.swapped(), f.swapped(), t, r);
            prop_assert!((d1 - d2).abs() <= 1e-12);
            let p1 = forecast_penalty(a, f, &cfg).fp;
            let p2 = forecast_penalty(a.swapped(), f.swapped(), &cfg).fp;
            prop_assert!((p1 - p2).abs() <= 1e-12);
        }

        #[test]
        fn identity_of_indiscernibles(a in score(), f in score(), t in transform(), r in norm_order()) {
            let d = normalized_distance(a, f, t, r);
            prop_assert_eq!(d == 0.0, a == f);
        }

        #[test]
        fn mfp_linearity(
            xs in prop::collection::vec((score(), score()), 1..40),
            ys in prop::collection::vec((score(), score()), 1..40),
        ) {
            let cfg = MetricConfig::<f64>::default();
            let mx = mean_forecast_penalty(xs.iter().copied(), &cfg).unwrap();
            let my = mean_forecast_penalty(ys.iter().copied(), &cfg).unwrap();
            let all = mean_forecast_penalty(xs.iter().chain(&ys).copied(), &cfg).unwrap();
            let (nx, ny) = (xs.len() as f64, ys.len() as f64);
            prop_assert!((all - (nx * mx + ny * my) / (nx + ny)).abs() <= 1e-12);
        }
    }

    #[test]
    fn exhaustive_grid_symmetry_and_bounds() {
        let grid: Vec<Score> = (0..=6).flat_map(|a| (0..=6).map(move |b| s(a, b))).collect();
        for t in Transform::ALL {
            for r in [1.0, 1.5, 2.0, 3.0] {
                for &a in &grid {
                    for &f in &grid {
                        let d = normalized_distance(a, f, t, r);
                        assert!((0.0..=1.0).contains(&d), "{a} {f} {t} {r}: {d}");
                        assert!((d - normalized_distance(f, a, t, r)).abs() <= 1e-12);
                        for (scheme, top) in [(PenaltyScheme::Symmetric, 2.0), (PenaltyScheme::Asymmetric, 3.0)] {
                            let cfg = MetricConfig { c0: 0.8, r, transform: t, scheme };
                            let fp = forecast_penalty(a, f, &cfg).fp;
                            assert!(fp >= 0.0 && fp <= top * 0.8 + 1.0);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn origin_penalty_monotone_under_anscombe() {
        let seq: Vec<f64> = (1..=10).map(|x| normalized_distance(s(0, 0), s(x, x), Transform::Anscombe, 2.0)).collect();
        assert!(seq.windows(2).all(|w| w[0] < w[1]));
        for x in 1..=10 {
            assert_eq!(normalized_distance(s(0, 0), s(x, x), Transform::Identity, 2.0), 1.0);
        }
    }
}
