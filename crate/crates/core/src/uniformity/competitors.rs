//! Kolmogorov-Smirnov and the six varentropy-type competitor statistics.
//!
//! TV, TE, TC and TA use the two-sided window `m = default_window(n)` with
//! order-statistic indices clamped to `1..=n`; TD, TB and TA use the Gaussian
//! KDE with the rule-of-thumb bandwidth.

use crate::density::{default_grid, integrate, silverman_bandwidth, DensityModel};
use crate::error::{Error, Result};
use crate::estimators::{two_sided_gap, two_sided_terms};
use crate::sample::{default_window, population_variance, Sample, WindowKind};

use super::{check_unit_interval, StatKind};

/// `max_i max(i/n - X_(i), X_(i) - (i-1)/n)`.
pub fn ks_statistic(sample: &Sample) -> Result<f64> {
    check_unit_interval(sample)?;
    let n = sample.len() as f64;
    Ok(sample
        .values()
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let i = (k + 1) as f64;
            (i / n - x).max(x - (i - 1.0) / n)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

fn log_variance(values: impl IntoIterator<Item = f64>, what: impl Fn(usize) -> Error) -> Result<f64> {
    let logs = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| if v > 0.0 && v.is_finite() { Ok(v.ln()) } else { Err(what(i + 1)) })
        .collect::<Result<Vec<_>>>()?;
    Ok(population_variance(&logs))
}

/// One of TV, TE, TD, TB, TC, TA with the default window.
pub fn competitor_statistic(kind: StatKind, sample: &Sample) -> Result<f64> {
    competitor_statistic_with_window(kind, sample, default_window(sample.len(), WindowKind::TwoSided))
}

/// As [`competitor_statistic`] with an explicit window `m` (ignored by TD
/// and TB).
pub fn competitor_statistic_with_window(kind: StatKind, sample: &Sample, m: usize) -> Result<f64> {
    check_unit_interval(sample)?;
    let n = sample.len();
    let tied = |index| Error::TiedSpacings { index };
    let degenerate = |index| Error::DegenerateDensity { index };
    match kind {
        StatKind::Tv => {
            WindowKind::TwoSided.validate(n, m)?;
            log_variance((1..=n).map(|i| two_sided_gap(sample, i, m as i64)), tied)
        }
        StatKind::Te => {
            WindowKind::TwoSided.validate(n, m)?;
            log_variance(two_sided_terms(sample, m)?, tied)
        }
        StatKind::Tc => {
            WindowKind::TwoSided.validate(n, m)?;
            log_variance((1..=n).map(|i| local_slope(sample, i, m)), tied)
        }
        StatKind::Td => {
            let kde = kde(sample)?;
            let grid = default_grid(sample, kde.bandwidth())?;
            let f = kde.density_on(&grid.nodes());
            let flog = |p: u32| -> Vec<f64> {
                f.iter()
                    .map(|&v| if v > 0.0 { v * v.ln().powi(p as i32) } else { 0.0 })
                    .collect()
            };
            let first = integrate(&flog(1), &grid)?;
            let second = integrate(&flog(2), &grid)?;
            Ok(second - first * first)
        }
        StatKind::Tb => {
            let kde = kde(sample)?;
            log_variance(sample.values().iter().map(|&x| kde.density(x)), degenerate)
        }
        StatKind::Ta => {
            WindowKind::TwoSided.validate(n, m)?;
            let kde = kde(sample)?;
            let mi = m as i64;
            log_variance(
                (1..=n as i64).map(|i| {
                    kde.density(sample.order_statistic_clamped(i + mi))
                        + kde.density(sample.order_statistic_clamped(i - mi))
                }),
                degenerate,
            )
        }
        other => Err(Error::InvalidParameter(format!("{other} is not a competitor statistic"))),
    }
}

fn kde(sample: &Sample) -> Result<DensityModel> {
    let h = silverman_bandwidth(sample.len(), sample.std_dev()?)?;
    DensityModel::new(sample.values(), h)
}

/// Least-squares slope of `j/n` on `X_(j)` over the clamped window
/// `j = i-m..=i+m`. The window mean keeps the `2m+1` divisor at the ends,
/// counting clamped repeats.
fn local_slope(sample: &Sample, i: usize, m: usize) -> f64 {
    let i = i as i64;
    let m = m as i64;
    let xs: Vec<f64> = (i - m..=i + m).map(|j| sample.order_statistic_clamped(j)).collect();
    let mean = xs.iter().sum::<f64>() / (2 * m + 1) as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for (k, x) in xs.iter().enumerate() {
        let d = x - mean;
        num += d * (k as i64 - m) as f64;
        den += d * d;
    }
    num / (sample.len() as f64 * den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Sample {
        Sample::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ks_hand_values() {
        assert!((ks_statistic(&s(&[0.1, 0.5, 0.9])).unwrap() - 7.0 / 30.0).abs() < 1e-15);
        assert_eq!(ks_statistic(&s(&[0.0, 1.0])).unwrap(), 0.5);
        // i/(n+1) grid, n = 3: the largest gap is at the ends, 1/4.
        assert!((ks_statistic(&s(&[0.25, 0.5, 0.75])).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn tv_is_variance_of_log_gaps() {
        let n = 12;
        let x = s(&(1..=n).map(|i| i as f64 / 13.0).collect::<Vec<_>>());
        let m = default_window(n, WindowKind::TwoSided);
        let gaps: Vec<f64> = (1..=n).map(|i| two_sided_gap(&x, i, m as i64)).collect();
        let logs: Vec<f64> = gaps.iter().map(|g| g.ln()).collect();
        let v = competitor_statistic(StatKind::Tv, &x).unwrap();
        assert!((v - population_variance(&logs)).abs() < 1e-15);
    }

    #[test]
    fn te_hand_value_n5_m1() {
        // Equispaced with unit step 1/6: every two-sided gap is 2/6 inside and
        // 1/6 at the ends; c = (1, 2, 2, 2, 1) exactly compensates.
        let x = s(&[1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0, 4.0 / 6.0, 5.0 / 6.0]);
        let terms = two_sided_terms(&x, 1).unwrap();
        for t in &terms {
            assert!((t - 1.2).abs() < 1e-12, "{t}");
        }
        let te = competitor_statistic_with_window(StatKind::Te, &x, 1).unwrap();
        assert!(te.abs() < 1e-28, "{te}");
        // TV keeps the uncompensated end gaps: logs are (a, b, b, b, a) with
        // b - a = ln 2, so the variance is (ln 2)^2 * 2/5 * 3/5.
        let tv = competitor_statistic_with_window(StatKind::Tv, &x, 1).unwrap();
        assert!((tv - std::f64::consts::LN_2.powi(2) * 6.0 / 25.0).abs() < 1e-12);
    }

    #[test]
    fn statistics_are_nonnegative_and_finite() {
        let x = s(&[0.03, 0.11, 0.2, 0.26, 0.41, 0.47, 0.5, 0.66, 0.71, 0.8, 0.93, 0.97]);
        for k in [StatKind::Tv, StatKind::Te, StatKind::Td, StatKind::Tb, StatKind::Tc, StatKind::Ta] {
            let v = competitor_statistic(k, &x).unwrap();
            assert!(v.is_finite() && v >= -1e-12, "{k}: {v}");
        }
        assert!(competitor_statistic(StatKind::Gv, &x).is_err());
    }

    #[test]
    fn tc_slope_matches_direct_regression() {
        let x = s(&[0.05, 0.1, 0.3, 0.35, 0.6, 0.8, 0.81]);
        // i = 4, m = 1: window X_3..X_5, slope of (j - i)/n on X_j.
        let xs = [0.3, 0.35, 0.6];
        let mean = xs.iter().sum::<f64>() / 3.0;
        let num: f64 = xs.iter().zip([-1.0, 0.0, 1.0]).map(|(x, d)| (x - mean) * d).sum();
        let den: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
        assert!((local_slope(&x, 4, 1) - num / (7.0 * den)).abs() < 1e-15);
    }

    #[test]
    fn tied_window_is_reported() {
        let x = s(&[0.2, 0.2, 0.2, 0.2, 0.2, 0.9]);
        assert!(matches!(
            competitor_statistic(StatKind::Tv, &x),
            Err(Error::TiedSpacings { .. })
        ));
    }
}
