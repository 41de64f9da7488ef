//! Sorted samples, order statistics and the small helpers shared by the
//! spacing estimators.
//!
//! Order-statistic indices are 1-based throughout, matching the usual
//! `X_(1) <= ... <= X_(n)` notation. Out-of-range indices are clamped to the
//! sample extremes by [`Sample::order_statistic_clamped`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated sample, stored in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    tie_count: usize,
}

impl Sample {
    /// Validates and sorts `values`. Input order is not retained.
    pub fn new(values: impl Into<Vec<f64>>) -> Result<Self> {
        let mut values = values.into();
        if values.len() < 2 {
            return Err(Error::EmptyOrSingleton { len: values.len() });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index, value });
        }
        values.sort_by(f64::total_cmp);
        // -0.0 and 0.0 compare equal but sort apart under total_cmp.
        for v in values.iter_mut() {
            if *v == 0.0 {
                *v = 0.0;
            }
        }
        let tie_count = values.windows(2).filter(|w| w[0] == w[1]).count();
        Ok(Self { values, tie_count })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; a sample holds at least two observations.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn has_ties(&self) -> bool {
        self.tie_count > 0
    }

    /// Number of adjacent sorted pairs that are exactly equal.
    pub fn tie_count(&self) -> usize {
        self.tie_count
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `X_(i)` with `X_(i) = X_(1)` for `i < 1` and `X_(i) = X_(n)` for `i > n`.
    pub fn order_statistic_clamped(&self, i: i64) -> f64 {
        let n = self.values.len() as i64;
        self.values[(i.clamp(1, n) - 1) as usize]
    }

    /// Right-continuous empirical CDF, `#{X_i <= x} / n`.
    pub fn empirical_cdf(&self, x: f64) -> f64 {
        let below = self.values.partition_point(|&v| v <= x);
        below as f64 / self.values.len() as f64
    }

    /// Standard deviation with the `n - 1` divisor.
    pub fn std_dev(&self) -> Result<f64> {
        sample_std(&self.values)
    }

    /// Applies `f` to every value and re-validates. Used for the equivariance
    /// checks and for jittering.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect::<Vec<_>>())
    }
}

/// Whether a window reaches to both sides of the current order statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowKind {
    /// `X_(j+m) - X_(j)`; requires `1 <= m <= n - 1`.
    OneSided,
    /// `X_(i+m) - X_(i-m)` with clamped indices; requires `1 <= m < n / 2`.
    TwoSided,
}

impl WindowKind {
    pub fn validate(self, n: usize, m: usize) -> Result<()> {
        let ok = match self {
            WindowKind::OneSided => m >= 1 && m < n,
            WindowKind::TwoSided => m >= 1 && 2 * m < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::WindowTooLarge {
                m,
                n,
                bound: match self {
                    WindowKind::OneSided => "1 <= m <= n-1",
                    WindowKind::TwoSided => "1 <= m < n/2",
                },
            })
        }
    }

    /// Largest admissible window for a sample of size `n` (at least 1).
    fn max_window(self, n: usize) -> usize {
        let bound = match self {
            WindowKind::OneSided => n.saturating_sub(1),
            WindowKind::TwoSided => n.div_ceil(2).saturating_sub(1),
        };
        bound.max(1)
    }
}

/// The heuristic window `floor(sqrt(n) + 0.5)`, clipped to the admissible
/// range of `kind`.
pub fn default_window(n: usize, kind: WindowKind) -> usize {
    let raw = ((n as f64).sqrt() + 0.5).floor() as usize;
    raw.clamp(1, kind.max_window(n))
}

/// Boundary weight `c_i` of the two-sided spacing estimators.
pub fn c_weight(n: usize, m: usize, i: usize) -> Result<f64> {
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange { index: i as i64, n });
    }
    WindowKind::TwoSided.validate(n, m)?;
    let (i, n, mf) = (i as f64, n as f64, m as f64);
    Ok(if i <= mf {
        1.0 + (i - 1.0) / mf
    } else if i <= n - mf {
        2.0
    } else {
        1.0 + (n - i) / mf
    })
}

/// Standard deviation with the `n - 1` divisor.
pub fn sample_std(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::EmptyOrSingleton { len: n });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = (ss / (n - 1) as f64).sqrt();
    if sd > 0.0 && sd.is_finite() {
        Ok(sd)
    } else {
        Err(Error::ZeroVariance)
    }
}

/// `(1/N) sum (t - mean t)^2`, the population variance of `terms`.
///
/// The terms are shifted by the first one before averaging, so a constant
/// sequence yields exactly zero. The result is never negative.
pub(crate) fn population_variance(terms: &[f64]) -> f64 {
    let Some(&shift) = terms.first() else {
        return 0.0;
    };
    let len = terms.len() as f64;
    let mean = terms.iter().map(|t| t - shift).sum::<f64>() / len;
    terms
        .iter()
        .map(|t| {
            let d = t - shift - mean;
            d * d
        })
        .sum::<f64>()
        / len
}

/// Weighted analogue of [`population_variance`]; weights must sum to one.
pub(crate) fn weighted_variance(terms: &[f64], weights: &[f64]) -> f64 {
    let Some(&shift) = terms.first() else {
        return 0.0;
    };
    let mean: f64 = terms.iter().zip(weights).map(|(t, w)| w * (t - shift)).sum();
    terms
        .iter()
        .zip(weights)
        .map(|(t, w)| {
            let d = t - shift - mean;
            w * d * d
        })
        .sum()
}
