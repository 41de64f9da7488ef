//! The five nonparametric varextropy estimators.
//!
//! Varextropy is `VJ(X) = Var[-f(X)/2] = (1/4)[int f^3 - (int f^2)^2]`. Every
//! estimator here plugs some density estimate into that variance form:
//!
//! * [`vjv`]: local histogram densities `m / ((n+1)(X_(j+m) - X_(j)))` from
//!   one-sided spacings;
//! * [`vjd`]: the kernel density estimate, integrated on a grid;
//! * [`vjb`]: leave-one-out kernel densities averaged over the sample;
//! * [`vjs`]: the smooth quantile-density estimate on the probability scale;
//! * [`vjq`]: two-sided spacings with boundary weights `c_i`.
//!
//! The spacing and resubstitution forms are computed as population variances
//! of their terms, so they are never negative.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::density::{
    silverman_bandwidth, DensityModel, GridSpec, LooScale, QuadratureRule, QuantileDensityModel,
    QuantileSmoothing, DEFAULT_GRID_POINTS, DEFAULT_U_POINTS, TAIL_BANDWIDTHS,
};
use crate::error::{Error, Result};
use crate::sample::{
    c_weight, default_window, population_variance, weighted_variance, Sample, WindowKind,
};

/// Largest tolerated KDE mass left outside an integration grid.
pub const MAX_MISSING_MASS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EstimatorId {
    Vjv,
    Vjd,
    Vjb,
    Vjs,
    Vjq,
}

impl EstimatorId {
    pub const ALL: [EstimatorId; 5] = [Self::Vjv, Self::Vjd, Self::Vjb, Self::Vjs, Self::Vjq];

    pub fn name(self) -> &'static str {
        match self {
            Self::Vjv => "VJV",
            Self::Vjd => "VJD",
            Self::Vjb => "VJB",
            Self::Vjs => "VJS",
            Self::Vjq => "VJQ",
        }
    }
}

impl fmt::Display for EstimatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown estimator '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarextropyEstimate {
    pub estimator: EstimatorId,
    pub value: f64,
    pub window_m: Option<usize>,
    pub bandwidth_h: Option<f64>,
    pub grid: Option<GridSpec>,
}

/// Tuning knobs for [`estimate`]. Unset fields fall back to the defaults:
/// `m = floor(sqrt(n) + 0.5)` and the rule-of-thumb bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorOptions {
    pub m: Option<usize>,
    pub bandwidth: Option<f64>,
    pub grid_points: usize,
    pub u_points: usize,
    /// Known lower end of the support. When set, the KDE integrals in VJD
    /// start there instead of four bandwidths below the sample minimum.
    pub support_lower: Option<f64>,
    pub loo_scale: LooScale,
    pub smoothing: QuantileSmoothing,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            m: None,
            bandwidth: None,
            grid_points: DEFAULT_GRID_POINTS,
            u_points: DEFAULT_U_POINTS,
            support_lower: None,
            loo_scale: LooScale::default(),
            smoothing: QuantileSmoothing::default(),
        }
    }
}

/// Runs estimator `id` on `sample` with `opts`.
pub fn estimate(id: EstimatorId, sample: &Sample, opts: &EstimatorOptions) -> Result<VarextropyEstimate> {
    let n = sample.len();
    match id {
        EstimatorId::Vjv => vjv(sample, opts.m.unwrap_or_else(|| default_window(n, WindowKind::OneSided))),
        EstimatorId::Vjq => vjq(sample, opts.m.unwrap_or_else(|| default_window(n, WindowKind::TwoSided))),
        EstimatorId::Vjd => {
            let h = match opts.bandwidth {
                Some(h) => h,
                None => silverman_bandwidth(n, sample.std_dev()?)?,
            };
            let grid = support_grid(sample, h, opts.support_lower, opts.grid_points)?;
            vjd(sample, h, &grid, opts.support_lower)
        }
        EstimatorId::Vjb => vjb(sample, opts.loo_scale),
        EstimatorId::Vjs => vjs(sample, &GridSpec::unit_midpoint(opts.u_points)?, opts.smoothing),
    }
}

/// One-sided spacing estimator
/// `(1/4)[T' - T''^2]` with `T'` and `T''` the means of the squared and plain
/// local histogram densities `(m/(n+1)) / (X_(j+m) - X_(j))`, `j = 1..n-m`.
pub fn vjv(sample: &Sample, m: usize) -> Result<VarextropyEstimate> {
    let n = sample.len();
    WindowKind::OneSided.validate(n, m)?;
    let x = sample.values();
    let scale = m as f64 / (n + 1) as f64;
    let terms = (0..n - m)
        .map(|j| {
            let gap = x[j + m] - x[j];
            if gap > 0.0 {
                Ok(scale / gap)
            } else {
                Err(Error::TiedSpacings { index: j + 1 })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VarextropyEstimate {
        estimator: EstimatorId::Vjv,
        value: 0.25 * population_variance(&terms),
        window_m: Some(m),
        bandwidth_h: None,
        grid: None,
    })
}

/// Two-sided spacing estimator with terms
/// `t_i = (c_i m / n) / (X_(i+m) - X_(i-m))`, indices clamped to `1..=n`.
pub fn vjq(sample: &Sample, m: usize) -> Result<VarextropyEstimate> {
    let n = sample.len();
    WindowKind::TwoSided.validate(n, m)?;
    let terms = two_sided_terms(sample, m)?;
    Ok(VarextropyEstimate {
        estimator: EstimatorId::Vjq,
        value: 0.25 * population_variance(&terms),
        window_m: Some(m),
        bandwidth_h: None,
        grid: None,
    })
}

/// `c_i (m/n) / (X_(i+m) - X_(i-m))` for `i = 1..=n`. Shared with the
/// log-spacing competitor statistic.
pub(crate) fn two_sided_terms(sample: &Sample, m: usize) -> Result<Vec<f64>> {
    let n = sample.len();
    let mi = m as i64;
    let scale = m as f64 / n as f64;
    (1..=n)
        .map(|i| {
            let gap = two_sided_gap(sample, i, mi);
            if gap > 0.0 {
                Ok(c_weight(n, m, i)? * scale / gap)
            } else {
                Err(Error::TiedSpacings { index: i })
            }
        })
        .collect()
}

#[inline]
pub(crate) fn two_sided_gap(sample: &Sample, i: usize, m: i64) -> f64 {
    let i = i as i64;
    sample.order_statistic_clamped(i + m) - sample.order_statistic_clamped(i - m)
}

/// Trapezoid grid for the VJD integrals: `[X_(1) - 4h, X_(n) + 4h]`, with the
/// lower end raised to `support_lower` when that is larger.
pub fn support_grid(sample: &Sample, h: f64, support_lower: Option<f64>, points: usize) -> Result<GridSpec> {
    let mut lo = sample.min() - TAIL_BANDWIDTHS * h;
    if let Some(bound) = support_lower {
        if sample.min() < bound {
            return Err(Error::DomainError {
                value: sample.min(),
                model: format!("support [{bound}, inf)"),
            });
        }
        lo = lo.max(bound);
    }
    GridSpec::trapezoid(lo, sample.max() + TAIL_BANDWIDTHS * h, points)
}

/// Kernel estimator `(1/4)[int f^3 - (int f^2)^2]` with the KDE of bandwidth
/// `h` evaluated on `grid`.
///
/// With `support_lower` set, the KDE mass that spills below the support is
/// dropped from both integrals rather than folded back. The grid must still
/// cover everything else up to [`MAX_MISSING_MASS`]. If quadrature pushes the
/// discrete mass above one it is rescaled to one, which keeps the result
/// nonnegative by Cauchy-Schwarz.
pub fn vjd(sample: &Sample, h: f64, grid: &GridSpec, support_lower: Option<f64>) -> Result<VarextropyEstimate> {
    let kde = DensityModel::new(sample.values(), h)?;
    if grid.rule != QuadratureRule::Trapezoid {
        return Err(Error::InvalidGrid {
            lo: grid.lo,
            hi: grid.hi,
            points: grid.points,
            reason: "VJD needs a trapezoid grid",
        });
    }
    let below_support = match support_lower {
        Some(bound) if grid.lo < bound => {
            return Err(Error::InvalidGrid {
                lo: grid.lo,
                hi: grid.hi,
                points: grid.points,
                reason: "grid starts below the support",
            })
        }
        Some(bound) => kde.mass_below(bound),
        None => 0.0,
    };
    let missing = (kde.mass_below(grid.lo) - below_support).max(0.0) + kde.mass_above(grid.hi);
    if missing > MAX_MISSING_MASS {
        return Err(Error::GridTooNarrow { missing });
    }

    let nodes = grid.nodes();
    let weights = grid.weights();
    let (mut i1, mut i2, mut i3) = (0.0, 0.0, 0.0);
    for (x, w) in nodes.iter().zip(&weights) {
        let f = kde.density(*x);
        i1 += w * f;
        i2 += w * f * f;
        i3 += w * f * f * f;
    }
    if i1 > 1.0 {
        i2 /= i1 * i1;
        i3 /= i1 * i1 * i1;
    }
    Ok(VarextropyEstimate {
        estimator: EstimatorId::Vjd,
        value: 0.25 * (i3 - i2 * i2),
        window_m: None,
        bandwidth_h: Some(h),
        grid: Some(*grid),
    })
}

/// Resubstitution estimator: a quarter of the population variance of the
/// leave-one-out densities `f~_n(X_i)`.
pub fn vjb(sample: &Sample, scale: LooScale) -> Result<VarextropyEstimate> {
    let full_sd = sample.std_dev()?;
    let d = crate::density::loo_densities(sample, scale)?;
    Ok(VarextropyEstimate {
        estimator: EstimatorId::Vjb,
        value: 0.25 * population_variance(&d),
        window_m: None,
        bandwidth_h: match scale {
            LooScale::FullSample => Some(silverman_bandwidth(sample.len() - 1, full_sd)?),
            LooScale::RetainedSample => None,
        },
        grid: None,
    })
}

/// Quantile-scale estimator `(1/4)[int du/q~^2 - (int du/q~)^2]` on an open
/// grid over `(0, 1)`.
pub fn vjs(sample: &Sample, u_grid: &GridSpec, smoothing: QuantileSmoothing) -> Result<VarextropyEstimate> {
    if u_grid.lo != 0.0 || u_grid.hi != 1.0 || u_grid.rule != QuadratureRule::Midpoint {
        return Err(Error::InvalidGrid {
            lo: u_grid.lo,
            hi: u_grid.hi,
            points: u_grid.points,
            reason: "VJS needs a midpoint grid over (0, 1)",
        });
    }
    let model = QuantileDensityModel::new(sample, smoothing)?;
    let recip: Vec<f64> = u_grid.nodes().iter().map(|&u| 1.0 / model.eval(u)).collect();
    if let Some(index) = recip.iter().position(|r| !r.is_finite()) {
        return Err(Error::DegenerateDensity { index });
    }
    Ok(VarextropyEstimate {
        estimator: EstimatorId::Vjs,
        value: 0.25 * weighted_variance(&recip, &u_grid.weights()),
        window_m: None,
        bandwidth_h: Some(model.u_bandwidth()),
        grid: Some(*u_grid),
    })
}
