//! Kernel density estimation, quadrature grids and the smooth quantile-density
//! estimator.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::sample::{sample_std, Sample};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Default number of nodes on data-space grids.
pub const DEFAULT_GRID_POINTS: usize = 2048;
/// Default number of midpoint nodes on the probability scale.
pub const DEFAULT_U_POINTS: usize = 1024;
/// Grids are padded by this many bandwidths beyond the extreme observations.
pub const TAIL_BANDWIDTHS: f64 = 4.0;
const MIN_GRID_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Kernel {
    #[default]
    Gaussian,
}

impl Kernel {
    #[inline]
    pub fn eval(self, z: f64) -> f64 {
        match self {
            Kernel::Gaussian => FRAC_1_SQRT_2PI * (-0.5 * z * z).exp(),
        }
    }

    /// Kernel mass at or below `z`.
    pub fn cdf(self, z: f64) -> f64 {
        match self {
            Kernel::Gaussian => 0.5 * erfc(-z / std::f64::consts::SQRT_2),
        }
    }
}

/// Rule-of-thumb bandwidth `1.06 s n^(-1/5)`.
pub fn silverman_bandwidth(n: usize, s: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::NonpositiveScale(s));
    }
    Ok(1.06 * s * (n as f64).powf(-0.2))
}

/// A fixed-bandwidth kernel density estimate over a set of points.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityModel {
    kernel: Kernel,
    bandwidth: f64,
    data: Vec<f64>,
}

impl DensityModel {
    pub fn new(data: &[f64], bandwidth: f64) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::TooFewPoints { needed: 1, got: 0 });
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::NonpositiveScale(bandwidth));
        }
        Ok(Self {
            kernel: Kernel::Gaussian,
            bandwidth,
            data: data.to_vec(),
        })
    }

    /// Gaussian KDE with the rule-of-thumb bandwidth.
    pub fn silverman(sample: &Sample) -> Result<Self> {
        let h = silverman_bandwidth(sample.len(), sample.std_dev()?)?;
        Self::new(sample.values(), h)
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    /// `(1/(n h)) sum K((x - X_i)/h)`.
    pub fn density(&self, x: f64) -> f64 {
        let inv_h = 1.0 / self.bandwidth;
        let sum: f64 = self
            .data
            .iter()
            .map(|&xi| self.kernel.eval((x - xi) * inv_h))
            .sum();
        sum * inv_h / self.data.len() as f64
    }

    pub fn density_on(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.density(x)).collect()
    }

    /// Estimated mass below `x`.
    pub fn mass_below(&self, x: f64) -> f64 {
        let inv_h = 1.0 / self.bandwidth;
        let sum: f64 = self
            .data
            .iter()
            .map(|&xi| self.kernel.cdf((x - xi) * inv_h))
            .sum();
        sum / self.data.len() as f64
    }

    /// Estimated mass above `x`.
    pub fn mass_above(&self, x: f64) -> f64 {
        let inv_h = 1.0 / self.bandwidth;
        let sum: f64 = self
            .data
            .iter()
            .map(|&xi| self.kernel.cdf((xi - x) * inv_h))
            .sum();
        sum / self.data.len() as f64
    }
}

/// How the leave-one-out bandwidth `h_{n-1}` gets its scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LooScale {
    /// Standard deviation of the `n - 1` retained observations.
    #[default]
    RetainedSample,
    /// Standard deviation of the full sample.
    FullSample,
}

/// Leave-one-out density at the `index`-th smallest observation (0-based):
/// the KDE of the other `n - 1` points with bandwidth `1.06 s (n-1)^(-1/5)`.
pub fn loo_kde_at(sample: &Sample, index: usize, scale: LooScale) -> Result<f64> {
    let n = sample.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    if index >= n {
        return Err(Error::IndexOutOfRange {
            index: index as i64,
            n,
        });
    }
    let full_sd = match scale {
        LooScale::FullSample => Some(sample.std_dev()?),
        LooScale::RetainedSample => None,
    };
    loo_density(sample.values(), index, full_sd)
}

/// Leave-one-out densities at every observation, in sorted order.
pub fn loo_densities(sample: &Sample, scale: LooScale) -> Result<Vec<f64>> {
    let n = sample.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    let full_sd = match scale {
        LooScale::FullSample => Some(sample.std_dev()?),
        LooScale::RetainedSample => None,
    };
    (0..n)
        .map(|i| loo_density(sample.values(), i, full_sd))
        .collect()
}

fn loo_density(values: &[f64], index: usize, full_sd: Option<f64>) -> Result<f64> {
    let n = values.len();
    let x = values[index];
    let sd = match full_sd {
        Some(sd) => sd,
        None => {
            let mean = values
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != index)
                .map(|(_, v)| v)
                .sum::<f64>()
                / (n - 1) as f64;
            let ss: f64 = values
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != index)
                .map(|(_, v)| (v - mean) * (v - mean))
                .sum();
            let sd = (ss / (n - 2) as f64).sqrt();
            if sd.is_nan() || sd <= 0.0 {
                return Err(Error::ZeroVariance);
            }
            sd
        }
    };
    let h = silverman_bandwidth(n - 1, sd)?;
    let inv_h = 1.0 / h;
    let sum: f64 = values
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != index)
        .map(|(_, &xj)| Kernel::Gaussian.eval((x - xj) * inv_h))
        .sum();
    Ok(sum * inv_h / (n - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadratureRule {
    /// Nodes at both endpoints, half weight on the ends.
    Trapezoid,
    /// Nodes at cell centres, equal weights; never touches the endpoints.
    Midpoint,
}

/// A uniform quadrature grid over `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub rule: QuadratureRule,
}

impl GridSpec {
    pub fn trapezoid(lo: f64, hi: f64, points: usize) -> Result<Self> {
        Self::new(lo, hi, points, QuadratureRule::Trapezoid)
    }

    pub fn midpoint(lo: f64, hi: f64, points: usize) -> Result<Self> {
        Self::new(lo, hi, points, QuadratureRule::Midpoint)
    }

    fn new(lo: f64, hi: f64, points: usize, rule: QuadratureRule) -> Result<Self> {
        let invalid = |reason| Error::InvalidGrid {
            lo,
            hi,
            points,
            reason,
        };
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(invalid("bounds must be finite"));
        }
        if lo >= hi {
            return Err(invalid("need lo < hi"));
        }
        if points < MIN_GRID_POINTS {
            return Err(invalid("need at least 64 points"));
        }
        Ok(Self {
            lo,
            hi,
            points,
            rule,
        })
    }

    /// The open probability grid used for quantile-scale integrals.
    pub fn unit_midpoint(points: usize) -> Result<Self> {
        Self::midpoint(0.0, 1.0, points)
    }

    fn step(&self) -> f64 {
        match self.rule {
            QuadratureRule::Trapezoid => (self.hi - self.lo) / (self.points - 1) as f64,
            QuadratureRule::Midpoint => (self.hi - self.lo) / self.points as f64,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        let step = self.step();
        match self.rule {
            QuadratureRule::Trapezoid => (0..self.points)
                .map(|k| {
                    if k + 1 == self.points {
                        self.hi
                    } else {
                        self.lo + k as f64 * step
                    }
                })
                .collect(),
            QuadratureRule::Midpoint => (0..self.points)
                .map(|k| self.lo + (k as f64 + 0.5) * step)
                .collect(),
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        let step = self.step();
        let mut w = vec![step; self.points];
        if self.rule == QuadratureRule::Trapezoid {
            w[0] *= 0.5;
            w[self.points - 1] *= 0.5;
        }
        w
    }
}

/// `[X_(1) - 4h, X_(n) + 4h]` with the default number of trapezoid nodes.
pub fn default_grid(sample: &Sample, h: f64) -> Result<GridSpec> {
    GridSpec::trapezoid(
        sample.min() - TAIL_BANDWIDTHS * h,
        sample.max() + TAIL_BANDWIDTHS * h,
        DEFAULT_GRID_POINTS,
    )
}

/// Quadrature of node values sampled on `grid`.
pub fn integrate(values: &[f64], grid: &GridSpec) -> Result<f64> {
    if values.len() != grid.points {
        return Err(Error::LengthMismatch {
            expected: grid.points,
            got: values.len(),
        });
    }
    Ok(values.iter().zip(grid.weights()).map(|(v, w)| v * w).sum())
}

/// How plot positions and the probability-scale bandwidth are chosen for the
/// quantile-density estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum QuantileSmoothing {
    /// `S_i = #{X <= X_(i)} / n` and `h_u = 1.06 sd(S) n^(-1/5)`. Depends on
    /// the data only through ranks and the KDE, so the resulting varextropy
    /// estimate is translation invariant and scales as `a^-2`.
    #[default]
    ScaleFree,
    /// `S_i = i / n` and `h_u` equal to the data-space bandwidth.
    DataBandwidth,
}

/// Smooth estimate of the quantile density `q(u) = 1 / f(Q(u))`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileDensityModel {
    u_bandwidth: f64,
    positions: Vec<f64>,
    inv_density: Vec<f64>,
}

impl QuantileDensityModel {
    pub fn new(sample: &Sample, smoothing: QuantileSmoothing) -> Result<Self> {
        let kde = DensityModel::silverman(sample)?;
        let n = sample.len();
        let values = sample.values();
        let positions: Vec<f64> = match smoothing {
            QuantileSmoothing::ScaleFree => values
                .iter()
                .map(|&x| values.partition_point(|&v| v <= x) as f64 / n as f64)
                .collect(),
            QuantileSmoothing::DataBandwidth => {
                (1..=n).map(|i| i as f64 / n as f64).collect()
            }
        };
        let u_bandwidth = match smoothing {
            QuantileSmoothing::ScaleFree => silverman_bandwidth(n, sample_std(&positions)?)?,
            QuantileSmoothing::DataBandwidth => kde.bandwidth(),
        };
        let inv_density = values
            .iter()
            .enumerate()
            .map(|(index, &x)| {
                let f = kde.density(x);
                if f > 0.0 && f.is_finite() {
                    Ok(1.0 / f)
                } else {
                    Err(Error::DegenerateDensity { index })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            u_bandwidth,
            positions,
            inv_density,
        })
    }

    pub fn u_bandwidth(&self) -> f64 {
        self.u_bandwidth
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// `(1/(n h_u)) sum K((S_i - u)/h_u) / f_n(X_(i))`.
    pub fn eval(&self, u: f64) -> f64 {
        let inv_h = 1.0 / self.u_bandwidth;
        let sum: f64 = self
            .positions
            .iter()
            .zip(&self.inv_density)
            .map(|(&s, &g)| Kernel::Gaussian.eval((s - u) * inv_h) * g)
            .sum();
        sum * inv_h / self.positions.len() as f64
    }
}

/// Convenience wrapper: `q~_n(u)` with the default smoothing.
pub fn quantile_density(sample: &Sample, u: f64) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidParameter(format!("u={u} must lie in (0, 1)")));
    }
    Ok(QuantileDensityModel::new(sample, QuantileSmoothing::default())?.eval(u))
}
