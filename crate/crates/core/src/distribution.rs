//! Reference distributions: closed-form varextropy, CDFs for the probability
//! integral transform, and inverse-CDF sampling for the simulation studies.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Uniform draw strictly inside `(0, 1)` built from the top 53 bits.
pub fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ReferenceDistribution {
    Uniform01,
    ExponentialMean1,
    /// Gamma with shape 2 and scale 1.
    Gamma21,
    /// Lifetime law with CDF `exp((1 - exp(beta/x)) / beta)` on `x > 0`.
    A { beta: f64 },
    Normal { mean: f64, sd: f64 },
    Exponential { rate: f64 },
}

impl ReferenceDistribution {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(format!("{self}: {what}")));
        match *self {
            Self::A { beta } if !(beta > 0.0 && beta.is_finite()) => bad("beta must be positive"),
            Self::Normal { mean, sd } if !(sd > 0.0 && sd.is_finite() && mean.is_finite()) => {
                bad("sd must be positive")
            }
            Self::Exponential { rate } if !(rate > 0.0 && rate.is_finite()) => {
                bad("rate must be positive")
            }
            _ => Ok(()),
        }
    }

    /// Lower end of the support, when bounded.
    pub fn support_lower(&self) -> Option<f64> {
        match self {
            Self::Normal { .. } => None,
            _ => Some(0.0),
        }
    }

    fn in_support(&self, x: f64) -> bool {
        match self {
            Self::Uniform01 => (0.0..=1.0).contains(&x),
            Self::A { .. } => x > 0.0,
            Self::Normal { .. } => x.is_finite(),
            _ => x >= 0.0,
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if !self.in_support(x) {
            return 0.0;
        }
        match *self {
            Self::Uniform01 => 1.0,
            Self::ExponentialMean1 => (-x).exp(),
            Self::Gamma21 => x * (-x).exp(),
            Self::Exponential { rate } => rate * (-rate * x).exp(),
            Self::Normal { mean, sd } => {
                let z = (x - mean) / sd;
                (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
            }
            Self::A { beta } => {
                if beta / x > 700.0 {
                    return 0.0;
                }
                let e = (beta / x).exp();
                ((1.0 - e) / beta).exp() * e / (x * x)
            }
        }
    }

    /// CDF; errors for values outside the support.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !self.in_support(x) {
            return Err(Error::DomainError {
                value: x,
                model: self.to_string(),
            });
        }
        Ok(match *self {
            Self::Uniform01 => x,
            Self::ExponentialMean1 => -(-x).exp_m1(),
            Self::Gamma21 => 1.0 - (-x).exp() * (1.0 + x),
            Self::Exponential { rate } => -(-rate * x).exp_m1(),
            Self::Normal { mean, sd } => Normal::new(mean, sd)
                .map_err(|e| Error::InvalidParameter(e.to_string()))?
                .cdf(x),
            Self::A { beta } => ((1.0 - (beta / x).exp()) / beta).exp(),
        })
    }

    /// Draws one value by inversion (Gamma(2,1) as a sum of two exponentials).
    pub fn draw(&self, rng: &mut impl RngCore) -> f64 {
        let u = open_unit(rng);
        match *self {
            Self::Uniform01 => u,
            Self::ExponentialMean1 => -u.ln(),
            Self::Gamma21 => -u.ln() - open_unit(rng).ln(),
            Self::Exponential { rate } => -u.ln() / rate,
            Self::Normal { mean, sd } => Normal::new(mean, sd)
                .map(|d| d.inverse_cdf(u))
                .unwrap_or(f64::NAN),
            Self::A { beta } => beta / (1.0 - beta * u.ln()).ln(),
        }
    }

    /// True varextropy `Var[-f(X)/2] = (1/4)[int f^3 - (int f^2)^2]`.
    ///
    /// Closed forms for every family except `A`, which has no elementary
    /// form and is integrated numerically on the quantile scale.
    pub fn varextropy(&self) -> f64 {
        match *self {
            Self::Uniform01 => 0.0,
            Self::ExponentialMean1 => 1.0 / 48.0,
            Self::Gamma21 => 5.0 / 1728.0,
            Self::Exponential { rate } => rate * rate / 48.0,
            Self::Normal { sd, .. } => {
                (2.0 / 3f64.sqrt() - 1.0) / (16.0 * std::f64::consts::PI * sd * sd)
            }
            Self::A { beta } => a_distribution_varextropy(beta),
        }
    }
}

/// Midpoint rule over `u` of `f(Q(u))` and its square, where for the A law
/// `f(Q(u)) = u (1 - beta ln u) ln(1 - beta ln u)^2 / beta^2`.
fn a_distribution_varextropy(beta: f64) -> f64 {
    const NODES: usize = 400_000;
    let (mut s1, mut s2) = (0.0, 0.0);
    for k in 0..NODES {
        let u = (k as f64 + 0.5) / NODES as f64;
        let t = 1.0 - beta * u.ln();
        let l = t.ln();
        let f = u * t * l * l / (beta * beta);
        s1 += f;
        s2 += f * f;
    }
    let (m1, m2) = (s1 / NODES as f64, s2 / NODES as f64);
    0.25 * (m2 - m1 * m1)
}

/// Analytic (or high-resolution numeric) varextropy of `d`.
pub fn analytic_varextropy(d: &ReferenceDistribution) -> Result<f64> {
    d.validate()?;
    Ok(d.varextropy())
}

impl fmt::Display for ReferenceDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform01 => write!(f, "uniform01"),
            Self::ExponentialMean1 => write!(f, "exp1"),
            Self::Gamma21 => write!(f, "gamma21"),
            Self::A { beta } => write!(f, "a:{beta}"),
            Self::Normal { mean, sd } => write!(f, "normal:{mean}:{sd}"),
            Self::Exponential { rate } => write!(f, "exponential:{rate}"),
        }
    }
}

impl FromStr for ReferenceDistribution {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form, e.g. `gamma21`, `a:125.662`,
    /// `normal:0:1`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| Error::InvalidParameter(format!("{s}: missing parameter")))?
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("{s}: bad number")))
        };
        let d = match (parts[0].to_ascii_lowercase().as_str(), parts.len()) {
            ("uniform01" | "uniform", 1) => Self::Uniform01,
            ("exp1", 1) => Self::ExponentialMean1,
            ("gamma21", 1) => Self::Gamma21,
            ("a", 2) => Self::A { beta: num(1)? },
            ("normal", 3) => Self::Normal {
                mean: num(1)?,
                sd: num(2)?,
            },
            ("exponential", 2) => Self::Exponential { rate: num(1)? },
            _ => return Err(Error::InvalidParameter(format!("unknown distribution '{s}'"))),
        };
        d.validate()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent route: trapezoid quadrature of f^2 and f^3 in x.
    fn numeric_varextropy(d: &ReferenceDistribution, lo: f64, hi: f64) -> f64 {
        let n = 2_000_000;
        let step = (hi - lo) / n as f64;
        let (mut i2, mut i3) = (0.0, 0.0);
        for k in 0..=n {
            let x = lo + k as f64 * step;
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            let f = d.pdf(x);
            i2 += w * f * f * step;
            i3 += w * f * f * f * step;
        }
        0.25 * (i3 - i2 * i2)
    }

    #[test]
    fn closed_forms() {
        assert_eq!(ReferenceDistribution::Uniform01.varextropy(), 0.0);
        assert!((ReferenceDistribution::ExponentialMean1.varextropy() - 0.020_833_333_333_333_3).abs() < 1e-15);
        assert!((ReferenceDistribution::Gamma21.varextropy() - 0.002_893_518_518_518_5).abs() < 1e-15);
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        for (d, lo, hi) in [
            (ReferenceDistribution::ExponentialMean1, 0.0, 60.0),
            (ReferenceDistribution::Gamma21, 0.0, 80.0),
            (ReferenceDistribution::Exponential { rate: 2.5 }, 0.0, 30.0),
            (ReferenceDistribution::Normal { mean: 1.0, sd: 0.7 }, -9.0, 11.0),
            (ReferenceDistribution::A { beta: 2.0 }, 1e-9, 2000.0),
        ] {
            let a = d.varextropy();
            let b = numeric_varextropy(&d, lo, hi);
            assert!((a - b).abs() < 1e-6 * a.abs().max(1e-3), "{d}: {a} vs {b}");
        }
    }

    #[test]
    fn cdfs_and_support() {
        let a = ReferenceDistribution::A { beta: 125.662 };
        assert!(a.cdf(0.0).is_err());
        assert!(a.cdf(-1.0).is_err());
        let p = a.cdf(30.0).unwrap();
        assert!(p > 0.0 && p < 1.0);
        assert_eq!(ReferenceDistribution::Uniform01.cdf(0.3).unwrap(), 0.3);
        assert!(ReferenceDistribution::Uniform01.cdf(1.2).is_err());
        let g = ReferenceDistribution::Gamma21.cdf(1.0).unwrap();
        assert!((g - (1.0 - 2.0 / std::f64::consts::E)).abs() < 1e-15);
        let n = ReferenceDistribution::Normal { mean: 0.0, sd: 1.0 }.cdf(0.0).unwrap();
        assert!((n - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inversion_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in [
            ReferenceDistribution::Uniform01,
            ReferenceDistribution::ExponentialMean1,
            ReferenceDistribution::Exponential { rate: 0.03 },
            ReferenceDistribution::A { beta: 125.662 },
            ReferenceDistribution::Normal { mean: 3.0, sd: 2.0 },
        ] {
            for _ in 0..100 {
                let x = d.draw(&mut rng);
                let p = d.cdf(x).unwrap();
                assert!(p > 0.0 && p < 1.0, "{d} {x}");
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for d in [
            ReferenceDistribution::Uniform01,
            ReferenceDistribution::ExponentialMean1,
            ReferenceDistribution::Gamma21,
            ReferenceDistribution::A { beta: 125.662 },
            ReferenceDistribution::Normal { mean: -1.5, sd: 0.25 },
            ReferenceDistribution::Exponential { rate: 0.032 },
        ] {
            assert_eq!(d.to_string().parse::<ReferenceDistribution>().unwrap(), d);
        }
        assert!("normal:0:-1".parse::<ReferenceDistribution>().is_err());
        assert!("cauchy".parse::<ReferenceDistribution>().is_err());
    }
}
