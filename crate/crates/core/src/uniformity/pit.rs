//! Probability integral transform and maximum-likelihood fits for testing
//! composite hypotheses through the uniformity tests.
//!
//! Estimating parameters changes the null distribution of the transformed
//! sample; as is common practice, the uniform critical values are still used.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::ReferenceDistribution;
use crate::error::{Error, Result};
use crate::sample::{sample_std, Sample};

const PIT_EPSILON: f64 = 1e-12;

/// `F0(X_i)` for every observation, sorted. Exact 0 or 1 (possible only
/// through floating-point saturation) is moved to `1e-12` or `1 - 1e-12`.
pub fn probability_integral_transform(values: &[f64], model: &ReferenceDistribution) -> Result<Sample> {
    model.validate()?;
    let u = values
        .iter()
        .map(|&x| {
            let p = model.cdf(x)?;
            Ok(if p <= 0.0 {
                PIT_EPSILON
            } else if p >= 1.0 {
                1.0 - PIT_EPSILON
            } else {
                p
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Sample::new(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelFamily {
    Uniform,
    Normal,
    Exponential,
    A,
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Normal => "normal",
            Self::Exponential => "exponential",
            Self::A => "a",
        })
    }
}

impl FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" | "uniform01" => Ok(Self::Uniform),
            "normal" => Ok(Self::Normal),
            "exponential" | "exp" => Ok(Self::Exponential),
            "a" => Ok(Self::A),
            _ => Err(Error::InvalidParameter(format!("unknown model family '{s}'"))),
        }
    }
}

/// Maximum-likelihood fit. Normal uses the `n-1` standard deviation.
pub fn fit_model(family: ModelFamily, values: &[f64]) -> Result<ReferenceDistribution> {
    if values.len() < 2 {
        return Err(Error::EmptyOrSingleton { len: values.len() });
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFiniteValue { index, value });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    match family {
        ModelFamily::Uniform => Ok(ReferenceDistribution::Uniform01),
        ModelFamily::Normal => Ok(ReferenceDistribution::Normal {
            mean,
            sd: sample_std(values)?,
        }),
        ModelFamily::Exponential => {
            check_positive(values, "exponential")?;
            Ok(ReferenceDistribution::Exponential { rate: 1.0 / mean })
        }
        ModelFamily::A => {
            check_positive(values, "a")?;
            Ok(ReferenceDistribution::A { beta: fit_a_beta(values)? })
        }
    }
}

fn check_positive(values: &[f64], model: &str) -> Result<()> {
    match values.iter().find(|&&v| v <= 0.0) {
        Some(&value) => Err(Error::DomainError {
            value,
            model: model.to_string(),
        }),
        None => Ok(()),
    }
}

/// Log-likelihood of the A law, `sum (1 - e^{b/x})/b + b/x - 2 ln x`.
fn a_log_likelihood(beta: f64, values: &[f64]) -> f64 {
    values
        .iter()
        .map(|&x| {
            let z = beta / x;
            -z.exp_m1() / beta + z - 2.0 * x.ln()
        })
        .sum()
}

/// Log-spaced scan to bracket the maximum, then golden-section refinement.
/// `beta / min(x)` stays below 700 so `exp` cannot overflow.
fn fit_a_beta(values: &[f64]) -> Result<f64> {
    const SCAN: usize = 400;
    let xmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let (lo, hi) = ((1e-8 * xmin).ln(), (700.0 * xmin).ln());
    let betas: Vec<f64> = (0..=SCAN)
        .map(|k| (lo + (hi - lo) * k as f64 / SCAN as f64).exp())
        .collect();
    let ll: Vec<f64> = betas.iter().map(|&b| a_log_likelihood(b, values)).collect();
    let best = (0..ll.len())
        .filter(|&k| ll[k].is_finite())
        .max_by(|&a, &b| ll[a].total_cmp(&ll[b]))
        .ok_or_else(|| Error::NoConvergence("A likelihood is not finite".into()))?;
    if best == 0 || best == SCAN {
        return Err(Error::NoConvergence(format!(
            "A likelihood maximum lies at the search boundary beta = {}",
            betas[best]
        )));
    }
    let f = |b: f64| -a_log_likelihood(b, values);
    let (mut a, mut b) = (betas[best - 1], betas[best + 1]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a) <= 1e-10 * (a + b) {
            return Ok(0.5 * (a + b));
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    Err(Error::NoConvergence("golden-section search did not converge".into()))
}
