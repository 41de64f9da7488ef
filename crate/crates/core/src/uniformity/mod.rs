//! Goodness-of-fit tests of uniformity on `[0, 1]`.
//!
//! The uniform law is the unique density on the unit interval with zero
//! varextropy, so each varextropy estimator doubles as a test statistic that
//! rejects for large values. Seven competitor statistics (Kolmogorov-Smirnov
//! and six varentropy-type statistics) are provided for power comparisons.
//! Null distributions have no closed form; critical values come from
//! [`calibrate_critical_value`].

mod calibration;
mod competitors;
mod pit;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use calibration::{
    calibrate_critical_value, calibrate_tables, empirical_quantile, format_tables, parse_tables,
    simulate_null, Calibration, CriticalValueTable, NullSimulation, MIN_CALIBRATION_REPS,
};
pub use competitors::{competitor_statistic, competitor_statistic_with_window, ks_statistic};
pub use pit::{fit_model, probability_integral_transform, ModelFamily};

use crate::density::LooScale;
use crate::error::{Error, Result};
use crate::estimators::{estimate, EstimatorId, EstimatorOptions};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatKind {
    Gv,
    Gd,
    Gb,
    Gs,
    Gq,
    Ks,
    Tv,
    Te,
    Td,
    Tb,
    Tc,
    Ta,
}

impl StatKind {
    pub const ALL: [StatKind; 12] = [
        Self::Gv,
        Self::Gd,
        Self::Gb,
        Self::Gs,
        Self::Gq,
        Self::Ks,
        Self::Tv,
        Self::Te,
        Self::Td,
        Self::Tb,
        Self::Tc,
        Self::Ta,
    ];
    pub const VAREXTROPY: [StatKind; 5] = [Self::Gv, Self::Gd, Self::Gb, Self::Gs, Self::Gq];
    pub const COMPETITORS: [StatKind; 7] = [
        Self::Tv,
        Self::Te,
        Self::Td,
        Self::Tb,
        Self::Tc,
        Self::Ta,
        Self::Ks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Gv => "GV",
            Self::Gd => "GD",
            Self::Gb => "GB",
            Self::Gs => "GS",
            Self::Gq => "GQ",
            Self::Ks => "KS",
            Self::Tv => "TV",
            Self::Te => "TE",
            Self::Td => "TD",
            Self::Tb => "TB",
            Self::Tc => "TC",
            Self::Ta => "TA",
        }
    }

    /// The varextropy estimator behind a G statistic.
    pub fn estimator(self) -> Option<EstimatorId> {
        match self {
            Self::Gv => Some(EstimatorId::Vjv),
            Self::Gd => Some(EstimatorId::Vjd),
            Self::Gb => Some(EstimatorId::Vjb),
            Self::Gs => Some(EstimatorId::Vjs),
            Self::Gq => Some(EstimatorId::Vjq),
            _ => None,
        }
    }
}

impl fmt::Display for StatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown statistic '{s}'")))
    }
}

/// Parses a comma-separated list such as `GV,GD,KS`.
pub fn parse_kinds(list: &str) -> Result<Vec<StatKind>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

pub(crate) fn check_unit_interval(sample: &Sample) -> Result<()> {
    match sample
        .values()
        .iter()
        .enumerate()
        .find(|(_, &v)| !(0.0..=1.0).contains(&v))
    {
        Some((index, &value)) => Err(Error::OutOfUnitInterval { index, value }),
        None => Ok(()),
    }
}

/// Options the G statistics use: defaults throughout, integrals of the KDE
/// starting at the lower end of the unit interval.
pub fn g_statistic_options() -> EstimatorOptions {
    EstimatorOptions {
        support_lower: Some(0.0),
        loo_scale: LooScale::RetainedSample,
        ..EstimatorOptions::default()
    }
}

/// One of GV, GD, GB, GS, GQ on a sample from `[0, 1]`.
pub fn g_statistic(kind: StatKind, sample: &Sample) -> Result<f64> {
    let id = kind
        .estimator()
        .ok_or_else(|| Error::InvalidParameter(format!("{kind} is not a varextropy statistic")))?;
    check_unit_interval(sample)?;
    Ok(estimate(id, sample, &g_statistic_options())?.value)
}

/// Any of the twelve statistics.
pub fn statistic(kind: StatKind, sample: &Sample) -> Result<f64> {
    match kind {
        StatKind::Ks => ks_statistic(sample),
        k if k.estimator().is_some() => g_statistic(k, sample),
        k => competitor_statistic(k, sample),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub kind: StatKind,
    pub n: usize,
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub reject: bool,
}

/// Tests uniformity of `sample` with `kind`, rejecting when the statistic is
/// at or above the tabulated critical value for this exact sample size.
pub fn run_test(kind: StatKind, sample: &Sample, table: &CriticalValueTable) -> Result<TestOutcome> {
    if table.kind != kind {
        return Err(Error::InvalidParameter(format!(
            "table is for {} but {kind} was requested",
            table.kind
        )));
    }
    let n = sample.len();
    let critical_value = table
        .get(n)
        .ok_or(Error::MissingCriticalValue { kind, n })?;
    let value = statistic(kind, sample)?;
    Ok(decide(kind, n, value, critical_value, table.alpha))
}

pub(crate) fn decide(kind: StatKind, n: usize, statistic: f64, critical_value: f64, alpha: f64) -> TestOutcome {
    TestOutcome {
        kind,
        n,
        statistic,
        critical_value,
        alpha,
        reject: statistic >= critical_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_parse() {
        assert_eq!(parse_kinds("gv, GD,ks").unwrap(), vec![StatKind::Gv, StatKind::Gd, StatKind::Ks]);
        assert!(parse_kinds("GV,XX").is_err());
        for k in StatKind::ALL {
            assert_eq!(k.name().parse::<StatKind>().unwrap(), k);
        }
    }

    #[test]
    fn equispaced_grid_is_flat() {
        let n = 25;
        let s = Sample::new((1..=n).map(|i| i as f64 / (n + 1) as f64).collect::<Vec<_>>()).unwrap();
        assert!(g_statistic(StatKind::Gv, &s).unwrap().abs() < 1e-12);
        // Interior terms are equal; the clamped ends are compensated by c_i.
        assert!(g_statistic(StatKind::Gq, &s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn rejects_values_outside_unit_interval() {
        let s = Sample::new(vec![0.2, 0.5, 1.5]).unwrap();
        assert_eq!(
            g_statistic(StatKind::Gd, &s),
            Err(Error::OutOfUnitInterval { index: 2, value: 1.5 })
        );
        assert!(statistic(StatKind::Ks, &s).is_err());
        assert!(statistic(StatKind::Tv, &s).is_err());
    }

    #[test]
    fn boundary_value_rejects() {
        let s = Sample::new(vec![0.1, 0.5, 0.9]).unwrap();
        let ks = ks_statistic(&s).unwrap();
        let mut table = CriticalValueTable::new(StatKind::Ks, 0.05, 1000, 1);
        table.insert(3, ks);
        assert!(run_test(StatKind::Ks, &s, &table).unwrap().reject);
        table.insert(3, ks + 1e-12);
        assert!(!run_test(StatKind::Ks, &s, &table).unwrap().reject);
        let four = Sample::new(vec![0.1, 0.5, 0.9, 0.95]).unwrap();
        assert_eq!(
            run_test(StatKind::Ks, &four, &table),
            Err(Error::MissingCriticalValue { kind: StatKind::Ks, n: 4 })
        );
    }
}
