//! Nonparametric estimation of varextropy, `Var[-f(X)/2]`, and goodness-of-fit
//! tests of uniformity built on it.
//!
//! ```
//! use varextropy::{estimate, EstimatorId, EstimatorOptions, Sample};
//!
//! let s = Sample::new(vec![0.05, 0.21, 0.33, 0.48, 0.52, 0.69, 0.74, 0.93]).unwrap();
//! let v = estimate(EstimatorId::Vjv, &s, &EstimatorOptions::default()).unwrap();
//! assert!(v.value >= 0.0);
//! ```

pub mod dataset;
pub mod density;
pub mod distribution;
pub mod error;
pub mod estimators;
pub mod rng;
pub mod sample;
pub mod simulation;
pub mod uniformity;

pub use dataset::parse_dataset;
pub use density::{
    default_grid, integrate, loo_kde_at, quantile_density, silverman_bandwidth, DensityModel,
    GridSpec, Kernel, LooScale, QuadratureRule, QuantileSmoothing,
};
pub use distribution::{analytic_varextropy, ReferenceDistribution};
pub use error::{Error, Result};
pub use estimators::{
    estimate, vjb, vjd, vjq, vjs, vjv, EstimatorId, EstimatorOptions, VarextropyEstimate,
};
pub use rng::{jitter, rng_substream};
pub use sample::{c_weight, default_window, sample_std, Sample, WindowKind};
pub use simulation::{
    AlternativeFamily, Alternative, PowerSource, StudyConfig, StudyKind, StudyReport,
};
pub use uniformity::{
    calibrate_critical_value, fit_model, ks_statistic, probability_integral_transform, run_test,
    statistic, CriticalValueTable, ModelFamily, StatKind, TestOutcome,
};

/// `x` with `digits` significant digits, in fixed notation when the exponent
/// is moderate and scientific otherwise.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..digits as i32).contains(&exp) {
        format!("{:.*}", (digits as i32 - 1 - exp).max(0) as usize, x)
    } else {
        sci
    }
}

#[cfg(test)]
mod tests {
    use super::format_significant;

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.145_301_94, 7), "0.1453019");
        assert_eq!(format_significant(0.033_906_331, 7), "0.03390633");
        assert_eq!(format_significant(0.0, 7), "0");
        assert_eq!(format_significant(-1.5, 3), "-1.50");
        assert_eq!(format_significant(123_456_789.0, 3), "1.23e8");
        assert_eq!(format_significant(9.999_999_9e-2, 3), "0.100");
    }
}
