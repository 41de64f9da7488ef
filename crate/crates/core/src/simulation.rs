//! Monte Carlo studies: bias and MSE of the estimators, percentage points of
//! the test statistics, and power against the A, B and C alternatives.
//!
//! Every replicate draws from its own substream (see [`crate::rng`]) and
//! results are aggregated in replicate order, so a report is a pure function
//! of its configuration.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::{open_unit, ReferenceDistribution};
use crate::error::{Error, Result};
use crate::estimators::{estimate, EstimatorId, EstimatorOptions};
use crate::format_significant;
use crate::rng::{run_replicates, total_redraws, StreamDomain, StreamRng};
use crate::sample::Sample;
use crate::uniformity::{
    calibrate_tables, empirical_quantile, simulate_null, statistic, CriticalValueTable, StatKind,
    MIN_CALIBRATION_REPS,
};

pub use crate::rng::rng_substream;

pub const MIN_STUDY_REPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlternativeFamily {
    A,
    B,
    C,
}

/// One of the alternatives `A_k`, `B_k`, `C_k` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Alternative {
    pub family: AlternativeFamily,
    pub k: f64,
}

impl Alternative {
    pub fn new(family: AlternativeFamily, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("alternative exponent must be positive, got {k}")));
        }
        Ok(Self { family, k })
    }

    /// Whether `k` is on the grid used in the published power tables.
    pub fn is_standard(&self) -> bool {
        match self.family {
            AlternativeFamily::A | AlternativeFamily::C => self.k == 1.5 || self.k == 2.0,
            AlternativeFamily::B => self.k == 1.5 || self.k == 2.0 || self.k == 3.0,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, 1.0);
        let k = self.k;
        let c = 2f64.powf(k - 1.0);
        match self.family {
            AlternativeFamily::A => 1.0 - (1.0 - x).powf(k),
            AlternativeFamily::B if x <= 0.5 => c * x.powf(k),
            AlternativeFamily::B => 1.0 - c * (1.0 - x).powf(k),
            AlternativeFamily::C if x <= 0.5 => 0.5 - c * (0.5 - x).powf(k),
            AlternativeFamily::C => 0.5 + c * (x - 0.5).powf(k),
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.family {
            AlternativeFamily::A => 'A',
            AlternativeFamily::B => 'B',
            AlternativeFamily::C => 'C',
        };
        write!(f, "{letter}{}", self.k)
    }
}

impl FromStr for Alternative {
    type Err = Error;

    /// `A1.5`, `b_2`, `C2`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::InvalidParameter(format!("unknown alternative '{s}'"));
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => AlternativeFamily::A,
            Some('B') => AlternativeFamily::B,
            Some('C') => AlternativeFamily::C,
            _ => return Err(bad()),
        };
        let k = chars.as_str().trim_start_matches('_').parse().map_err(|_| bad())?;
        Self::new(family, k)
    }
}

/// Inverse CDF of the alternative; `u` is clamped to `[0, 1]`.
pub fn inverse_cdf_alternative(alt: Alternative, u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    let k = alt.k;
    let c = 2f64.powf(k - 1.0);
    match alt.family {
        AlternativeFamily::A => 1.0 - (1.0 - u).powf(1.0 / k),
        AlternativeFamily::B if u <= 0.5 => (u / c).powf(1.0 / k),
        AlternativeFamily::B => 1.0 - ((1.0 - u) / c).powf(1.0 / k),
        AlternativeFamily::C if u <= 0.5 => 0.5 - ((0.5 - u) / c).powf(1.0 / k),
        AlternativeFamily::C => 0.5 + ((u - 0.5) / c).powf(1.0 / k),
    }
}

/// `n` inverse-CDF draws from `alt`.
pub fn sample_alternative(alt: Alternative, n: usize, rng: &mut StreamRng) -> Result<Sample> {
    Sample::new(
        (0..n)
            .map(|_| inverse_cdf_alternative(alt, open_unit(rng)))
            .collect::<Vec<_>>(),
    )
}

/// Data source of a power cell: the uniform null itself or an alternative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PowerSource {
    Uniform,
    Alternative(Alternative),
}

impl PowerSource {
    fn draw(&self, n: usize, rng: &mut StreamRng) -> Result<Sample> {
        match self {
            Self::Uniform => Sample::new((0..n).map(|_| open_unit(rng)).collect::<Vec<_>>()),
            Self::Alternative(alt) => sample_alternative(*alt, n, rng),
        }
    }
}

impl fmt::Display for PowerSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => f.write_str("uniform"),
            Self::Alternative(a) => a.fmt(f),
        }
    }
}

impl FromStr for PowerSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if matches!(s.trim().to_ascii_lowercase().as_str(), "uniform" | "u" | "uniform01") {
            Ok(Self::Uniform)
        } else {
            s.parse().map(Self::Alternative)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StudyKind {
    MseBias,
    Power,
    Critical,
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MseBias => "mse",
            Self::Power => "power",
            Self::Critical => "critical",
        })
    }
}

impl FromStr for StudyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mse" | "bias" | "mse_bias" => Ok(Self::MseBias),
            "power" => Ok(Self::Power),
            "critical" => Ok(Self::Critical),
            _ => Err(Error::InvalidParameter(format!("unknown study '{s}' (mse|power|critical)"))),
        }
    }
}

/// A study description, read from `key = value` lines.
///
/// Keys: `study`, `estimators`, `statistics`, `sizes`, `distributions`,
/// `alternatives`, `reps`, `seed`, `alpha`, `calibration_reps`. Lists are
/// comma-separated; `#` starts a comment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub study: StudyKind,
    pub estimators: Vec<EstimatorId>,
    pub statistics: Vec<StatKind>,
    pub sizes: Vec<usize>,
    pub distributions: Vec<ReferenceDistribution>,
    pub alternatives: Vec<PowerSource>,
    pub reps: usize,
    pub seed: u64,
    pub alpha: Option<f64>,
    /// Replicates behind each critical value a power study calibrates.
    pub calibration_reps: usize,
    /// The text the configuration was parsed from.
    pub source: String,
}

fn list<T>(v: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(parse).collect()
}

impl StudyConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = StudyConfig {
            study: StudyKind::MseBias,
            estimators: Vec::new(),
            statistics: Vec::new(),
            sizes: Vec::new(),
            distributions: Vec::new(),
            alternatives: Vec::new(),
            reps: 10_000,
            seed: 1,
            alpha: None,
            calibration_reps: 100_000,
            source: text.to_string(),
        };
        let mut saw_study = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let l = raw.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line, message };
            let (key, value) = l
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, found '{l}'")))?;
            let (key, value) = (key.trim(), value.trim());
            let wrap = |e: Error| err(format!("{key}: {e}"));
            let int = |v: &str| -> Result<u64> {
                v.replace('_', "")
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("'{v}' is not an integer")))
            };
            match key {
                "study" => {
                    cfg.study = value.parse().map_err(wrap)?;
                    saw_study = true;
                }
                "estimators" => cfg.estimators = list(value, str::parse).map_err(wrap)?,
                "statistics" => cfg.statistics = list(value, str::parse).map_err(wrap)?,
                "sizes" => cfg.sizes = list(value, |v| int(v).map(|x| x as usize)).map_err(wrap)?,
                "distributions" => cfg.distributions = list(value, str::parse).map_err(wrap)?,
                "alternatives" => cfg.alternatives = list(value, str::parse).map_err(wrap)?,
                "reps" => cfg.reps = int(value).map_err(wrap)? as usize,
                "seed" => cfg.seed = int(value).map_err(wrap)?,
                "calibration_reps" => cfg.calibration_reps = int(value).map_err(wrap)? as usize,
                "alpha" => {
                    cfg.alpha = Some(
                        value
                            .parse()
                            .map_err(|_| err(format!("alpha: '{value}' is not a number")))?,
                    )
                }
                _ => return Err(err(format!("unknown key '{key}'"))),
            }
        }
        if !saw_study {
            return Err(Error::Parse {
                line: 0,
                message: "missing 'study' key".into(),
            });
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.sizes.is_empty() {
            return bad("no sample sizes".into());
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 2) {
            return bad(format!("sample size {n} is below 2"));
        }
        if self.reps < MIN_STUDY_REPS {
            return bad(format!("reps must be at least {MIN_STUDY_REPS}, got {}", self.reps));
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return bad(format!("alpha must lie in (0, 1), got {a}"));
            }
        }
        match self.study {
            StudyKind::MseBias if self.estimators.is_empty() || self.distributions.is_empty() => {
                bad("an mse study needs estimators and distributions".into())
            }
            StudyKind::Power if self.statistics.is_empty() || self.alternatives.is_empty() => {
                bad("a power study needs statistics and alternatives".into())
            }
            StudyKind::Power if self.calibration_reps < MIN_CALIBRATION_REPS => bad(format!(
                "calibration_reps must be at least {MIN_CALIBRATION_REPS}"
            )),
            StudyKind::Critical if self.statistics.is_empty() => {
                bad("a critical-value study needs statistics".into())
            }
            StudyKind::Critical if self.reps < MIN_CALIBRATION_REPS => {
                bad(format!("critical-value studies need reps >= {MIN_CALIBRATION_REPS}"))
            }
            _ => Ok(()),
        }
    }

    pub fn alpha_or_default(&self) -> f64 {
        self.alpha.unwrap_or(0.05)
    }

    /// Same configuration with `reps` replaced in the echoed source.
    pub fn with_reps(&self, reps: usize) -> Result<Self> {
        let text = replace_key(&self.source, "reps", &reps.to_string());
        Self::parse(&text)
    }

    pub fn with_seed(&self, seed: u64) -> Result<Self> {
        Self::parse(&replace_key(&self.source, "seed", &seed.to_string()))
    }
}

fn replace_key(text: &str, key: &str, value: &str) -> String {
    let mut found = false;
    let mut out: Vec<String> = text
        .lines()
        .map(|l| match l.split_once('=') {
            Some((k, _)) if k.trim() == key && !l.trim_start().starts_with('#') => {
                found = true;
                format!("{key} = {value}")
            }
            _ => l.to_string(),
        })
        .collect();
    if !found {
        out.push(format!("{key} = {value}"));
    }
    out.join("\n") + "\n"
}

pub const PRESETS: [&str; 6] = ["table1", "table2", "table3", "table4", "table5", "table6"];

/// Configuration text reproducing one of the published table grids.
pub fn preset(name: &str) -> Result<String> {
    let mse = |dist: &str| {
        format!(
            "study = mse\nestimators = VJV,VJD,VJB,VJS,VJQ\nsizes = 10,20,30,40,50,100\n\
             distributions = {dist}\nreps = 10000\nseed = 1\n"
        )
    };
    let alts = "A1.5,A2,B1.5,B2,B3,C1.5,C2";
    let power = |stats: &str| {
        format!(
            "study = power\nstatistics = {stats}\nsizes = 10,20,30\nalternatives = {alts}\n\
             alpha = 0.05\nreps = 10000\ncalibration_reps = 100000\nseed = 1\n"
        )
    };
    match name {
        "table1" => Ok(mse("gamma21")),
        "table2" => Ok(mse("uniform01")),
        "table3" => Ok(mse("exp1")),
        "table4" => Ok("study = critical\nstatistics = GV,GD,GB,GS,GQ\n\
                        sizes = 10,20,30,40,50,75,100\nalpha = 0.05\nreps = 100000\nseed = 1\n"
            .to_string()),
        "table5" => Ok(power("GV,GD,GB,GS,GQ")),
        "table6" => Ok(power("TV,TE,TD,TB,TC,TA,KS")),
        _ => Err(Error::InvalidParameter(format!(
            "unknown preset '{name}'; available: {}",
            PRESETS.join(", ")
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportCell {
    pub kind: String,
    pub n: usize,
    pub distribution: String,
    pub metric: String,
    pub value: f64,
    pub mc_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub config: String,
    pub study: StudyKind,
    pub cells: Vec<ReportCell>,
    pub redraws: u64,
}

impl StudyReport {
    pub fn find(&self, kind: &str, n: usize, distribution: &str, metric: &str) -> Option<&ReportCell> {
        self.cells
            .iter()
            .find(|c| c.kind == kind && c.n == n && c.distribution == distribution && c.metric == metric)
    }

    /// Tab-separated cells preceded by the configuration as `#` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in self.config.lines() {
            let _ = writeln!(out, "# {l}");
        }
        let _ = writeln!(out, "# redraws = {}", self.redraws);
        out.push_str("kind\tn\tdistribution\tmetric\tvalue\tmc_se\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                c.kind,
                c.n,
                c.distribution,
                c.metric,
                format_significant(c.value, 7),
                format_significant(c.mc_se, 3)
            );
        }
        out
    }

    /// One JSON object per cell.
    pub fn to_json_lines(&self) -> String {
        self.cells
            .iter()
            .map(|c| serde_json::to_string(c).expect("cells serialize") + "\n")
            .collect()
    }

    /// Table layout for one metric: a row per `(n, distribution)`, a column
    /// per kind, in first-seen order.
    pub fn to_grid(&self, metric: &str) -> String {
        let mut kinds: Vec<&str> = Vec::new();
        let mut rows: Vec<(usize, &str)> = Vec::new();
        for c in self.cells.iter().filter(|c| c.metric == metric) {
            if !kinds.contains(&c.kind.as_str()) {
                kinds.push(&c.kind);
            }
            if !rows.contains(&(c.n, c.distribution.as_str())) {
                rows.push((c.n, &c.distribution));
            }
        }
        let mut out = format!("n\tdistribution\t{}\n", kinds.join("\t"));
        for (n, d) in rows {
            let vals: Vec<String> = kinds
                .iter()
                .map(|k| {
                    self.find(k, n, d, metric)
                        .map_or_else(|| "-".into(), |c| format_significant(c.value, 7))
                })
                .collect();
            let _ = writeln!(out, "{n}\t{d}\t{}", vals.join("\t"));
        }
        out
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let r = values.len() as f64;
    let mean = values.iter().sum::<f64>() / r;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1.0).max(1.0);
    (mean, (var / r).sqrt())
}

/// Options the bias/MSE study uses for a reference distribution: KDE
/// integrals start at the lower end of a bounded support.
pub fn study_options(d: &ReferenceDistribution) -> EstimatorOptions {
    EstimatorOptions {
        support_lower: d.support_lower(),
        ..EstimatorOptions::default()
    }
}

/// Bias and MSE of each estimator against the analytic varextropy.
pub fn mse_bias_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let mut cells = Vec::new();
    let mut redraws = 0;
    for d in &cfg.distributions {
        let truth = d.varextropy();
        let opts = study_options(d);
        for &n in &cfg.sizes {
            let rows = run_replicates(
                cfg.reps,
                cfg.seed,
                StreamDomain::Reference,
                |rng| Sample::new((0..n).map(|_| d.draw(rng)).collect::<Vec<_>>()),
                |s| {
                    cfg.estimators
                        .iter()
                        .map(|&id| estimate(id, s, &opts).map(|e| e.value))
                        .collect::<Result<Vec<_>>>()
                },
            )?;
            redraws += total_redraws(&rows);
            for (k, id) in cfg.estimators.iter().enumerate() {
                let errors: Vec<f64> = rows.iter().map(|r| r.value[k] - truth).collect();
                let squares: Vec<f64> = errors.iter().map(|e| e * e).collect();
                let (bias, bias_se) = mean_and_se(&errors);
                let (mse, mse_se) = mean_and_se(&squares);
                for (metric, value, mc_se) in [("mse", mse, mse_se), ("bias", bias, bias_se)] {
                    cells.push(ReportCell {
                        kind: id.to_string(),
                        n,
                        distribution: d.to_string(),
                        metric: metric.into(),
                        value,
                        mc_se,
                    });
                }
            }
        }
    }
    Ok(StudyReport {
        config: cfg.source.clone(),
        study: StudyKind::MseBias,
        cells,
        redraws,
    })
}

/// Fraction of `reps` samples from `source` whose statistic reaches the
/// critical value, for each kind. Samples are shared across kinds.
pub fn rejection_rates(
    kinds: &[StatKind],
    critical: &[f64],
    source: PowerSource,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<(Vec<f64>, u64)> {
    let rows = run_replicates(
        reps,
        seed,
        StreamDomain::Alternative,
        |rng| source.draw(n, rng),
        |s| {
            kinds
                .iter()
                .zip(critical)
                .map(|(&k, &c)| statistic(k, s).map(|v| v >= c))
                .collect::<Result<Vec<_>>>()
        },
    )?;
    let rates = (0..kinds.len())
        .map(|k| rows.iter().filter(|r| r.value[k]).count() as f64 / reps as f64)
        .collect();
    Ok((rates, total_redraws(&rows)))
}

/// Power of each statistic against each source, with critical values taken
/// from `tables` (exact `n` and `alpha` required).
pub fn power_study(cfg: &StudyConfig, tables: &[CriticalValueTable]) -> Result<StudyReport> {
    cfg.validate()?;
    let alpha = cfg.alpha_or_default();
    let mut cells = Vec::new();
    let mut redraws = 0;
    for &n in &cfg.sizes {
        let critical = cfg
            .statistics
            .iter()
            .map(|&kind| {
                tables
                    .iter()
                    .find(|t| t.kind == kind && t.alpha == alpha)
                    .and_then(|t| t.get(n))
                    .ok_or(Error::MissingCriticalValue { kind, n })
            })
            .collect::<Result<Vec<_>>>()?;
        for &source in &cfg.alternatives {
            let (rates, r) = rejection_rates(&cfg.statistics, &critical, source, n, cfg.reps, cfg.seed)?;
            redraws += r;
            for (kind, p) in cfg.statistics.iter().zip(rates) {
                cells.push(ReportCell {
                    kind: kind.to_string(),
                    n,
                    distribution: source.to_string(),
                    metric: "power".into(),
                    value: p,
                    mc_se: (p * (1.0 - p) / cfg.reps as f64).sqrt(),
                });
            }
        }
    }
    Ok(StudyReport {
        config: cfg.source.clone(),
        study: StudyKind::Power,
        cells,
        redraws,
    })
}

/// Calibrates the critical values a power study needs, then runs it.
pub fn power_study_calibrated(cfg: &StudyConfig) -> Result<(StudyReport, Vec<CriticalValueTable>)> {
    cfg.validate()?;
    let tables = calibrate_tables(
        &cfg.statistics,
        &cfg.sizes,
        cfg.alpha_or_default(),
        cfg.calibration_reps,
        cfg.seed,
    )?;
    Ok((power_study(cfg, &tables)?, tables))
}

/// Percentage points `C_{1-alpha}` for every `(statistic, n)`; the standard
/// error uses a spacing estimate of the null density at the quantile.
pub fn critical_value_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let alpha = cfg.alpha_or_default();
    let mut cells = Vec::new();
    let mut redraws = 0;
    for &n in &cfg.sizes {
        let sim = simulate_null(&cfg.statistics, n, cfg.reps, cfg.seed)?;
        redraws += sim.redraws;
        for (kind, stats) in sim.kinds.iter().zip(&sim.statistics) {
            let value = empirical_quantile(stats, alpha)?;
            cells.push(ReportCell {
                kind: kind.to_string(),
                n,
                distribution: "uniform".into(),
                metric: "critical".into(),
                value,
                mc_se: quantile_se(stats, alpha),
            });
        }
    }
    Ok(StudyReport {
        config: cfg.source.clone(),
        study: StudyKind::Critical,
        cells,
        redraws,
    })
}

fn quantile_se(values: &[f64], alpha: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let r = v.len();
    let p = 1.0 - alpha;
    let k = ((p * r as f64).ceil() as usize).clamp(1, r) - 1;
    let d = (r as f64).sqrt().ceil() as usize;
    let (lo, hi) = (k.saturating_sub(d), (k + d).min(r - 1));
    if hi == lo {
        return 0.0;
    }
    let inv_density = (v[hi] - v[lo]) * r as f64 / (hi - lo) as f64;
    (p * (1.0 - p) / r as f64).sqrt() * inv_density
}

/// Runs whichever study `cfg` describes, calibrating power studies first.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyReport> {
    match cfg.study {
        StudyKind::MseBias => mse_bias_study(cfg),
        StudyKind::Power => power_study_calibrated(cfg).map(|(r, _)| r),
        StudyKind::Critical => critical_value_study(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn alt(s: &str) -> Alternative {
        s.parse().unwrap()
    }

    #[test]
    fn inverse_cdf_examples() {
        assert!((inverse_cdf_alternative(alt("A2"), 0.75) - 0.5).abs() < 1e-15);
        for k in ["B1.5", "B2", "B3"] {
            assert!((inverse_cdf_alternative(alt(k), 0.5) - 0.5).abs() < 1e-15);
        }
        let c = inverse_cdf_alternative(alt("C2"), 0.25);
        assert!((c - (0.5 - 0.125f64.sqrt())).abs() < 1e-15);
        assert!((c - 0.146_447).abs() < 1e-6);
    }

    #[test]
    fn inverse_cdf_inverts_cdf() {
        for name in ["A1.5", "A2", "B1.5", "B2", "B3", "C1.5", "C2"] {
            let a = alt(name);
            assert!(a.is_standard());
            for i in 0..=100 {
                let u = i as f64 / 100.0;
                let x = inverse_cdf_alternative(a, u);
                assert!((0.0..=1.0).contains(&x));
                assert!((a.cdf(x) - u).abs() < 1e-12, "{name} {u}");
            }
        }
        assert!(!alt("A3").is_standard());
        assert!("D2".parse::<Alternative>().is_err());
        assert!("A-1".parse::<Alternative>().is_err());
        assert_eq!(alt("b_1.5"), alt("B1.5"));
    }

    #[test]
    fn alternative_draws_follow_their_cdf() {
        let mut rng = StreamRng::seed_from_u64(4);
        let n = 1_000_000;
        let a2 = sample_alternative(alt("A2"), n, &mut rng).unwrap();
        let ks = a2
            .values()
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = alt("A2").cdf(x);
                ((i + 1) as f64 / n as f64 - f).max(f - i as f64 / n as f64)
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.002, "{ks}");
        let b3 = sample_alternative(alt("B3"), n, &mut rng).unwrap();
        let mean = b3.values().iter().sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.002);
        let c = sample_alternative(alt("C1.5"), 100_000, &mut rng).unwrap();
        let bin = |lo: f64| c.values().iter().filter(|&&x| x >= lo && x < lo + 0.1).count();
        assert!(bin(0.45) < bin(0.0) && bin(0.45) < bin(0.9));
    }

    #[test]
    fn config_parses_and_validates() {
        let cfg = StudyConfig::parse(&preset("table5").unwrap()).unwrap();
        assert_eq!(cfg.study, StudyKind::Power);
        assert_eq!(cfg.statistics.len(), 5);
        assert_eq!(cfg.alternatives.len(), 7);
        assert_eq!(cfg.sizes, vec![10, 20, 30]);
        for p in PRESETS {
            assert!(StudyConfig::parse(&preset(p).unwrap()).is_ok(), "{p}");
        }
        assert!(preset("table9").is_err());
        assert!(matches!(
            StudyConfig::parse("study = mse\nbogus = 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(StudyConfig::parse("study = mse\nestimators = VJV\ndistributions = exp1\nsizes = 10\nreps = 50\n").is_err());
        assert!(StudyConfig::parse("estimators = VJV\n").is_err());
        let cfg = cfg.with_reps(200).unwrap();
        assert_eq!(cfg.reps, 200);
        assert!(cfg.source.contains("reps = 200"));
    }

    #[test]
    fn mse_study_is_reproducible() {
        let text = "study = mse\nestimators = VJV,VJQ\ndistributions = exp1\nsizes = 10\nreps = 200\nseed = 5\n";
        let cfg = StudyConfig::parse(text).unwrap();
        let a = mse_bias_study(&cfg).unwrap();
        let b = mse_bias_study(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.cells.len(), 4);
        assert!(a.to_text().starts_with("# study = mse"));
        assert_eq!(a.to_json_lines().lines().count(), 4);
        let mse = a.find("VJV", 10, "exp1", "mse").unwrap();
        let bias = a.find("VJV", 10, "exp1", "bias").unwrap();
        assert!(mse.value >= bias.value * bias.value);
    }

    #[test]
    fn critical_study_matches_direct_oracle() {
        let text = "study = critical\nstatistics = GV,KS\nsizes = 10\nreps = 1000\nseed = 11\n";
        let cfg = StudyConfig::parse(text).unwrap();
        let report = critical_value_study(&cfg).unwrap();
        let sim = simulate_null(&[StatKind::Gv], 10, 1000, 11).unwrap();
        let mut v = sim.statistics[0].clone();
        v.sort_by(f64::total_cmp);
        assert_eq!(report.find("GV", 10, "uniform", "critical").unwrap().value, v[949]);
        assert!(report.to_grid("critical").contains("GV\tKS"));
    }

    #[test]
    fn power_needs_critical_values() {
        let text = "study = power\nstatistics = KS\nsizes = 10\nalternatives = A2\nreps = 100\ncalibration_reps = 1000\n";
        let cfg = StudyConfig::parse(text).unwrap();
        assert_eq!(
            power_study(&cfg, &[]),
            Err(Error::MissingCriticalValue { kind: StatKind::Ks, n: 10 })
        );
        let (report, tables) = power_study_calibrated(&cfg).unwrap();
        assert_eq!(tables.len(), 1);
        let p = report.find("KS", 10, "A2", "power").unwrap();
        assert!(p.value > 0.05 && p.mc_se > 0.0);
    }
}
