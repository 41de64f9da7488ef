//! Monte Carlo critical values and their on-disk table format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::distribution::open_unit;
use crate::error::{Error, Result};
use crate::rng::{run_replicates, total_redraws, StreamDomain, StreamRng};
use crate::sample::Sample;

use super::{statistic, StatKind};

pub const MIN_CALIBRATION_REPS: usize = 1000;

const TABLE_HEADER: &str = "# varextropy critical values v1";
const TABLE_COLUMNS: &str = "kind\tn\talpha\treps\tseed\tvalue";

/// Simulated null statistics for several kinds computed on shared samples.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSimulation {
    pub kinds: Vec<StatKind>,
    pub n: usize,
    pub seed: u64,
    /// `statistics[k][r]`: kind `kinds[k]` on replicate `r`.
    pub statistics: Vec<Vec<f64>>,
    pub redraws: u64,
}

impl NullSimulation {
    pub fn of(&self, kind: StatKind) -> Option<&[f64]> {
        self.kinds
            .iter()
            .position(|&k| k == kind)
            .map(|i| self.statistics[i].as_slice())
    }
}

pub(crate) fn uniform_sample(rng: &mut StreamRng, n: usize) -> Result<Sample> {
    Sample::new((0..n).map(|_| open_unit(rng)).collect::<Vec<_>>())
}

/// Draws `reps` U(0,1)^n samples and evaluates every kind on each.
///
/// Replicate `r` always uses the same stream, so a kind's statistics do not
/// depend on which other kinds are simulated alongside it (a replicate is
/// re-drawn only on tied data, which every kind rejects alike).
pub fn simulate_null(kinds: &[StatKind], n: usize, reps: usize, seed: u64) -> Result<NullSimulation> {
    if n < 2 {
        return Err(Error::EmptyOrSingleton { len: n });
    }
    let rows = run_replicates(
        reps,
        seed,
        StreamDomain::Null,
        |rng| uniform_sample(rng, n),
        |s| kinds.iter().map(|&k| statistic(k, s)).collect::<Result<Vec<_>>>(),
    )?;
    let redraws = total_redraws(&rows);
    let statistics = (0..kinds.len())
        .map(|k| rows.iter().map(|r| r.value[k]).collect())
        .collect();
    Ok(NullSimulation {
        kinds: kinds.to_vec(),
        n,
        seed,
        statistics,
        redraws,
    })
}

/// The `ceil((1 - alpha) * reps)`-th smallest value.
pub fn empirical_quantile(values: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if values.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let reps = sorted.len();
    // The small offset keeps products like 0.95 * 1000 from rounding up.
    let rank = (((1.0 - alpha) * reps as f64) - 1e-9).ceil() as usize;
    Ok(sorted[rank.clamp(1, reps) - 1])
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub kind: StatKind,
    pub n: usize,
    pub alpha: f64,
    pub reps: usize,
    pub seed: u64,
    pub critical_value: f64,
    pub redraws: u64,
}

/// Critical value `C_{1-alpha}` of `kind` at sample size `n`.
pub fn calibrate_critical_value(kind: StatKind, n: usize, alpha: f64, reps: usize, seed: u64) -> Result<Calibration> {
    check_alpha(alpha)?;
    check_reps(reps)?;
    let sim = simulate_null(&[kind], n, reps, seed)?;
    Ok(Calibration {
        kind,
        n,
        alpha,
        reps,
        seed,
        critical_value: empirical_quantile(&sim.statistics[0], alpha)?,
        redraws: sim.redraws,
    })
}

fn check_reps(reps: usize) -> Result<()> {
    if reps < MIN_CALIBRATION_REPS {
        return Err(Error::InvalidParameter(format!(
            "calibration needs at least {MIN_CALIBRATION_REPS} replicates, got {reps}"
        )));
    }
    Ok(())
}

/// Calibrates every `(kind, n)` pair, sharing null samples across kinds.
pub fn calibrate_tables(
    kinds: &[StatKind],
    sizes: &[usize],
    alpha: f64,
    reps: usize,
    seed: u64,
) -> Result<Vec<CriticalValueTable>> {
    check_alpha(alpha)?;
    check_reps(reps)?;
    let mut tables: Vec<_> = kinds
        .iter()
        .map(|&k| CriticalValueTable::new(k, alpha, reps, seed))
        .collect();
    for &n in sizes {
        let sim = simulate_null(kinds, n, reps, seed)?;
        for (table, stats) in tables.iter_mut().zip(&sim.statistics) {
            table.insert(n, empirical_quantile(stats, alpha)?);
        }
    }
    Ok(tables)
}

/// Critical values of one statistic at one level, keyed by sample size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueTable {
    pub kind: StatKind,
    pub alpha: f64,
    pub reps: usize,
    pub seed: u64,
    pub entries: BTreeMap<usize, f64>,
}

impl CriticalValueTable {
    pub fn new(kind: StatKind, alpha: f64, reps: usize, seed: u64) -> Self {
        Self {
            kind,
            alpha,
            reps,
            seed,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, n: usize, value: f64) {
        self.entries.insert(n, value);
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.entries.get(&n).copied()
    }
}

/// Tab-separated text with a version header; floats round-trip exactly.
pub fn format_tables(tables: &[CriticalValueTable]) -> String {
    let mut out = format!("{TABLE_HEADER}\n{TABLE_COLUMNS}\n");
    for t in tables {
        for (n, v) in &t.entries {
            let _ = writeln!(out, "{}\t{n}\t{}\t{}\t{}\t{v}", t.kind, t.alpha, t.reps, t.seed);
        }
    }
    out
}

/// Inverse of [`format_tables`]. Rows sharing `(kind, alpha, reps, seed)`
/// form one table.
pub fn parse_tables(text: &str) -> Result<Vec<CriticalValueTable>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == TABLE_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header '{TABLE_HEADER}'"),
            })
        }
    }
    let mut tables: Vec<CriticalValueTable> = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') || l == TABLE_COLUMNS {
            continue;
        }
        let fields: Vec<&str> = l.split('\t').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line,
                message: format!("expected 6 tab-separated fields, found {}", fields.len()),
            });
        }
        let bad = |what: &str| Error::Parse {
            line,
            message: format!("invalid {what}"),
        };
        let kind: StatKind = fields[0].parse().map_err(|_| bad("kind"))?;
        let n: usize = fields[1].parse().map_err(|_| bad("n"))?;
        let alpha: f64 = fields[2].parse().map_err(|_| bad("alpha"))?;
        let reps: usize = fields[3].parse().map_err(|_| bad("reps"))?;
        let seed: u64 = fields[4].parse().map_err(|_| bad("seed"))?;
        let value: f64 = fields[5].parse().map_err(|_| bad("value"))?;
        if n < 2 || !(alpha > 0.0 && alpha < 1.0) || !value.is_finite() || value < 0.0 {
            return Err(bad("entry"));
        }
        match tables
            .iter_mut()
            .find(|t| t.kind == kind && t.alpha == alpha && t.reps == reps && t.seed == seed)
        {
            Some(t) => t.insert(n, value),
            None => {
                let mut t = CriticalValueTable::new(kind, alpha, reps, seed);
                t.insert(n, value);
                tables.push(t);
            }
        }
    }
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_convention() {
        let v: Vec<f64> = (1..=1000).rev().map(f64::from).collect();
        assert_eq!(empirical_quantile(&v, 0.05).unwrap(), 950.0);
        assert_eq!(empirical_quantile(&v, 0.001).unwrap(), 999.0);
        // ceil((1 - alpha) reps) reaches the maximum only as alpha -> 0 and
        // the minimum at alpha = 1 - 1/reps.
        assert_eq!(empirical_quantile(&v, 0.0005).unwrap(), 1000.0);
        assert_eq!(empirical_quantile(&v, 1.0 - 1.0 / 1000.0).unwrap(), 1.0);
        assert!(empirical_quantile(&v, 0.0).is_err());
        assert!(empirical_quantile(&v, 1.0).is_err());
        assert!(empirical_quantile(&[], 0.5).is_err());
    }

    #[test]
    fn null_simulation_matches_direct_enumeration() {
        let sim = simulate_null(&[StatKind::Gv, StatKind::Ks], 8, 10, 77).unwrap();
        for r in 0..10 {
            let mut rng = crate::rng::substream(77, StreamDomain::Null, r as u64);
            let s = uniform_sample(&mut rng, 8).unwrap();
            assert!(!s.has_ties());
            assert_eq!(sim.of(StatKind::Gv).unwrap()[r], statistic(StatKind::Gv, &s).unwrap());
            assert_eq!(sim.of(StatKind::Ks).unwrap()[r], statistic(StatKind::Ks, &s).unwrap());
        }
        let alone = simulate_null(&[StatKind::Ks], 8, 10, 77).unwrap();
        assert_eq!(alone.statistics[0], sim.of(StatKind::Ks).unwrap());
    }

    #[test]
    fn calibration_is_deterministic_and_validated() {
        let a = calibrate_critical_value(StatKind::Gq, 10, 0.05, 1000, 3).unwrap();
        let b = calibrate_critical_value(StatKind::Gq, 10, 0.05, 1000, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.critical_value > 0.0);
        assert!(calibrate_critical_value(StatKind::Gq, 10, 0.05, 999, 3).is_err());
        assert!(calibrate_critical_value(StatKind::Gq, 10, 1.5, 1000, 3).is_err());
        let tables = calibrate_tables(&[StatKind::Gq], &[10], 0.05, 1000, 3).unwrap();
        assert_eq!(tables[0].get(10), Some(a.critical_value));
    }

    #[test]
    fn tables_round_trip() {
        let mut a = CriticalValueTable::new(StatKind::Gd, 0.05, 100_000, 1);
        a.insert(10, 0.066_512_345_678_901_23);
        a.insert(20, 0.0485);
        let mut b = CriticalValueTable::new(StatKind::Ks, 0.1, 1000, 9);
        b.insert(31, 0.21);
        let text = format_tables(&[a.clone(), b.clone()]);
        assert_eq!(parse_tables(&text).unwrap(), vec![a, b]);
    }

    #[test]
    fn table_parse_errors_carry_lines() {
        assert!(matches!(parse_tables("kind\tn\n"), Err(Error::Parse { line: 1, .. })));
        let text = format!("{TABLE_HEADER}\n{TABLE_COLUMNS}\nGD\t20\t0.05\t1000\t1\tx\n");
        assert!(matches!(parse_tables(&text), Err(Error::Parse { line: 3, .. })));
        let text = format!("{TABLE_HEADER}\nZZ\t20\t0.05\t1000\t1\t0.1\n");
        assert!(matches!(parse_tables(&text), Err(Error::Parse { line: 2, .. })));
    }
}
