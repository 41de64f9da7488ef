//! `varextropy`: estimate varextropy, test uniformity, transform data and run
//! the Monte Carlo studies.
//!
//! Exit codes: 0 success, 2 input or configuration error, 3 numerical or
//! statistical failure.

mod manifest;

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use manifest::RunManifest;
use varextropy::estimators::estimate;
use varextropy::simulation::{preset, run_study, StudyConfig, PRESETS};
use varextropy::uniformity::{
    calibrate_tables, format_tables, parse_kinds, parse_tables, CriticalValueTable,
};
use varextropy::{
    fit_model, format_significant, jitter, parse_dataset, probability_integral_transform, run_test,
    EstimatorId, EstimatorOptions, ModelFamily, ReferenceDistribution, Sample, StatKind,
};

const DIGITS: usize = 7;
/// Jitter half-width relative to the data range.
const JITTER_SCALE: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "varextropy", version, about = "Varextropy estimation and tests of uniformity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the varextropy of a dataset.
    Estimate(EstimateArgs),
    /// Test a sample on [0, 1] for uniformity.
    Test(TestArgs),
    /// Probability integral transform under a fitted or fixed model.
    Pit(PitArgs),
    /// Simulate critical values under the uniform null.
    Calibrate(CalibrateArgs),
    /// Run a bias/MSE, critical-value or power study.
    Study(StudyArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Input {
    /// Delimited text file, or `-` for standard input.
    input: String,
    /// 1-based column to read.
    #[arg(long, default_value_t = 1)]
    column: usize,
    /// Break ties with uniform noise of half-width 1e-9 times the data range.
    #[arg(long)]
    jitter: bool,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated estimators (VJV, VJD, VJB, VJS, VJQ).
    #[arg(long, default_value = "VJV,VJD,VJB,VJS,VJQ")]
    estimator: String,
    /// Spacing window.
    #[arg(long)]
    m: Option<usize>,
    /// Kernel bandwidth for VJD.
    #[arg(long)]
    bandwidth: Option<f64>,
    /// Quadrature nodes for VJD.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Known lower end of the support; VJD integrates from here.
    #[arg(long)]
    support_lower: Option<f64>,
    /// Seed for --jitter.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated statistics (GV GD GB GS GQ KS TV TE TD TB TC TA).
    #[arg(long, default_value = "GV,GD,GB,GS,GQ")]
    stat: String,
    /// Critical-value table written by `calibrate`.
    #[arg(long, conflicts_with = "calibrate")]
    table: Option<PathBuf>,
    /// Simulate the critical values for this sample size first.
    #[arg(long)]
    calibrate: bool,
    /// Significance level; with --table, selects rows of that level.
    #[arg(long)]
    alpha: Option<f64>,
    /// Null replicates for --calibrate.
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PitArgs {
    #[command(flatten)]
    input: Input,
    /// A family to fit by maximum likelihood (uniform, normal, exponential,
    /// a) or a fixed model such as `normal:0:1`, `exponential:2`, `a:125.7`.
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CalibrateArgs {
    #[arg(long, default_value = "GV,GD,GB,GS,GQ")]
    stat: String,
    /// Comma-separated sample sizes.
    #[arg(long)]
    sizes: String,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct StudyArgs {
    /// One of table1..table6.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    preset: Option<String>,
    /// `key = value` study description.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the replicate count.
    #[arg(long)]
    reps: Option<usize>,
    /// Override the seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Print one metric as a table (mse, bias, power, critical) instead of cells.
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    output: Output,
}

/// A failure and the exit code it maps to.
enum Failure {
    Input(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<varextropy::Error> for Failure {
    fn from(e: varextropy::Error) -> Self {
        let msg = match &e {
            varextropy::Error::MissingCriticalValue { .. } => {
                format!("{e}; supply a table with that row or pass --calibrate")
            }
            _ => e.to_string(),
        };
        if e.is_numerical() {
            Failure::Numerical(msg)
        } else {
            Failure::Input(msg)
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_input(path: &str) -> CliResult<Vec<u8>> {
    let mut bytes = Vec::new();
    let res = if path == "-" {
        io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes).map(|_| ()))
    };
    res.map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    Ok(bytes)
}

/// Reads, parses and (optionally) jitters the dataset, recording it in `m`.
fn load(input: &Input, seed: u64, m: &mut RunManifest) -> CliResult<Vec<f64>> {
    if input.column == 0 {
        return Err(Failure::Input("--column is 1-based".into()));
    }
    let bytes = read_input(&input.input)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::Input(format!("{}: not UTF-8 text", input.input)))?;
    let values = parse_dataset(&text, input.column - 1)
        .map_err(|e| Failure::Input(format!("{}: {e}", input.input)))?;
    m.input(&bytes)
        .param("input", &input.input)
        .param("column", input.column);
    if !input.jitter {
        return Ok(values);
    }
    m.param("jitter", true);
    m.seed = Some(seed);
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    Ok(jitter(&values, JITTER_SCALE * (hi - lo), seed)?)
}

fn emit(output: &Output, text: String) -> CliResult<()> {
    match &output.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(e.to_string())),
    }
}

fn structured(manifest: &RunManifest, key: &str, value: serde_json::Value) -> String {
    let mut doc = json!({ "manifest": manifest });
    doc[key] = value;
    serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n"
}

fn sig(x: f64) -> String {
    format_significant(x, DIGITS)
}

fn parse_list<T: std::str::FromStr<Err = varextropy::Error>>(list: &str) -> CliResult<Vec<T>> {
    let items = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse())
        .collect::<Result<Vec<T>, _>>()?;
    if items.is_empty() {
        return Err(Failure::Input("empty list".into()));
    }
    Ok(items)
}

fn check_alpha(alpha: f64) -> CliResult<f64> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(Failure::Input(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

fn cmd_estimate(a: &EstimateArgs) -> CliResult<()> {
    let mut man = RunManifest::new("estimate");
    let ids: Vec<EstimatorId> = parse_list(&a.estimator)?;
    let values = load(&a.input, a.seed, &mut man)?;
    let mut opts = EstimatorOptions {
        m: a.m,
        bandwidth: a.bandwidth,
        support_lower: a.support_lower,
        ..EstimatorOptions::default()
    };
    if let Some(g) = a.grid_points {
        opts.grid_points = g;
    }
    man.param("estimator", &a.estimator)
        .param("m", a.m)
        .param("bandwidth", a.bandwidth)
        .param("grid_points", opts.grid_points)
        .param("support_lower", a.support_lower);
    let sample = Sample::new(values)?;
    let estimates = ids
        .iter()
        .map(|&id| estimate(id, &sample, &opts))
        .collect::<Result<Vec<_>, _>>()?;

    let text = match a.output.format {
        Format::Structured => structured(&man, "estimates", json!(estimates)),
        Format::Text => {
            let mut out = man.to_comment_lines();
            out.push_str("estimator\tvalue\tm\th\tgrid\n");
            for e in &estimates {
                let m = e.window_m.map_or("-".into(), |m| m.to_string());
                let h = e.bandwidth_h.map_or("-".into(), sig);
                let g = e.grid.map_or("-".into(), |g| {
                    format!("[{}, {}] x {}", sig(g.lo), sig(g.hi), g.points)
                });
                out.push_str(&format!("{}\t{}\t{m}\t{h}\t{g}\n", e.estimator, sig(e.value)));
            }
            out
        }
    };
    emit(&a.output, text)
}

fn table_for(tables: &[CriticalValueTable], kind: StatKind, alpha: Option<f64>) -> Option<&CriticalValueTable> {
    tables
        .iter()
        .find(|t| t.kind == kind && alpha.is_none_or(|a| (t.alpha - a).abs() < 1e-12))
}

fn cmd_test(a: &TestArgs) -> CliResult<()> {
    let mut man = RunManifest::new("test");
    let kinds = parse_kinds(&a.stat)?;
    if kinds.is_empty() {
        return Err(Failure::Input("no statistics requested".into()));
    }
    if let Some(alpha) = a.alpha {
        check_alpha(alpha)?;
    }
    let values = load(&a.input, a.seed, &mut man)?;
    let sample = Sample::new(values)?;
    man.param("stat", &a.stat).param("alpha", a.alpha);

    let tables = match (&a.table, a.calibrate) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            man.param("table", path.display().to_string())
                .param("table_sha256", manifest::sha256_hex(text.as_bytes()));
            parse_tables(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
        }
        (None, true) => {
            let alpha = a.alpha.unwrap_or(0.05);
            man.param("calibrate", true).param("reps", a.reps).param("alpha", alpha);
            man.seed = Some(a.seed);
            calibrate_tables(&kinds, &[sample.len()], alpha, a.reps, a.seed)?
        }
        (None, false) => {
            return Err(Failure::Input("pass --table FILE or --calibrate".into()));
        }
    };

    let mut outcomes = Vec::new();
    for &kind in &kinds {
        let table = table_for(&tables, kind, a.alpha).ok_or_else(|| {
            Failure::from(varextropy::Error::MissingCriticalValue { kind, n: sample.len() })
        })?;
        outcomes.push(run_test(kind, &sample, table)?);
    }
    let rejections = outcomes.iter().filter(|o| o.reject).count();
    let summary = if rejections == 0 { "accept" } else { "reject" };

    let text = match a.output.format {
        Format::Structured => {
            let mut doc: serde_json::Value =
                serde_json::from_str(&structured(&man, "outcomes", json!(outcomes))).unwrap();
            doc["summary"] = json!(summary);
            serde_json::to_string_pretty(&doc).unwrap() + "\n"
        }
        Format::Text => {
            let mut out = man.to_comment_lines();
            out.push_str("stat\tn\tstatistic\tcritical\talpha\tdecision\n");
            for o in &outcomes {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\n",
                    o.kind,
                    o.n,
                    sig(o.statistic),
                    sig(o.critical_value),
                    o.alpha,
                    if o.reject { "reject" } else { "accept" }
                ));
            }
            out.push_str(&format!("{summary} ({rejections} of {} reject)\n", outcomes.len()));
            out
        }
    };
    emit(&a.output, text)
}

fn cmd_pit(a: &PitArgs) -> CliResult<()> {
    let mut man = RunManifest::new("pit");
    let values = load(&a.input, a.seed, &mut man)?;
    let model = match a.model.parse::<ModelFamily>() {
        Ok(family) => fit_model(family, &values)?,
        Err(_) => a.model.parse::<ReferenceDistribution>()?,
    };
    man.param("model", &a.model).param("fitted", model.to_string());
    let u = probability_integral_transform(&values, &model)?;

    let text = match a.output.format {
        Format::Structured => structured(&man, "values", json!(u.values())),
        Format::Text => {
            let mut out = man.to_comment_lines();
            for v in u.values() {
                out.push_str(&format!("{v}\n"));
            }
            out
        }
    };
    emit(&a.output, text)
}

fn cmd_calibrate(a: &CalibrateArgs) -> CliResult<()> {
    let kinds = parse_kinds(&a.stat)?;
    let sizes: Vec<usize> = a
        .sizes
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| Failure::Input(format!("bad sample size '{s}'"))))
        .collect::<CliResult<_>>()?;
    if kinds.is_empty() || sizes.is_empty() {
        return Err(Failure::Input("need at least one statistic and one size".into()));
    }
    check_alpha(a.alpha)?;
    let mut man = RunManifest::new("calibrate");
    man.param("stat", &a.stat)
        .param("sizes", &a.sizes)
        .param("alpha", a.alpha)
        .param("reps", a.reps);
    man.seed = Some(a.seed);
    let tables = calibrate_tables(&kinds, &sizes, a.alpha, a.reps, a.seed)?;

    let text = match a.output.format {
        Format::Structured => structured(&man, "tables", json!(tables)),
        Format::Text => {
            // The table header must stay on the first line.
            let body = format_tables(&tables);
            let (header, rest) = body.split_once('\n').unwrap_or((&body, ""));
            format!("{header}\n{}{rest}", man.to_comment_lines())
        }
    };
    emit(&a.output, text)
}

fn cmd_study(a: &StudyArgs) -> CliResult<()> {
    let mut man = RunManifest::new("study");
    let text = match (&a.preset, &a.config) {
        (Some(name), _) => {
            man.param("preset", name);
            preset(name).map_err(|_| {
                Failure::Input(format!("unknown preset '{name}'; available: {}", PRESETS.join(", ")))
            })?
        }
        (None, Some(path)) => {
            let bytes = read_input(&path.display().to_string())?;
            man.input(&bytes).param("config", path.display().to_string());
            String::from_utf8(bytes).map_err(|_| Failure::Input("config is not UTF-8".into()))?
        }
        (None, None) => return Err(Failure::Input("pass --preset or --config".into())),
    };
    let mut cfg = StudyConfig::parse(&text)?;
    if let Some(r) = a.reps {
        cfg = cfg.with_reps(r)?;
    }
    if let Some(s) = a.seed {
        cfg = cfg.with_seed(s)?;
    }
    cfg.validate()?;
    man.param("reps", cfg.reps).param("grid", &a.grid);
    man.seed = Some(cfg.seed);
    let report = run_study(&cfg)?;

    let out = match a.output.format {
        Format::Structured => structured(&man, "report", json!(report)),
        Format::Text => {
            let body = match &a.grid {
                Some(metric) => report.to_grid(metric),
                None => report.to_text(),
            };
            man.to_comment_lines() + &body
        }
    };
    emit(&a.output, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Estimate(a) => cmd_estimate(a),
        Command::Test(a) => cmd_test(a),
        Command::Pit(a) => cmd_pit(a),
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::Study(a) => cmd_study(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
