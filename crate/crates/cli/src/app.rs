//! Argument definitions and subcommand dispatch.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use mscale::estimators::{
    estimate_ghe_windows, fit_log_autocovariance, fit_log_autocovariance_auto, fit_parabola,
    fit_tail, tail_ccdf, GheConfig, TailSide,
};
use mscale::experiments::{run_experiment, run_experiment_on, ExperimentPlan, ExperimentReport};
use mscale::generators::{gen_bm, gen_mrw, gen_tbm, MrwParams, TbmParams};
use mscale::surrogates::{self, SurrogateKind};
use mscale::{IncrementMode, LagWindow, MasterSeed, QGrid, Series};

use crate::error::{CliError, CliResult};
use crate::ingest::{ingest, write_series, ColumnSelector, IngestSpec, MissingPolicy, Transform};
use crate::plot::{emit_plot_data, PlotKind};
use crate::reports::{AnyReport, EstimateReport, TailEntry, TailsReport};

#[derive(Debug, Parser)]
#[command(
    name = "mscale",
    version,
    about = "Multiscaling analysis of time series"
)]
pub struct Cli {
    /// Master seed; drawn from entropy and printed when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for ensemble runs.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (standard output when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a BM, tBM or MRW increment series.
    Generate(GenerateArgs),
    /// Shuffle or Gaussianize an input series.
    Surrogate(SurrogateArgs),
    /// GHE exponents and the parabolic fit of one series.
    Estimate(EstimateArgs),
    /// Power-law tail fits.
    Tails(TailsArgs),
    /// Run a Monte Carlo plan from a TOML file.
    Experiment(ExperimentArgs),
    /// Tidy CSV for plotting from a JSON report.
    Plotdata(PlotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// CSV file to read.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Value column, by zero-based index or header name.
    #[arg(long, default_value = "0")]
    pub column: String,
    /// Column to sort rows by before use.
    #[arg(long)]
    pub date_column: Option<String>,
    /// log_returns, raw_increments or levels (default: the file's `# kind=`
    /// comment, else log_returns).
    #[arg(long)]
    pub transform: Option<String>,
    /// Fail on missing or unusable rows instead of dropping them.
    #[arg(long)]
    pub strict: bool,
}

impl InputArgs {
    pub fn spec(&self) -> CliResult<IngestSpec> {
        Ok(IngestSpec {
            path: self.input.clone(),
            column: self.column.parse()?,
            date_column: self.date_column.as_deref().map(str::parse).transpose()?,
            transform: self.transform.as_deref().map(str::parse).transpose()?,
            missing: if self.strict {
                MissingPolicy::Fail
            } else {
                MissingPolicy::Drop
            },
        })
    }

    fn load(&self) -> CliResult<Series> {
        let got = ingest(&self.spec()?)?;
        info!(
            "{}: {} increments ({}, {} rows dropped)",
            self.input.display(),
            got.series.len(),
            got.transform,
            got.dropped
        );
        Ok(got.series)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Bm,
    Tbm,
    Mrw,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    #[arg(long, default_value_t = 1 << 17)]
    pub length: usize,
    /// Degrees of freedom (tbm).
    #[arg(long)]
    pub n: Option<f64>,
    /// Intermittency (mrw).
    #[arg(long)]
    pub lambda2: Option<f64>,
    /// Autocorrelation length (mrw).
    #[arg(long = "corr-len", default_value_t = 1000.0)]
    pub corr_len: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Realization index within the seed's family of streams.
    #[arg(long, default_value_t = 0)]
    pub realization: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Shuffle,
    Gaussianize,
}

#[derive(Debug, Clone, Args)]
pub struct SurrogateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Number of surrogates; more than one writes `<out>_0000.csv`, ...
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Lag window `a:b`; repeat for several (default 1:19 and 30:250).
    #[arg(long = "window")]
    pub windows: Vec<LagWindow>,
    /// Moment orders as `start:step:stop` or a comma list.
    #[arg(long, default_value = "0.1:0.1:1.0")]
    pub qgrid: QGrid,
    /// Fit the log-volatility covariance up to this lag (`auto` picks it).
    #[arg(long = "cov-tmax")]
    pub cov_tmax: Option<String>,
    /// Non-overlapping increments at each lag.
    #[arg(long)]
    pub disjoint: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct TailsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = SideArg::Both)]
    pub side: SideArg,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// TOML plan file.
    pub plan: PathBuf,
    /// Flat CSV table (default: the JSON path with a `.csv` extension).
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// JSON report written by `estimate`, `tails` or `experiment`.
    pub report: PathBuf,
    /// zeta_vs_q, moments_loglog, tail_ccdf or cov_curve.
    #[arg(long)]
    pub kind: PlotKind,
}

fn seed_or_entropy(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = MasterSeed::from_entropy().0;
        eprintln!("seed: {s}");
        s
    })
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

fn output(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn write_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> CliResult<()> {
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Runs one parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::usage(format!("cannot set up {t} threads: {e}")))?;
    }
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Generate(a) => generate(a, seed_or_entropy(cli.seed), out),
        Command::Surrogate(a) => surrogate(a, seed_or_entropy(cli.seed), out),
        Command::Estimate(a) => estimate(a, out),
        Command::Tails(a) => tails(a, out),
        Command::Experiment(a) => experiment(a, cli.seed, out),
        Command::Plotdata(a) => plotdata(a, out),
    }
}

fn generate(a: &GenerateArgs, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let seed = MasterSeed(seed);
    let series = match a.model {
        ModelKind::Bm => gen_bm(a.length, seed, a.realization)?,
        ModelKind::Tbm => {
            let n =
                a.n.ok_or_else(|| CliError::usage("--model tbm needs --n"))?;
            gen_tbm(&TbmParams::new(n, a.length)?, seed, a.realization)?
        }
        ModelKind::Mrw => {
            let l2 = a
                .lambda2
                .ok_or_else(|| CliError::usage("--model mrw needs --lambda2"))?;
            gen_mrw(
                &MrwParams::new(l2, a.corr_len, a.sigma, a.length)?,
                seed,
                a.realization,
            )?
        }
    };
    let comments = vec![
        format!("generator={}", series.label),
        format!("seed={} realization={}", seed.0, a.realization),
    ];
    write_series(output(out)?, &series, &comments)
}

fn numbered(base: &Path, k: usize) -> PathBuf {
    let stem = base
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("surrogate");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}_{k:04}.{ext}"))
}

fn surrogate(a: &SurrogateArgs, seed: u64, out: Option<&Path>) -> CliResult<()> {
    if a.reps == 0 {
        return Err(CliError::usage("--reps must be at least 1"));
    }
    if a.reps > 1 && out.is_none() {
        return Err(CliError::usage(
            "--reps above 1 needs --out as a file name template",
        ));
    }
    let series = a.input.load()?;
    let kind = match a.method {
        Method::Shuffle => SurrogateKind::Shuffle,
        Method::Gaussianize => SurrogateKind::Gaussianize,
    };
    for k in 0..a.reps {
        let s = surrogates::apply(kind, series.clone(), MasterSeed(seed), k as u64)?;
        let comments = vec![
            format!(
                "surrogate={:?} source={}",
                a.method,
                a.input.input.display()
            )
            .to_lowercase(),
            format!("seed={seed} realization={k}"),
        ];
        match out {
            Some(p) if a.reps > 1 => write_series(create(&numbered(p, k))?, &s, &comments)?,
            _ => write_series(output(out)?, &s, &comments)?,
        }
    }
    Ok(())
}

/// One report per window, each sharing the covariance fit.
pub fn estimate_series(
    series: &Series,
    windows: &[LagWindow],
    grid: &QGrid,
    cov_tmax: Option<&str>,
    increments: IncrementMode,
) -> CliResult<Vec<EstimateReport>> {
    let covariance = match cov_tmax {
        None => None,
        Some("auto") => Some(fit_log_autocovariance_auto(series)?),
        Some(t) => {
            let t = t.parse::<usize>().map_err(|_| {
                CliError::usage(format!("--cov-tmax expects a lag or `auto`, got {t:?}"))
            })?;
            Some(fit_log_autocovariance(series, t)?)
        }
    };
    let results = estimate_ghe_windows(series, windows, grid, GheConfig { increments })?;
    results
        .iter()
        .map(|r| {
            Ok(EstimateReport::new(
                series.label.clone(),
                r,
                fit_parabola(r)?,
                covariance.clone(),
            ))
        })
        .collect()
}

fn estimate(a: &EstimateArgs, out: Option<&Path>) -> CliResult<()> {
    let series = a.input.load()?;
    let windows = if a.windows.is_empty() {
        vec![LagWindow::SHORT, LagWindow::LONG]
    } else {
        a.windows.clone()
    };
    let mode = if a.disjoint {
        IncrementMode::Disjoint
    } else {
        IncrementMode::Overlapping
    };
    let reports = estimate_series(&series, &windows, &a.qgrid, a.cov_tmax.as_deref(), mode)?;
    if let [single] = reports.as_slice() {
        write_json(out, single)
    } else {
        write_json(out, &reports)
    }
}

pub fn tails_report(series: &Series, sides: &[TailSide]) -> CliResult<TailsReport> {
    let tails = sides
        .iter()
        .map(|&side| {
            let fit = fit_tail(series, side)?;
            Ok(TailEntry {
                ccdf: tail_ccdf(series, &fit),
                fit,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(TailsReport {
        source: series.label.clone(),
        tails,
    })
}

fn tails(a: &TailsArgs, out: Option<&Path>) -> CliResult<()> {
    let series = a.input.load()?;
    let sides: &[TailSide] = match a.side {
        SideArg::Left => &[TailSide::Left],
        SideArg::Right => &[TailSide::Right],
        SideArg::Both => &[TailSide::Left, TailSide::Right],
    };
    write_json(out, &tails_report(&series, sides)?)
}

/// Reads a TOML plan; `seed` overrides the plan's, and a plan without one gets
/// a fresh seed that is printed.
pub fn load_plan(path: &Path, seed: Option<u64>) -> CliResult<ExperimentPlan> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let mut table: toml::Table = text
        .parse()
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let seed = match (seed, table.get("seed")) {
        (Some(s), _) => s,
        (None, Some(_)) => {
            let plan: ExperimentPlan = table
                .try_into()
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            plan.validate()?;
            return Ok(plan);
        }
        (None, None) => seed_or_entropy(None),
    };
    let seed =
        i64::try_from(seed).map_err(|_| CliError::usage("TOML plans hold seeds up to 2^63 - 1"))?;
    table.insert("seed".into(), toml::Value::Integer(seed));
    let plan: ExperimentPlan = table
        .try_into()
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    plan.validate()?;
    Ok(plan)
}

/// Runs a plan, loading its input file relative to `base_dir`.
pub fn run_plan(plan: &ExperimentPlan, base_dir: &Path) -> CliResult<ExperimentReport> {
    match &plan.input {
        None => Ok(run_experiment(plan)?),
        Some(input) => {
            let mut spec = IngestSpec::new(base_dir.join(&input.path));
            if let Some(c) = &input.column {
                spec.column = c.parse::<ColumnSelector>()?;
            }
            spec.transform = input
                .transform
                .as_deref()
                .map(str::parse::<Transform>)
                .transpose()?;
            let series = ingest(&spec)?.series;
            Ok(run_experiment_on(plan, &series)?)
        }
    }
}

pub fn write_table<W: Write>(report: &ExperimentReport, w: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(w);
    for row in report.table() {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn experiment(a: &ExperimentArgs, seed: Option<u64>, out: Option<&Path>) -> CliResult<()> {
    let plan = load_plan(&a.plan, seed)?;
    let base = a.plan.parent().unwrap_or(Path::new("."));
    let report = run_plan(&plan, base)?;
    write_json(out, &report)?;
    let table = a
        .table
        .clone()
        .or_else(|| out.map(|p| p.with_extension("csv")));
    if let Some(t) = table {
        write_table(&report, create(&t)?)?;
    }
    Ok(())
}

fn plotdata(a: &PlotArgs, out: Option<&Path>) -> CliResult<()> {
    let text = std::fs::read_to_string(&a.report)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", a.report.display())))?;
    let report = AnyReport::from_json(&text).map_err(|e| {
        CliError::data(format!("{} is not a known report: {e}", a.report.display()))
    })?;
    emit_plot_data(&report, a.kind, output(out)?)?;
    Ok(())
}
