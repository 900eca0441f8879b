//! Command-line surface of the `maxmean` binary.
//!
//! Exit codes: 0 on success, 1 when a monitor limit is violated or a campaign
//! records a failure, 2 on any input error.

pub mod ingest;
pub mod monitor;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::continuous::{bump_train, interval_pnorm};
use crate::discrete::{impulse_train, scale_ladder, windowed_pnorm};
use crate::error::{Error, Result};
use crate::series::{SampleSeries, WindowSpec};
use crate::verify::{run_campaign, CheckKind, SizeBounds};

pub use ingest::{derive_rates, ingest_series, series_to_csv};
pub use monitor::{evaluate_monitor, window_to_samples, MonitorConfig, MonitorReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "maxmean", version, about = "Maximal windowed p-means across scales")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate maximal p-means over a ladder of window sizes.
    Analyze(AnalyzeArgs),
    /// Check maximal p-means against per-window limits.
    Monitor(MonitorArgs),
    /// Emit an input whose maximal mean grows with the window size.
    Counterexample(CounterexampleArgs),
    /// Run a seeded randomized campaign over one check, or `all`.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub column: String,
    /// Resample onto a uniform grid with this spacing (seconds).
    #[arg(long)]
    pub resample: Option<f64>,
    /// Treat the column as a cumulative quantity and analyze its rate.
    #[arg(long)]
    pub rates: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Window sizes in samples.
    #[arg(long, value_delimiter = ',')]
    pub windows: Vec<usize>,
    /// Window sizes in seconds, converted with the series spacing.
    #[arg(long, value_delimiter = ',')]
    pub durations: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write two-column `window_size,value` plot data here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MonitorArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["discrete", "continuous"])))]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub discrete: bool,
    #[arg(long)]
    pub continuous: bool,
    /// Smaller window (samples), discrete mode.
    #[arg(long, requires = "discrete")]
    pub n: Option<usize>,
    /// Larger window (samples), discrete mode.
    #[arg(long, requires = "discrete")]
    pub m: Option<usize>,
    /// Shorter interval length, continuous mode.
    #[arg(long = "T", requires = "continuous")]
    pub short: Option<f64>,
    /// Longer interval length, continuous mode.
    #[arg(long = "S", requires = "continuous")]
    pub long: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Write the generated series (`t,value` CSV) or step function
    /// (`breakpoint,value` CSV) here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub check: String,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = SizeBounds::default().max_len)]
    pub max_len: usize,
    #[arg(long, default_value_t = SizeBounds::default().max_pieces)]
    pub max_pieces: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::Monitor(args) => cmd_monitor(&args),
        Command::Counterexample(args) => cmd_counterexample(&args),
        Command::Verify(args) => cmd_verify(&args),
    }
}

fn load(input: &InputArgs) -> Result<SampleSeries> {
    let x = ingest_series(&input.input, &input.column, input.resample)?;
    if input.rates {
        derive_rates(&x)
    } else {
        Ok(x)
    }
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<i32> {
    let x = load(&args.input)?;
    let mut windows = args.windows.clone();
    for &d in &args.durations {
        windows.push(window_to_samples(d, x.dt())?);
    }
    let report = scale_ladder(&x, args.p, &windows)?;
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => report.to_csv(),
    };
    emit(args.out.as_deref(), &body)?;
    if let Some(plot) = &args.plot {
        write_atomic(plot, &report.to_plot_csv())?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_monitor(args: &MonitorArgs) -> Result<i32> {
    let x = load(&args.input)?;
    let text = std::fs::read_to_string(&args.config).map_err(|e| Error::io(&args.config, e))?;
    let config = MonitorConfig::from_json(&text)?;
    let report = evaluate_monitor(&x, &config)?;
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Csv => report.to_csv(),
    };
    emit(args.out.as_deref(), &body)?;
    Ok(if report.violations > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

pub fn cmd_counterexample(args: &CounterexampleArgs) -> Result<i32> {
    let report = if args.discrete {
        let n = args.n.ok_or_else(|| Error::Parse("--discrete needs --n".into()))?;
        let m = args.m.ok_or_else(|| Error::Parse("--discrete needs --m".into()))?;
        let (report, series) = discrete_counterexample(n, m, args.p)?;
        if let Some(out) = &args.out {
            write_atomic(out, &series_to_csv(&series, "value"))?;
        }
        report
    } else {
        let short = args
            .short
            .ok_or_else(|| Error::Parse("--continuous needs --T".into()))?;
        let long = args.long.ok_or_else(|| Error::Parse("--continuous needs --S".into()))?;
        let (report, csv) = continuous_counterexample(short, long, args.p)?;
        if let Some(out) = &args.out {
            write_atomic(out, &csv)?;
        }
        report
    };
    emit(None, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(EXIT_OK)
}

/// Impulse train of period `n` and length `m + 2n`, with its p-th power norms
/// at both windows. Requires `n < m` and `n` not dividing `m`.
pub fn discrete_counterexample(n: usize, m: usize, p: f64) -> Result<(serde_json::Value, SampleSeries)> {
    if n == 0 || n >= m {
        return Err(Error::BadOrder {
            small: n as f64,
            large: m as f64,
        });
    }
    if m.is_multiple_of(n) {
        return Err(Error::NotACounterexampleCase {
            t: n as f64,
            s: m as f64,
        });
    }
    // m = (d-1) n + j with 1 <= j < n
    let d = m / n + 1;
    let x = impulse_train(n, m + 2 * n)?;
    let at_n = windowed_pnorm(&x, WindowSpec::new(p, n)?)?;
    let at_m = windowed_pnorm(&x, WindowSpec::new(p, m)?)?;
    let report = json!({
        "mode": "discrete",
        "n": n,
        "m": m,
        "d": d,
        "p": p,
        "length": x.len(),
        "norm_pow_p_at_n": at_n.value_pow_p,
        "norm_pow_p_at_m": at_m.value_pow_p,
        "predicted_at_n": 1.0 / n as f64,
        "predicted_at_m": d as f64 / m as f64,
        "arg_start_at_m": at_m.arg_start,
        "larger_window_larger_max_mean": at_m.value_pow_p > at_n.value_pow_p,
        "message": "larger window, larger max mean",
        "series": x.values(),
    });
    Ok((report, x))
}

/// Bump train for scales `T < S`, with its p-th power norms at both scales.
pub fn continuous_counterexample(short: f64, long: f64, p: f64) -> Result<(serde_json::Value, String)> {
    let train = bump_train(short, long, p)?;
    let at_short = interval_pnorm(&train.f, p, short)?;
    let at_long = interval_pnorm(&train.f, p, long)?;
    let csv = train.f.to_csv();
    let report = json!({
        "mode": "continuous",
        "T": short,
        "S": long,
        "d": train.d,
        "epsilon": train.epsilon,
        "p": p,
        "norm_pow_p_at_T": at_short.value_pow_p,
        "norm_pow_p_at_S": at_long.value_pow_p,
        "predicted_at_T": 1.0 / short,
        "predicted_at_S": (train.d + 1) as f64 / long,
        "arg_left_at_S": at_long.arg_left,
        "larger_window_larger_max_mean": at_long.value_pow_p > at_short.value_pow_p,
        "message": "larger window, larger max mean",
        "step_function_csv": csv,
    });
    Ok((report, csv))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let kinds: Vec<CheckKind> = if args.check == "all" {
        CheckKind::ALL.to_vec()
    } else {
        vec![args.check.parse()?]
    };
    let bounds = SizeBounds {
        max_len: args.max_len.max(1),
        max_pieces: args.max_pieces.max(1),
        ..SizeBounds::default()
    };
    let mut body = String::new();
    let mut failed = false;
    for kind in kinds {
        let report = run_campaign(kind, args.trials, args.seed, &bounds)?;
        failed |= !report.passed();
        body.push_str(&report.to_json_lines());
    }
    emit(args.out.as_deref(), &body)?;
    Ok(if failed { EXIT_VIOLATION } else { EXIT_OK })
}

fn emit(out: Option<&Path>, body: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, body),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

/// Writes to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, body: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(body.as_bytes()).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
