use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pareto_gof::bootstrap::{pvalue_battery, BootstrapConfig};
use pareto_gof::dataset::{parse_dataset, write_dataset, Rescale};
use pareto_gof::distributions::{mom_estimate, Sample};
use pareto_gof::golfer::{golfer_sample, GOLFER_EARNINGS, GOLFER_THRESHOLD, REFERENCE_REPLICATIONS};
use pareto_gof::par::{self, Execution};
use pareto_gof::statistic::{parse_test_list, Tuning};
use pareto_gof::study::{run_power_study, PowerStudyConfig, MIN_RECOMMENDED_MC};
use sha2::{Digest, Sha256};

mod report;

use report::{GolferReport, TestRun};

/// Environment variable capping the number of worker threads.
const THREADS_ENV: &str = "PARETO_GOF_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "pareto-gof",
    version,
    about = "Goodness-of-fit tests for the Pareto type I distribution"
)]
struct Cli {
    /// Run every replication on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test a dataset (one value per line, `#` comments) for the Pareto law.
    Test(TestArgs),
    /// Run a power study described by a TOML config and print the table.
    Power(PowerArgs),
    /// Reproduce the golfer-earnings application against its reference values.
    Golfer(GolferArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Pretty,
    Json,
}

#[derive(Args, Debug)]
struct TuningArgs {
    /// Comma-separated tests (KS, CvM, AD, ZA, G, S1, S2, T1, T2) or `all`.
    #[arg(long, default_value = "all")]
    tests: String,
    /// Minimum block size m of the characteristic-function tests.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Weight decay a of the characteristic-function tests.
    #[arg(long, default_value_t = 2.0)]
    a: f64,
    /// Weight decay of the Mellin-transform test G.
    #[arg(long = "mellin-a", default_value_t = 1.0)]
    mellin_a: f64,
}

#[derive(Args, Debug)]
struct BootstrapArgs {
    /// Number of bootstrap replications.
    #[arg(long = "B", value_name = "B")]
    replications: Option<usize>,
    /// Significance level used for the reject column.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Seed of every random stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Divide the data by this value, or by the sample minimum with `min`.
    #[arg(long, value_parser = parse_threshold)]
    threshold: Option<Rescale>,
    /// Re-estimate the shape in every bootstrap sample.
    #[arg(long, overrides_with = "no_refit")]
    refit: bool,
    /// Hold the shape at the estimate from the data.
    #[arg(long = "no-refit", overrides_with = "refit")]
    no_refit: bool,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

impl BootstrapArgs {
    fn refit(&self, default: bool) -> bool {
        match (self.refit, self.no_refit) {
            (true, _) => true,
            (_, true) => false,
            _ => default,
        }
    }
}

#[derive(Args, Debug)]
struct TestArgs {
    /// Dataset file; omit together with `--golfer` to use the built-in data.
    #[arg(required_unless_present = "golfer")]
    file: Option<PathBuf>,
    /// Use the built-in golfer-earnings dataset.
    #[arg(long, conflicts_with = "file")]
    golfer: bool,
    #[command(flatten)]
    tuning: TuningArgs,
    #[command(flatten)]
    boot: BootstrapArgs,
}

#[derive(Args, Debug)]
struct PowerArgs {
    /// Study config (TOML): tests, alternatives, sample_sizes, mc, alpha, seed.
    config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct GolferArgs {
    #[command(flatten)]
    tuning: TuningArgs,
    #[command(flatten)]
    boot: BootstrapArgs,
    /// Write the raw earnings to this file in the dataset format and exit.
    #[arg(long, value_name = "FILE")]
    export: Option<PathBuf>,
}

fn parse_threshold(s: &str) -> std::result::Result<Rescale, String> {
    if s.eq_ignore_ascii_case("min") {
        return Ok(Rescale::SampleMinimum);
    }
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(Rescale::Threshold(t)),
        _ => Err(format!("`{s}` is neither a positive number nor `min`")),
    }
}

fn tuning(args: &TuningArgs) -> Tuning {
    Tuning {
        m: args.m,
        a: args.a,
        mellin_a: args.mellin_a,
    }
}

fn execution(cli: &Cli) -> Execution {
    if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let threads: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
        par::configure_threads(threads);
    }
    Ok(())
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run_tests(
    sample: &Sample,
    name: &str,
    args: &TuningArgs,
    boot: &BootstrapArgs,
    refit: bool,
    exec: Execution,
) -> Result<TestRun> {
    let tests = parse_test_list(&args.tests, tuning(args))?;
    let replications = boot.replications.unwrap_or(REFERENCE_REPLICATIONS);
    let cfg = BootstrapConfig::new(replications, boot.alpha, boot.seed)?
        .with_refit(refit)
        .with_execution(exec);
    let beta_hat = mom_estimate(sample)?.beta();
    let reports = pvalue_battery(sample, &tests, &cfg)?;
    Ok(TestRun::new(name, sample.len(), beta_hat, &cfg, &tests, reports))
}

fn cmd_test(args: &TestArgs, exec: Execution) -> Result<()> {
    let rescale = args.boot.threshold.unwrap_or_default();
    let (sample, name) = match &args.file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let sample = parse_dataset(&text, rescale).with_context(|| format!("{}", path.display()))?;
            (sample, path.display().to_string())
        }
        None => (golfer_sample(rescale), "golfer".to_string()),
    };
    let run = run_tests(&sample, &name, &args.tuning, &args.boot, args.boot.refit(true), exec)?;
    emit(&match args.boot.format {
        Format::Csv => run.to_csv(),
        Format::Pretty => run.to_pretty(),
        Format::Json => serde_json::to_string_pretty(&run)? + "\n",
    })
}

fn cmd_power(args: &PowerArgs, exec: Execution) -> Result<()> {
    let text = std::fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    eprintln!("config sha256: {}", hex::encode(Sha256::digest(text.as_bytes())));
    let mut cfg = PowerStudyConfig::from_toml(&text).with_context(|| format!("{}", args.config.display()))?;
    cfg.exec = exec;
    if cfg.low_precision() {
        eprintln!(
            "warning: mc = {} is below {MIN_RECOMMENDED_MC}; powers carry large Monte Carlo error",
            cfg.mc
        );
    }
    let table = run_power_study(&cfg)?;
    for c in table.cells.iter().filter(|c| c.error.is_some()) {
        eprintln!(
            "warning: {} n={} {} failed: {}",
            c.alternative,
            c.n,
            c.test,
            c.error.as_deref().unwrap_or_default()
        );
    }
    emit(&match args.format {
        Format::Csv => table.to_csv(),
        Format::Pretty => table.to_pretty(),
        Format::Json => serde_json::to_string_pretty(&table)? + "\n",
    })
}

fn cmd_golfer(args: &GolferArgs, exec: Execution) -> Result<()> {
    if let Some(path) = &args.export {
        let comment = "Lifetime tournament earnings (thousands of dollars) of 50 golfers";
        std::fs::write(path, write_dataset(&GOLFER_EARNINGS, Some(comment)))
            .with_context(|| format!("writing {}", path.display()))?;
        return Ok(());
    }
    let rescale = args.boot.threshold.unwrap_or(Rescale::Threshold(GOLFER_THRESHOLD));
    let sample = golfer_sample(rescale);
    let run = run_tests(
        &sample,
        "golfer",
        &args.tuning,
        &args.boot,
        args.boot.refit(false),
        exec,
    )?;
    let beta_at_threshold = mom_estimate(&golfer_sample(Rescale::Threshold(GOLFER_THRESHOLD)))?.beta();
    let report = GolferReport::new(run, rescale, beta_at_threshold);
    emit(&match args.boot.format {
        Format::Csv => report.to_csv(),
        Format::Pretty => report.to_pretty(),
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
    })
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    let exec = execution(&cli);
    match &cli.command {
        Command::Test(args) => cmd_test(args, exec),
        Command::Power(args) => cmd_power(args, exec),
        Command::Golfer(args) => cmd_golfer(args, exec),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
