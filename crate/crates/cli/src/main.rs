use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tracing_subscriber::EnvFilter;
use tseed_core::analysis::{TurnoverBaseline, TurnoverDirection};
use tseed_core::experiment::{
    emit_report, read_summary, run_experiment, run_turnover, write_rank_tests, write_turnover, ExperimentConfig,
    ExperimentResult, Strategy,
};
use tseed_core::ingest::Format;
use tseed_core::{Error, ErrorKind};

/// Seed selection experiments on temporal social networks.
#[derive(Debug, Parser)]
#[command(name = "tseed", version)]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full experiment and write the report files.
    Run(ExperimentArgs),
    /// Friedman and Nemenyi tests over one or more summary.csv files.
    Stats(StatsArgs),
    /// Seed every strategy and write turnover.csv only.
    Turnover(ExperimentArgs),
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// TOML config; flags below override its values.
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_parser = |s: &str| s.parse::<Format>())]
    format: Option<Format>,
    #[arg(long)]
    dataset: Option<String>,
    #[arg(long, value_delimiter = ',')]
    learning_windows: Option<Vec<usize>>,
    #[arg(long)]
    evaluation_windows: Option<usize>,
    /// e.g. outexp,bethyp,random or closeness:maxlog.
    #[arg(long, value_delimiter = ',', value_parser = |s: &str| s.parse::<Strategy>())]
    strategies: Option<Vec<Strategy>>,
    #[arg(long)]
    seed_fraction: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    phi: Option<Vec<f64>>,
    #[arg(long)]
    rng_seed: Option<u64>,
    #[arg(long)]
    random_runs: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Weight recent windows most in the EF aggregation.
    #[arg(long)]
    ef_recency: bool,
    /// Let nodes influenced in a window recruit others in the same window.
    #[arg(long)]
    within_window_fixpoint: bool,
    /// Cap adjusted Nemenyi p-values at 1.
    #[arg(long)]
    clamp_pvalues: bool,
    #[arg(long, value_parser = |s: &str| s.parse::<TurnoverDirection>())]
    turnover: Option<TurnoverDirection>,
    #[arg(long, value_parser = |s: &str| s.parse::<TurnoverBaseline>())]
    turnover_baseline: Option<TurnoverBaseline>,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// A summary.csv written by `tseed run`; repeat for several datasets.
    #[arg(short, long = "summary", required = true)]
    summaries: Vec<PathBuf>,
    /// Defaults to the directory of the first summary.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    clamp_pvalues: bool,
}

impl ExperimentArgs {
    fn into_config(self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    cfg.$field = v;
                }
            )*};
        }
        set!(
            format,
            learning_windows,
            evaluation_windows,
            strategies,
            seed_fraction,
            phi,
            rng_seed,
            random_runs,
            output,
            turnover,
            turnover_baseline
        );
        if self.input.is_some() {
            cfg.input = self.input;
        }
        if self.dataset.is_some() {
            cfg.dataset = self.dataset;
        }
        cfg.ef_recency |= self.ef_recency;
        cfg.within_window_fixpoint |= self.within_window_fixpoint;
        cfg.clamp_pvalues |= self.clamp_pvalues;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn print_summary(result: &ExperimentResult) {
    println!(
        "{:<8} {:<20} {:>6} {:>6} {:>12} {:>10}",
        "network", "strategy", "phi", "seeds", "influenced", "std"
    );
    for r in &result.records {
        let std = r
            .total_influenced_std
            .map(|s| format!("{s:.2}"))
            .unwrap_or_else(|| "-".into());
        println!(
            "{:<8} {:<20} {:>6} {:>6} {:>12.2} {:>10}",
            r.network_type,
            r.strategy.label(),
            r.phi,
            r.seed_count,
            r.total_influenced,
            std
        );
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run(args) => {
            let cfg = args.into_config()?;
            let result = run_experiment(&cfg)?;
            let stats = result.parse_stats;
            if stats.malformed + stats.self_loops > 0 {
                tracing::warn!(
                    malformed = stats.malformed,
                    self_loops = stats.self_loops,
                    "skipped input lines"
                );
            }
            let files = emit_report(&result, &cfg.output)?;
            print_summary(&result);
            eprintln!(
                "wrote {} files to {} in {:.2?}",
                files.len(),
                cfg.output.display(),
                result.elapsed
            );
        }
        Command::Stats(args) => {
            let mut rows = Vec::new();
            for path in &args.summaries {
                rows.extend(read_summary(path)?);
            }
            let dir = args
                .output
                .unwrap_or_else(|| args.summaries[0].parent().map(PathBuf::from).unwrap_or_default());
            for path in write_rank_tests(&rows, &dir, args.clamp_pvalues)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Turnover(args) => {
            let cfg = args.into_config()?;
            let records = run_turnover(&cfg)?;
            let path = write_turnover(&records, &cfg.output)?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let default_level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new(default_level)))
        .init();

    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.kind() {
                ErrorKind::Config => ExitCode::from(1),
                ErrorKind::Data => ExitCode::from(2),
            }
        }
    }
}
