use std::collections::HashSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{builder::BoolishValueParser, Parser, Subcommand};
use collabdist::distances::LogBase;
use collabdist::pipeline::{self, PipelineConfig, StageOutput, StageResult};

/// Distance factors of international research collaboration.
#[derive(Debug, Parser)]
#[command(name = "collabdist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML configuration; relative paths inside it are resolved against
    /// its directory.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Logarithm base for dECO: 10 or e.
    #[arg(long, global = true)]
    log_base: Option<LogBase>,

    /// Number of most productive countries kept in the network report.
    #[arg(long, global = true)]
    top_k: Option<usize>,

    /// Histogram bins for the co-publication densities.
    #[arg(long, global = true)]
    bins: Option<usize>,

    /// Country to leave out of an extra density variant; repeatable or
    /// comma-separated.
    #[arg(long, global = true, value_delimiter = ',')]
    exclude: Vec<String>,

    /// Fit the per-period panel (on/off).
    #[arg(long, global = true, value_parser = BoolishValueParser::new())]
    periods: Option<bool>,

    /// Seed for the synthetic generator.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, filter and geocode the corpus; build country profiles.
    Ingest,
    /// Build the country-pair indicator table.
    Features,
    /// Trends, correlations, densities and network centralities.
    Analyze,
    /// OLS and zero-inflated beta regressions with VIF.
    Regress,
    /// Synthetic pair table with planted ZIBeta parameters.
    Synth,
    /// ingest, features, analyze and regress in sequence.
    All,
}

fn configure(cli: &Cli) -> Result<PipelineConfig, String> {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::load(path).map_err(|e| e.to_string())?,
        None => PipelineConfig::default(),
    };
    if let Some(v) = cli.log_base {
        config.log_base = v;
    }
    if let Some(v) = cli.top_k {
        config.top_k = v;
    }
    if let Some(v) = cli.bins {
        config.bins = v;
    }
    if !cli.exclude.is_empty() {
        config.exclude = cli.exclude.iter().filter(|c| !c.trim().is_empty()).cloned().collect();
    }
    if let Some(v) = cli.periods {
        config.periods = v;
    }
    if let Some(v) = cli.seed {
        config.seed = v;
    }
    if let Some(v) = &cli.out {
        config.out = v.clone();
    }
    Ok(config)
}

fn run(command: &Command, config: &PipelineConfig) -> StageResult<Vec<StageOutput>> {
    Ok(match command {
        Command::Ingest => vec![pipeline::cmd_ingest(config)?],
        Command::Features => vec![pipeline::cmd_features(config)?],
        Command::Analyze => vec![pipeline::cmd_analyze(config)?],
        Command::Regress => vec![pipeline::cmd_regress(config)?],
        Command::Synth => vec![pipeline::cmd_synth(config)?],
        Command::All => pipeline::run_all(config)?,
    })
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
    let config = match configure(&cli) {
        Ok(c) => c,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    match run(&cli.command, &config) {
        Ok(outputs) => {
            let mut printed = HashSet::new();
            for output in &outputs {
                for w in output.warnings() {
                    eprintln!("warning: {w}");
                }
                for f in output.files.iter().filter(|f| printed.insert(*f)) {
                    println!("{}", f.display());
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
