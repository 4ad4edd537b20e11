//! Command-line front end: argument parsing, configuration and the pipeline
//! stages behind each subcommand.

pub mod config;
pub mod stages;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::RunConfig;
pub use stages::*;

use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "sentiment-nowcast", version, about = "Social-media sentiment indicators and MIDAS nowcasts")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Master seed for all random streams.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory for stage artifacts.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Stream dumps, filter by concept keywords, write the filtered store.
    Ingest,
    /// Label submissions and comments.
    Classify,
    /// Build the daily indicator grid and the re-labeling audit.
    Signals,
    /// Recursive MIDAS and AR(1) nowcasts.
    Nowcast,
    /// Forecast accuracy metrics and significance tests.
    Evaluate,
    /// Tables, paths and correlations.
    Report,
    /// Generate a synthetic corpus with planted labels.
    Synth,
    /// Classifier accuracy sweep against hand labels.
    Accuracy,
    /// Run ingest through report in order.
    Pipeline,
}

impl Cli {
    /// Loads the configuration file (or defaults) and applies flag overrides.
    pub fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Executes one subcommand against a validated configuration.
pub fn run_command(cfg: &RunConfig, command: Command) -> Result<()> {
    match command {
        Command::Ingest => {
            let (counts, _) = cmd_ingest(cfg)?;
            for c in counts {
                log::info!("{}: {} submissions, {} comments", c.concept, c.submissions, c.comments);
            }
        }
        Command::Classify => {
            cmd_classify(cfg)?;
        }
        Command::Signals => {
            cmd_signals(cfg)?;
        }
        Command::Nowcast => {
            cmd_nowcast(cfg)?;
        }
        Command::Evaluate => {
            cmd_evaluate(cfg)?;
        }
        Command::Report => {
            cmd_report(cfg)?;
        }
        Command::Synth => {
            cmd_synth(cfg)?;
        }
        Command::Accuracy => {
            cmd_accuracy(cfg)?;
        }
        Command::Pipeline => cmd_pipeline(cfg)?,
    }
    Ok(())
}

/// Parses the configuration and runs the selected subcommand, defaulting to
/// the full pipeline.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.config()?;
    run_command(&cfg, cli.command.unwrap_or(Command::Pipeline))
}

/// Process exit code for an outcome: 0 success, 1 validation, 2 runtime.
pub fn exit_code(result: &Result<()>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(e) if e.is_validation() => 1,
        Err(_) => 2,
    }
}

/// Reports an error on stderr and returns its exit code.
pub fn report_error(result: &Result<()>) -> i32 {
    if let Err(e) = result {
        eprintln!("error: {e}");
    }
    exit_code(result)
}

impl From<clap::Error> for Error {
    fn from(e: clap::Error) -> Self {
        Error::InvalidArgument(e.to_string())
    }
}
