//! `dialecto`: extract second-person variables from annotated transcripts
//! and relate speaker profiles to dialect groupings.
//!
//! Exit status: 0 on success, 1 on internal failure, 2 on usage or input
//! errors.

mod commands;
mod config;

use std::fmt;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::{CommonArgs, RunConfig};

/// Marks failures caused by the user's inputs or flags (exit status 2).
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn is_input_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.is::<InputError>())
}

#[derive(Parser)]
#[command(
    name = "dialecto",
    version,
    about = "Second-person variation: extraction, profiles, correlation, clustering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Find variable occurrences; write observations, profiles and a summary
    Extract,
    /// Spearman correlations between speaker-level variables
    Correlate,
    /// PAM clustering with silhouette-based choice of k
    Cluster,
    /// Principal components of the scaled profiles and a 2-D projection
    Pca,
    /// Generate a synthetic annotated corpus with ground-truth labels
    Synth,
    /// Run correlate, cluster and pca into a single JSON report
    Report,
}

fn run(cli: Cli) -> Result<()> {
    let cfg = RunConfig::resolve(&cli.common)?;
    match cli.command {
        Command::Extract => commands::cmd_extract(&cfg),
        Command::Correlate => commands::cmd_correlate(&cfg),
        Command::Cluster => commands::cmd_cluster(&cfg),
        Command::Pca => commands::cmd_pca(&cfg),
        Command::Synth => commands::cmd_synth(&cfg),
        Command::Report => commands::cmd_report(&cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_input_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
