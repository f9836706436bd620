//! `curvtool`: command-line front end for `curvtool-core`.
//!
//! Every subcommand emits a [`Report`]: a key-sorted JSON document echoing
//! the command line, a digest of the effective inputs, the results, the
//! tolerances in force and a set of pass/fail flags.

pub mod args;
mod commands;
pub mod error;
pub mod report;

use clap::Parser;

use crate::args::{Cli, Command};
pub use crate::error::{CliError, CliResult};
pub use crate::report::Report;

/// Name of the environment variable that overrides `--rng`.
pub const SEED_ENV: &str = "CURVTOOL_SEED";

pub fn parse_args(argv: &[String]) -> Result<Cli, clap::Error> {
    Cli::try_parse_from(std::iter::once("curvtool".to_string()).chain(argv.iter().cloned()))
}

/// The seed in effect: `env_seed` when present, else `--rng`.
pub fn effective_seed(cli: &Cli, env_seed: Option<&str>) -> CliResult<u64> {
    match env_seed {
        Some(s) => s.trim().parse().map_err(|e| CliError::Parse(format!("{SEED_ENV}='{s}': {e}"))),
        None => Ok(cli.rng),
    }
}

/// Runs a parsed command line; `argv` is echoed into the report.
pub fn execute(cli: &Cli, argv: &[String], env_seed: Option<&str>) -> CliResult<Report> {
    let seed = effective_seed(cli, env_seed)?;
    let out = match &cli.command {
        Command::Tensor(a) => commands::tensor(a, seed)?,
        Command::Metric(a) => commands::metric(a)?,
        Command::Identity(a) => commands::identity(a, seed)?,
        Command::Ring(a) => commands::ring(a)?,
        Command::Search(a) => commands::search(a, seed)?,
    };
    let files: Vec<&[u8]> = out.files.iter().map(Vec::as_slice).collect();
    Ok(Report {
        command: argv.to_vec(),
        inputs_digest: report::digest(&out.parameters, &files),
        results: serde_json::json!({"parameters": out.parameters, "values": out.results}),
        tolerances: out.tolerances,
        flags: out.flags,
    })
}
