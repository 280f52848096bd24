//! `pnsolve`: static solves, elastic fields, energies, dynamics and validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{run_command, Command, Outcome};
use config::{parse_config, RunConfig};
use error::CliError;

/// Any config key can also be given as `--KEY=VALUE`, for example `--N=8192`.
#[derive(Debug, Parser)]
#[command(name = "pnsolve", version, about = "Peierls-Nabarro edge dislocation solver")]
struct Cli {
    /// TOML config file with flat KEY = VALUE entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the `output` key).
    #[arg(long, global = true)]
    output: Option<String>,
    /// Write into a non-empty output directory.
    #[arg(long, global = true)]
    overwrite: bool,
    /// Seed for perturbation recipes and the validation suite.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Relax a tanh or closed-form start to the static profile.
    SolveStatic,
    /// Displacements and stresses in both half-planes.
    Extend,
    /// Perturbation energies and the boxed elastic energy.
    Energy,
    /// Gradient-flow relaxation of a bumped static profile.
    Dynamics,
    /// Run the built-in acceptance checks.
    Validate,
}

/// Splits `--KEY=VALUE` config overrides from the arguments clap handles.
fn split_overrides(args: Vec<String>) -> (Vec<String>, Vec<(String, String)>) {
    let keys = RunConfig::keys();
    let mut rest = vec![];
    let mut overrides = vec![];
    for a in args {
        let kv = a
            .strip_prefix("--")
            .and_then(|s| s.split_once('='))
            .filter(|(k, _)| keys.iter().any(|key| key == k) && *k != "output");
        match kv {
            Some((k, v)) => overrides.push((k.to_string(), v.to_string())),
            None => rest.push(a),
        }
    }
    (rest, overrides)
}

fn run() -> Result<Outcome, CliError> {
    let (args, mut overrides) = split_overrides(std::env::args().collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => return Err(CliError::Usage(e.to_string().trim().to_string())),
    };
    if let Some(o) = &cli.output {
        overrides.push(("output".into(), toml_string(o)));
    }
    if let Some(s) = cli.seed {
        overrides.push(("pert_seed".into(), s.to_string()));
        overrides.push(("validate_seed".into(), s.to_string()));
    }
    let cfg = parse_config(cli.config.as_deref(), &overrides)?;
    let cmd = match cli.cmd {
        Cmd::SolveStatic => Command::SolveStatic,
        Cmd::Extend => Command::Extend,
        Cmd::Energy => Command::Energy,
        Cmd::Dynamics => Command::Dynamics,
        Cmd::Validate => Command::Validate,
    };
    run_command(&cfg, cmd, cli.overwrite)
}

fn toml_string(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn main() -> ExitCode {
    match run() {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
