//! Command-line front end: configs in, reports and grid-function files out.
//!
//! Exit codes: 0 success or PASS, 1 FAIL, 2 usage or config error,
//! 3 inconclusive (a solve did not converge).

// `!(x > 0.0)` style guards also reject NaN, which `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod expr;
pub mod manifest;

mod commands;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

pub use commands::Outcome;
pub use config::{Config, ConfigError};
pub use manifest::{RunManifest, MANIFEST_FILE};

#[derive(Debug, Clone, Parser)]
#[command(name = "orlicz", version, about = "Fractional Orlicz-Sobolev inequality checks and singular problem solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Print only verdicts and errors.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run inequality sweeps and write report.csv.
    Verify,
    /// Solve the singular problem.
    Solve,
    /// Comparison experiment between [problem] and [compare] data.
    Compare,
    /// Solve from several initial guesses and compare.
    Uniqueness,
    /// Solve and measure the reflection asymmetry.
    Symmetry,
    /// Luxemburg norm or seminorm of a function.
    Norm,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Solve => "solve",
            Command::Compare => "compare",
            Command::Uniqueness => "uniqueness",
            Command::Symmetry => "symmetry",
            Command::Norm => "norm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Fail = 1,
    Usage = 2,
    Inconclusive = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] orlicz_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        use orlicz_core::Error as E;
        match self {
            CliError::Core(E::Internal(_) | E::Bracket(_)) => Exit::Inconclusive,
            _ => Exit::Usage,
        }
    }
}

/// Where results go and how chatty to be.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub out_dir: PathBuf,
    pub quiet: bool,
}

impl RunContext {
    pub fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }
}

/// Run one command on a loaded config and write the manifest.
pub fn run(command: Command, config: &Config, ctx: &RunContext) -> Result<Outcome, CliError> {
    let start = Instant::now();
    std::fs::create_dir_all(&ctx.out_dir)?;
    let outcome = commands::dispatch(command, config, ctx)?;
    let manifest = RunManifest {
        command: command.name().to_string(),
        config_digest: config.digest().to_string(),
        seed: config.seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time: start.elapsed().as_secs_f64(),
        outputs: outcome.outputs.clone(),
        warnings: outcome.warnings.clone(),
        verdict: outcome.verdict.clone(),
    };
    manifest.write(&ctx.out_dir)?;
    Ok(outcome)
}

fn load(path: Option<&Path>, seed: Option<u64>) -> Result<Config, CliError> {
    let path = path.ok_or_else(|| ConfigError {
        pos: None,
        msg: "--config is required".into(),
    })?;
    let mut config = Config::load(path)?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    Ok(config)
}

/// Entry point shared by the binary and the tests.
pub fn execute(cli: &Cli) -> Exit {
    let ctx = RunContext {
        out_dir: cli.out.clone(),
        quiet: cli.quiet,
    };
    let result = load(cli.config.as_deref(), cli.seed).and_then(|c| run(cli.command, &c, &ctx));
    match result {
        Ok(outcome) => {
            if let Some(v) = &outcome.verdict {
                println!("{v}");
            }
            for d in &outcome.diagnostics {
                eprintln!("{d}");
            }
            outcome.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit()
        }
    }
}
