//! Command-line front end: `run`, `compare`, `validate` and `preset`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

pub use commands::{cmd_compare, cmd_run, cmd_validate, load_run, preset_list, Comparison, RunSeries};
pub use output::{read_series, sha256_hex, Manifest, MANIFEST};

use crate::config_file::{emit_config, load_config};
use crate::experiment::ExperimentConfig;
use crate::presets::preset;
use crate::propagate::RunOptions;

#[derive(Parser, Debug)]
#[command(name = "kickclock", version, about = "Time-of-flight distributions read by continuous and kicked quantum clocks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one experiment and write CSV series plus a manifest.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for the channel loop.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Compare completed runs on a common time grid.
    Compare {
        #[arg(required = true, num_args = 2..)]
        runs: Vec<PathBuf>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the regime report for a configuration.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// List presets or print one as a config file.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum PresetAction {
    List,
    Show { name: String },
}

#[derive(Args, Debug)]
pub struct Source {
    /// Key-value configuration file
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Named scenario (see `preset list`)
    #[arg(long)]
    pub preset: Option<String>,
    /// Override the number of clock-angle samples
    #[arg(long)]
    pub theta_points: Option<usize>,
    /// Kick at t = 0, T, 2T, ... instead of T, 2T, ...
    #[arg(long)]
    pub kick_at_zero: bool,
}

impl Source {
    pub fn resolve(&self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match (&self.config, &self.preset) {
            (Some(path), None) => load_config(path).with_context(|| format!("loading {}", path.display()))?,
            (None, Some(name)) => preset(name)?,
            _ => bail!("pass exactly one of --config or --preset"),
        };
        if let Some(points) = self.theta_points {
            cfg.theta_points = points;
        }
        if self.kick_at_zero {
            cfg.kick_at_zero = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn execute(cli: Cli) -> anyhow::Result<String> {
    match cli.command {
        Command::Run { source, out, workers } => {
            let cfg = source.resolve()?;
            let manifest = cmd_run(&cfg, &out, RunOptions { workers })?;
            let mut s = format!("wrote {}\n", out.display());
            for (k, v) in manifest.entries() {
                if k.starts_with("regime.warning.") || k.starts_with("summary.") {
                    s.push_str(&format!("{k} = {v}\n"));
                }
            }
            Ok(s)
        }
        Command::Compare { runs, out } => Ok(cmd_compare(&runs, &out)?.render()),
        Command::Validate { source } => Ok(cmd_validate(&source.resolve()?)),
        Command::Preset { action } => match action {
            PresetAction::List => Ok(preset_list()),
            PresetAction::Show { name } => Ok(emit_config(&preset(&name)?)),
        },
    }
}

pub fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
