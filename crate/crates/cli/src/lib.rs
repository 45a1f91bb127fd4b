//! `spress`: config-driven runs of the saddle-pressure numerics.
//!
//! Each subcommand reads one TOML config, runs one pipeline and writes
//! `manifest.json`, `summary.json` and CSV tables into the output
//! directory. Exit status is 0 on success, 2 for invalid input and 3 when
//! the computation itself reports a status such as "no saddles".

pub mod config;
pub mod report;
pub mod run;

use std::path::{Path, PathBuf};

pub use config::{ConfigError, ExperimentConfig};
pub use report::{emit, Emitted, ReportBundle, Table};
pub use run::{run_experiment, RunError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Orbits,
    Pressure,
    Separated,
    Volume,
    Escape,
    Boxdim,
    Bound,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Orbits => "orbits",
            Command::Pressure => "pressure",
            Command::Separated => "separated",
            Command::Volume => "volume",
            Command::Escape => "escape",
            Command::Boxdim => "boxdim",
            Command::Bound => "bound",
            Command::Oracle => "oracle",
        }
    }
}

/// One full invocation: load, override, run, write.
pub fn execute(command: Command, config_path: &Path, out: &Path, seed: Option<u64>) -> Result<(ReportBundle, Emitted), RunError> {
    let started = report::timestamp();
    let (mut config, input) = ExperimentConfig::from_path(config_path)?;
    if seed.is_some() {
        config.seed = seed;
    }
    let bundle = run_experiment(&config, command)?;
    let emitted = emit(&bundle, out, command.name(), &config, &input, &started)?;
    Ok((bundle, emitted))
}

/// Default output directory for a command.
pub fn default_out(command: Command) -> PathBuf {
    PathBuf::from(format!("spress-{}", command.name()))
}
