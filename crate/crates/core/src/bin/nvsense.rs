// Copyright 2026 The nvsense Authors
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nvsense::commands::{self, exit_code};
use nvsense::config::RunConfig;
use nvsense::Error;

#[derive(Parser)]
#[command(name = "nvsense", version, about = "Electrolyte-diamond interface and NV dephasing model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file with `section.key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override one configuration key, e.g. `--set electrolyte.c_b=10`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Random seed for the Monte Carlo oracle.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Potential and field on both sides of the interface.
    Profile,
    /// Concentration sweep with fit and Stark table.
    Sweep,
    /// Power-law fit of 1/T2* against concentration.
    Fit,
    /// Surface field correlator against lag.
    Correlator,
    /// Ramsey signal and readout statistics.
    Ramsey,
    /// Concentration sensitivity against interrogation time.
    Sensitivity,
    /// Monte Carlo check of the analytic correlators.
    Oracle,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Profile => "profile",
            Command::Sweep => "sweep",
            Command::Fit => "fit",
            Command::Correlator => "correlator",
            Command::Ramsey => "ramsey",
            Command::Sensitivity => "sensitivity",
            Command::Oracle => "oracle",
        }
    }
}

fn load(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    for s in &cli.set {
        cfg.apply_override(s)?;
    }
    if let Some(seed) = cli.seed {
        cfg.set("seed", &seed.to_string())?;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load(&cli).and_then(|cfg| commands::run_command(cli.command.name(), &cfg, &cli.out));
    match result {
        Ok(report) => {
            for l in &report.lines {
                println!("{l}");
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("nvsense: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
