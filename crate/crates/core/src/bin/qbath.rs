// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};

use qbath::sweep::params::{parse_assignment, parse_config};
use qbath::sweep::verify::write_reports;
use qbath::sweep::{
    cmd_gap, cmd_rates, cmd_steady, cmd_verify, preset, run_sweep, write_csv, Axis, Params,
    Suite, SweepSpec, PRESETS, REGISTRY,
};
use qbath::Error;

const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Parser, Debug)]
#[command(name = "qbath", version, about = "Steady states and entanglement of two qubits in a correlated, pumped bath")]
struct Cli {
    /// key=value parameter file; command-line assignments override it
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file, or `stdout`
    #[arg(long, global = true, value_name = "PATH", default_value = "stdout")]
    out: String,
    /// Sweep worker threads [default: available parallelism]
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Seed for the randomized verification checks
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rates, effective temperatures and physicality at one point
    Rates {
        /// Parameter assignments such as `b=1.1` or `mode=magnet`
        #[arg(value_name = "KEY=VALUE")]
        assignments: Vec<String>,
    },
    /// Steady state, concurrence and gap at one point
    Steady {
        #[arg(value_name = "KEY=VALUE")]
        assignments: Vec<String>,
    },
    /// Liouvillian spectrum and gap at one point
    Gap {
        #[arg(value_name = "KEY=VALUE")]
        assignments: Vec<String>,
    },
    /// Two-axis grid sweep written as CSV
    Sweep {
        /// Named setup providing mode, axes and fixed parameters
        #[arg(long)]
        preset: Option<String>,
        /// First (outer) axis, `name:min:max:points`
        #[arg(long, value_name = "AXIS")]
        axis1: Option<String>,
        /// Second (inner) axis, `name:min:max:points`
        #[arg(long, value_name = "AXIS")]
        axis2: Option<String>,
        /// Comma-separated output columns
        #[arg(long, value_name = "LIST")]
        columns: Option<String>,
        #[arg(value_name = "KEY=VALUE")]
        assignments: Vec<String>,
    },
    /// Run a verification suite: kms, psd, detailed-balance, oracles or all
    Verify {
        #[arg(default_value = "all")]
        suite: String,
    },
}

enum Failure {
    Validation(String),
    Numerical(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(format!("i/o error: {e}"))
    }
}

fn registry_help() -> String {
    let mut s = String::from("Parameters (KEY=VALUE, also accepted in --config files):\n  mode = phenomenological | magnet\n");
    for d in REGISTRY {
        let default = d.default.map(|v| v.to_string()).unwrap_or_else(|| "unset".into());
        s += &format!("  {:<7} [{}, default {}] {}\n", d.name, d.mode, default, d.help);
    }
    s += "\nSweep presets:\n";
    for p in PRESETS {
        s += &format!("  {:<21} {}\n", p.name, p.help);
    }
    s
}

#[derive(Default)]
struct SweepKeys {
    preset: Option<String>,
    axis1: Option<String>,
    axis2: Option<String>,
    columns: Option<String>,
}

impl SweepKeys {
    fn take(&mut self, key: &str, value: &str) -> bool {
        let slot = match key {
            "preset" => &mut self.preset,
            "axis1" => &mut self.axis1,
            "axis2" => &mut self.axis2,
            "columns" => &mut self.columns,
            _ => return false,
        };
        *slot = Some(value.to_string());
        true
    }
}

/// Config file entries followed by command-line assignments, last one wins.
fn gather(config: Option<&PathBuf>, assignments: &[String]) -> Result<Vec<(String, String)>, Failure> {
    let mut entries = Vec::new();
    if let Some(path) = config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Failure::Validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        entries.extend(parse_config(&text)?);
    }
    for a in assignments {
        entries.push(parse_assignment(a)?);
    }
    Ok(entries)
}

fn build_params(entries: &[(String, String)], base: Params, sweep: &mut SweepKeys) -> Result<Params, Failure> {
    let mut p = base;
    for (k, v) in entries {
        if !sweep.take(k, v) {
            p.assign(k, v)?;
        }
    }
    Ok(p)
}

fn output(out: &str) -> Result<Box<dyn Write>, Failure> {
    if out == "stdout" || out == "-" {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let f = File::create(out)
            .map_err(|e| Failure::Validation(format!("cannot create {out}: {e}")))?;
        Ok(Box::new(BufWriter::new(f)))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut keys = SweepKeys::default();
    match &cli.command {
        Command::Rates { assignments } => {
            let params = build_params(&gather(cli.config.as_ref(), assignments)?, Params::default(), &mut keys)?;
            let report = cmd_rates(&params)?;
            let mut w = output(&cli.out)?;
            report.write(&mut w)?;
            w.flush()?;
        }
        Command::Steady { assignments } => {
            let params = build_params(&gather(cli.config.as_ref(), assignments)?, Params::default(), &mut keys)?;
            let report = cmd_steady(&params)?;
            let mut w = output(&cli.out)?;
            report.write(&mut w)?;
            w.flush()?;
        }
        Command::Gap { assignments } => {
            let params = build_params(&gather(cli.config.as_ref(), assignments)?, Params::default(), &mut keys)?;
            let report = cmd_gap(&params)?;
            let mut w = output(&cli.out)?;
            report.write(&mut w)?;
            w.flush()?;
        }
        Command::Sweep {
            preset: preset_flag,
            axis1,
            axis2,
            columns,
            assignments,
        } => {
            let entries = gather(cli.config.as_ref(), assignments)?;
            let mut probe = SweepKeys::default();
            for (k, v) in &entries {
                probe.take(k, v);
            }
            let chosen = preset_flag.clone().or(probe.preset);
            let mut base = Params::default();
            if let Some(name) = &chosen {
                let p = preset(name)?;
                base.set_mode(p.mode);
                for (k, v) in p.fixed {
                    base.set(k, *v)?;
                }
                keys.axis1 = Some(p.axis1.to_string());
                keys.axis2 = Some(p.axis2.to_string());
                keys.columns = p.columns.map(str::to_string);
            }
            let params = build_params(&entries, base, &mut keys)?;
            let pick = |flag: &Option<String>, key: Option<String>, what: &str| {
                flag.clone().or(key).ok_or_else(|| {
                    Failure::Validation(format!("sweep needs --{what} name:min:max:points (or --preset)"))
                })
            };
            let a1: Axis = pick(axis1, keys.axis1.clone(), "axis1")?.parse()?;
            let a2: Axis = pick(axis2, keys.axis2.clone(), "axis2")?.parse()?;
            let mut spec = SweepSpec::new(params, a1, a2)?;
            if let Some(c) = columns.clone().or(keys.columns.clone()) {
                spec = spec.with_columns(&c)?;
            }
            let workers = cli
                .workers
                .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
            if workers == 0 {
                return Err(Failure::Validation("--workers must be at least 1".into()));
            }
            let rows = run_sweep(&spec, workers);
            let mut w = output(&cli.out)?;
            write_csv(&spec, &rows, &mut w)?;
            w.flush()?;
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let reports = cmd_verify(suite, cli.seed)?;
            let mut w = output(&cli.out)?;
            write_reports(&mut w, &reports)?;
            w.flush()?;
            if !reports.iter().all(|r| r.passed()) {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let command = Cli::command().after_long_help(registry_help());
    let cli = match command.try_get_matches().and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
    }
}
