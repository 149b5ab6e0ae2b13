use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use ruin::{commands, Curve, GridSpec, Mode, ProblemConfig};

/// Minimum probability of lifetime ruin under piecewise-linear consumption.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the problem and print a JSON summary.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the config with all defaults filled in instead.
        #[arg(long)]
        dump_config: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write one curve on a grid as CSV.
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// h, psi, pi, vf or utility.
        #[arg(long)]
        what: Curve,
        /// LO:HI:N; wealth for all curves but utility, which takes consumption.
        #[arg(long, value_parser = GridSpec::parse, allow_hyphen_values = true)]
        grid: Option<GridSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one oracle and print a JSON report; exits 2 if a check fails.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// residual, fd, mc or correspondence.
        #[arg(long)]
        mode: Mode,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(bytes)?;
            Ok(s.flush()?)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve { config, out, dump_config, seed } => {
            let cfg = ProblemConfig::load(&config)?;
            let text = if dump_config { commands::dump_config(&cfg, seed)? } else { commands::solve(&cfg)? };
            emit(out.as_deref(), text.as_bytes())?;
        }
        Command::Eval { config, what, grid, out } => {
            let cfg = ProblemConfig::load(&config)?;
            let table = commands::eval(&cfg, what, grid)?;
            emit(out.as_deref(), &table.to_bytes()?)?;
        }
        Command::Verify { config, mode, seed, out } => {
            let cfg = ProblemConfig::load(&config)?;
            let report = commands::verify(&cfg, mode, seed)?;
            for line in report.lines() {
                eprintln!("{line}");
            }
            emit(out.as_deref(), report.to_json().as_bytes())?;
            return Ok(report.pass);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
