//! `kf`: reproducible Kaczmarz and IFS experiments writing CSV and JSON.

mod diagnose;
mod frames;
mod ifs;
mod input;
mod output;
mod solve;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use output::{exit_code, Outcome};

#[derive(Debug, Parser, Serialize)]
#[command(name = "kf", version, about = "Kaczmarz algorithms, IFS measures and Kaczmarz frames of exponentials")]
struct Cli {
    /// Worker threads; KF_WORKERS takes precedence when set.
    #[arg(long, global = true)]
    #[serde(skip)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Solve Ax = b by cyclic or randomized Kaczmarz.
    Solve(solve::SolveArgs),
    /// Identity residuals, effectiveness and Parseval defect of a projection system.
    Diagnose(diagnose::DiagnoseArgs),
    /// IFS measures: sampling, Fourier transform, digits, geometry, Kakutani.
    Ifs(ifs::IfsArgs),
    /// Gram windows, Kaczmarz duals and Parseval defects of exponentials in L^2(mu).
    Frames(frames::FramesArgs),
}

fn workers(flag: Option<usize>) -> Result<Option<usize>, String> {
    match std::env::var("KF_WORKERS") {
        Ok(v) => v.trim().parse::<usize>().map(Some).map_err(|_| format!("KF_WORKERS={v:?} is not a worker count")),
        Err(_) => Ok(flag),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match workers(cli.workers) {
        Ok(Some(n)) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        Ok(Some(_)) => {
            eprintln!("error: worker count must be positive");
            return ExitCode::from(2);
        }
        Ok(None) => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let config = serde_json::to_value(&cli).expect("config serializes");
    let result = match &cli.command {
        Command::Solve(a) => solve::run(a, &config),
        Command::Diagnose(a) => diagnose::run(a, &config),
        Command::Ifs(a) => ifs::run(a, &config),
        Command::Frames(a) => frames::run(a, &config),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::PropertyFailure(msg)) => {
            eprintln!("property check failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
