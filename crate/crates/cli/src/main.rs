//! `kmnet` command-line front end.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Window;
use crate::config::ExportGrid;

#[derive(Parser)]
#[command(name = "kmnet", version, about = "Complex-potential networks for plane elasticity and fracture")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a model from a TOML run configuration.
    Train { config: PathBuf },
    /// Evaluate a saved model on a regular grid and write a CSV.
    Eval {
        #[arg(long)]
        model: PathBuf,
        /// Builtin case name or case file.
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = 100)]
        nx: usize,
        #[arg(long, default_value_t = 100)]
        ny: usize,
        /// `xmin,xmax,ymin,ymax`; defaults to the domain bounding box.
        #[arg(long)]
        window: Option<Window>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract stress intensity factors from a saved crack model.
    Sif {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        case: String,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an acceptance suite (or `all`) and print the results table.
    Benchmark {
        suite: String,
        /// Also write the results as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the builtin cases.
    Cases,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Train { config } => commands::cmd_train(&config),
        Command::Eval { model, case, nx, ny, window, out } => commands::cmd_eval(&model, &case, ExportGrid { nx, ny }, window, out),
        Command::Sif { model, case, radius, n, out } => commands::cmd_sif(&model, &case, radius, n, out),
        Command::Benchmark { suite, out } => commands::cmd_benchmark(&suite, out),
        Command::Cases => commands::cmd_cases(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
