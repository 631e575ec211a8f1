use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use chtw::cli;

/// Simulate CHTW-systems: multidimensional Petri nets with spatially
/// distributed resources.
#[derive(Parser)]
#[command(name = "chtw", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model; diagnostics as JSON lines on stderr.
    Validate { model: PathBuf },
    /// Run a model and write trace.csv and summary.json.
    Run {
        model: PathBuf,
        /// Number of synchronous steps to execute.
        #[arg(long)]
        steps: u64,
        /// Abort as soon as a step drives a cell negative (exit code 3).
        #[arg(long)]
        strict: bool,
        /// Record full states every K steps (the final state is always kept).
        #[arg(long = "sample-every", default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        sample_every: u64,
        /// Output directory for the trace files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Export connectivity, uptake and W matrices as JSON.
    Matrices {
        model: PathBuf,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract plot-ready rows (cell centers, then the value) from a trace.
    Plotdata {
        trace: PathBuf,
        /// C-brane to extract.
        #[arg(long)]
        brane: String,
        /// Recorded step to extract.
        #[arg(long)]
        step: u64,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let code = match args.command {
        Command::Validate { model } => cli::cmd_validate(&model),
        Command::Run {
            model,
            steps,
            strict,
            sample_every,
            out,
        } => cli::cmd_run(
            &model,
            &cli::RunOptions {
                steps,
                strict,
                sample_every,
                out_dir: out,
            },
        ),
        Command::Matrices { model, out } => cli::cmd_matrices(&model, out.as_deref()),
        Command::Plotdata { trace, brane, step } => cli::cmd_plotdata(&trace, &brane, step),
    };
    ExitCode::from(code as u8)
}
