mod commands;
mod error;
mod io;

use clap::{Parser, Subcommand};
use commands::Ctx;
use error::{usage, CliError};
use io::{InputFormat, Log};
use qmc::Mode;
use std::process::ExitCode;

/// Nearest-neighbor classification and covering in quasi-metric spaces.
///
/// Machine-readable JSON goes to stdout, tables and diagnostics to stderr.
/// Exit codes: 0 success, 1 the input fails the requested property, 2 usage.
#[derive(Parser, Debug)]
#[command(name = "qmc", version)]
struct Cli {
    /// Allow unreachable pairs (`inf` entries, disconnected edge lists).
    #[arg(long, global = true)]
    relaxed: bool,

    /// Relative tolerance of the triangle-inequality check.
    #[arg(long, global = true, env = "QMC_TOLERANCE", default_value_t = qmc::DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Input file format.
    #[arg(long, global = true, value_enum, default_value_t = InputFormat::Auto)]
    input_format: InputFormat,

    /// Suppress the human-readable output on stderr.
    #[arg(short, long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the quasi-metric axioms.
    Validate(commands::validate::Args),
    /// Directional covering constants, doubling and density constants.
    Dimension(commands::dimension::Args),
    /// Build an α-cover.
    Cover(commands::cover::Args),
    /// Train the compressed margin classifier on a labeled sample.
    Train(commands::classify::TrainArgs),
    /// Apply a trained classifier.
    Predict(commands::classify::PredictArgs),
    /// Evaluate a sample-compression generalization bound.
    Bound(commands::classify::BoundArgs),
    /// Symmetrize a quasi-metric.
    Transform(commands::transform::Args),
    /// Generate a fixture instance.
    Gen(commands::gen::Args),
    /// Distance-evaluation counters for the nearest-neighbor and cover workloads.
    Bench(commands::bench::Args),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if !(cli.tolerance.is_finite() && cli.tolerance >= 0.0) {
        return Err(usage(format!("tolerance must be a non-negative number, got {}", cli.tolerance)));
    }
    let ctx = Ctx {
        mode: if cli.relaxed { Mode::Relaxed } else { Mode::Strict },
        tolerance: cli.tolerance,
        input_format: cli.input_format,
        log: Log { quiet: cli.quiet },
    };
    match cli.command {
        Command::Validate(a) => commands::validate::run(&ctx, a),
        Command::Dimension(a) => commands::dimension::run(&ctx, a),
        Command::Cover(a) => commands::cover::run(&ctx, a),
        Command::Train(a) => commands::classify::train(&ctx, a),
        Command::Predict(a) => commands::classify::predict(&ctx, a),
        Command::Bound(a) => commands::classify::bound(&ctx, a),
        Command::Transform(a) => commands::transform::run(&ctx, a),
        Command::Gen(a) => commands::gen::run(&ctx, a),
        Command::Bench(a) => commands::bench::run(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
