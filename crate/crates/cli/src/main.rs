use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "ergolab",
    version,
    about = "Iterate holomorphic self-maps of the unit ball and decide mean ergodicity of their composition operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    analysis: AnalysisArgs,

    /// Emit JSON instead of key/value lines.
    #[arg(long, global = true)]
    json: bool,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
}

/// Overrides applied after any `set` lines of the map file.
#[derive(Args, Debug, Clone, Default)]
pub struct AnalysisArgs {
    /// Number of near-boundary radii 1 - 10^-m in the sup-norm grid.
    #[arg(long, global = true, value_name = "DEPTH")]
    pub grid_radii: Option<u32>,

    /// Largest iterate index in the decay trace.
    #[arg(long, global = true)]
    pub budget: Option<usize>,

    /// Largest period tried by the retraction search.
    #[arg(long, global = true)]
    pub kmax: Option<usize>,

    /// Seed for the quasi-random grid directions.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Truncation degree for symbolic composition.
    #[arg(long, global = true)]
    pub degree_bound: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the composition operator of a map file.
    Analyze { path: PathBuf },
    /// Bergman distance and automorphism checks for two interior points.
    Metric {
        /// Comma-separated coordinates, e.g. `0.5+0.1i,0`.
        z: String,
        w: String,
    },
    /// Linear normal form of the iterates of a map fixing the origin.
    NormalForm {
        path: PathBuf,
        /// Move an interior fixed point to the origin first.
        #[arg(long)]
        conjugate: bool,
    },
    /// Period search and limit retraction of the iterates.
    Retraction {
        path: PathBuf,
        #[arg(long)]
        conjugate: bool,
    },
    /// Convergence table of Cesaro means toward the limit projection.
    Cesaro {
        path: PathBuf,
        /// Largest averaging index; defaults to the configured horizon.
        #[arg(long)]
        horizon: Option<usize>,
        /// Radius of the evaluation grid.
        #[arg(long, default_value_t = 0.9)]
        radius: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json {
        ergolab::report::Format::Json
    } else {
        ergolab::report::Format::KeyValue
    };
    let a = &cli.analysis;
    let result = match &cli.command {
        Command::Analyze { path } => commands::analyze(path, a, format),
        Command::Metric { z, w } => commands::metric(z, w, format),
        Command::NormalForm { path, conjugate } => commands::normal_form(path, a, *conjugate, format),
        Command::Retraction { path, conjugate } => commands::retraction(path, a, *conjugate, format),
        Command::Cesaro { path, horizon, radius } => commands::cesaro(path, a, *horizon, *radius, format),
    };
    let text = match result {
        Ok(text) => text,
        Err(failure) => {
            eprintln!("ergolab: {}", failure.message);
            return ExitCode::from(failure.code);
        }
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let failure = Failure::io(path, e);
                eprintln!("ergolab: {}", failure.message);
                return ExitCode::from(failure.code);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
