//! `covercrimp`: JSON front end to the covercrimp library.
//!
//! Exit codes: 0 success, 2 schema violation, 3 precision exhausted,
//! 4 budget exceeded, 5 domain error.

mod commands;
mod input;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use covercrimp::{Error, ErrorKind};

#[derive(Parser, Debug)]
#[command(name = "covercrimp", version, about = "Exact computations for finite flat covers of a disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Discriminant and branch valuation of a cover.
    Disc,
    /// Enumerate the crimps of a normalization, with orbits.
    Crimps,
    /// Weighted stability of a marked nodal curve, with its walls.
    Stable,
    /// Hurwitz counts or étale cover classes.
    Hurwitz,
    /// Solve the Riemann-Hurwitz relation.
    Rh,
    /// Whether two crimps differ by an automorphism of the normalization.
    Iso,
    /// Check commutativity, associativity and the unit of a table.
    Validate,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Input file, inline JSON, or `-` for stdin (the default).
    #[arg(long, global = true)]
    input: Option<String>,
    /// Scalar field: `rational`, `F7`, `GF(7)`, ...
    #[arg(long, global = true)]
    field: Option<String>,
    /// Number of t-adic coefficients kept.
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Weight ε as an exact fraction `p/q`.
    #[arg(long, global = true)]
    epsilon: Option<String>,
    /// Largest search space an enumeration may walk.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Schema => 2,
        ErrorKind::Precision => 3,
        ErrorKind::Budget => 4,
        ErrorKind::Domain => 5,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(value) = std::env::var("COVERCRIMP_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Schema(format!("COVERCRIMP_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Schema(e.to_string()))
}

fn run(cli: &Cli) -> Result<serde_json::Value, Error> {
    configure_threads()?;
    let config = input::JobConfig::from_options(&cli.options)?;
    let value = input::read(cli.options.input.as_deref())?;
    match cli.command {
        Command::Disc => commands::disc(&value, &config),
        Command::Validate => commands::validate(&value, &config),
        Command::Crimps => commands::crimps(&value, &config),
        Command::Iso => commands::iso(&value, &config),
        Command::Stable => commands::stable(&value, &config),
        Command::Hurwitz => commands::hurwitz(&value, &config),
        Command::Rh => commands::rh(&value),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = match cli.options.format {
                Format::Json => serde_json::to_string_pretty(&report).expect("values serialize"),
                Format::Table => table::render(&report),
            };
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = writeln!(out, "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
