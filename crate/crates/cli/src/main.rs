mod commands;
mod error;
mod manifest;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use limshape::groebner::DEFAULT_ENTRY_BOUND;
use limshape::rational::{parse_rational, Rational};

/// Symbolic powers, generic initial ideals and limiting shapes of points
/// and linear flats, with exact rational arithmetic.
#[derive(Debug, Parser)]
#[command(name = "limshape", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for every random choice (coordinate changes, generic configurations).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Entries of random coordinate changes are drawn from [-B, B].
    #[arg(long, global = true, default_value_t = DEFAULT_ENTRY_BOUND)]
    pub entry_bound: u32,

    /// Worker threads for m-sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    /// Write artifacts into this directory instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    TwoLines,
    IntersectingLines,
    PointsGrid,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generic initial ideal of the m-th symbolic power, as a staircase.
    Gin {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Generators of the m-th symbolic power.
    SymbolicPower {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Lattice counts and complement volumes of a staircase cut at m·t.
    Staircase {
        #[arg(long, required_unless_present = "staircase", conflicts_with = "staircase")]
        config: Option<PathBuf>,
        /// Staircase JSON file instead of a configuration.
        #[arg(long)]
        staircase: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, value_parser = rational_arg)]
        t: Rational,
    },
    /// Limiting-shape approximant Δ, the region Γ ∩ T_t and a convergence report.
    LimitingShape {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        m_max: u32,
        #[arg(long, value_parser = rational_arg)]
        t: Rational,
    },
    /// Closed-form asymptotic Hilbert polynomial of s disjoint r-flats in Pⁿ.
    AhpFlats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
    },
    /// Exact volume of a polyhedron file, optionally clipped at t.
    Volume {
        #[arg(long)]
        polyhedron: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        t: Option<Rational>,
        /// Treat the polyhedron as Δ and report vol(T_t \ Δ).
        #[arg(long, requires = "t")]
        gamma: bool,
    },
    /// Run the checks reproducing a worked example.
    Verify {
        #[arg(value_enum)]
        example: Example,
    },
    /// Convergence report only.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        m_max: u32,
        #[arg(long, value_parser = rational_arg)]
        t: Rational,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
