//! `fixcalc`: Lefschetz numbers, fixed point indices, index integrals and
//! Riemann sums from plain-text complexes, maps, sets and functions.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{ExampleName, EXIT_OK};
use fixcalc_core::index::DEFAULT_ORACLE_BUDGET;
use fixcalc_core::riemann::DEFAULT_LEVELS;
use report::RunReport;

#[derive(Parser, Debug)]
#[command(
    name = "fixcalc",
    version,
    about = "Exact fixed point calculus on simplicial complexes"
)]
struct Cli {
    /// Print the report as JSON (schema 1, exact numbers as strings).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lefschetz number of a self-map, and Λ(U, f) with --set.
    Lefschetz {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, alias = "comb")]
        set: Option<PathBuf>,
    },
    /// Combinatorial fixed point index of an admissible set.
    Index {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        set: PathBuf,
        /// Cross-check against the homological index.
        #[arg(long)]
        oracle: bool,
        /// Subdivision rounds allowed to the oracle.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: usize,
    },
    /// Integral of a step function (`coeff : set-file` lines) against the index.
    Integrate {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long = "fn")]
        function: PathBuf,
    },
    /// Dyadic Riemann sums of a ℚ(√2)-valued function against the index.
    Riemann {
        #[arg(long)]
        complex: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: u32,
        /// Ceiling sums instead of floor sums.
        #[arg(long)]
        upper: bool,
    },
    /// Rational Betti numbers and Euler characteristic.
    Betti {
        #[arg(long)]
        complex: PathBuf,
    },
    /// Write a named instance to files.
    Example {
        #[command(subcommand)]
        which: Example,
    },
}

#[derive(Subcommand, Debug)]
enum Example {
    /// Suspended m-gon, poles swapped.
    SphereReflection {
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Suspended m-gon, equator rotated one step.
    SphereRotation {
        #[arg(long, default_value_t = 6)]
        m: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Path of two edges with its ends swapped.
    PathReflection {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Lefschetz { .. } => "lefschetz",
        Command::Index { .. } => "index",
        Command::Integrate { .. } => "integrate",
        Command::Riemann { .. } => "riemann",
        Command::Betti { .. } => "betti",
        Command::Example { .. } => "example",
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let mut report = RunReport::new(command_name(&cli.command), args);
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Lefschetz { complex, map, set } => commands::lefschetz(&mut report, complex, map, set.as_deref()),
        Command::Index {
            complex,
            map,
            set,
            oracle,
            budget,
        } => commands::index(&mut report, complex, map, set, *oracle, *budget),
        Command::Integrate { complex, map, function } => commands::integrate(&mut report, complex, map, function),
        Command::Riemann {
            complex,
            map,
            function,
            levels,
            upper,
        } => commands::riemann(&mut report, complex, map, function, *levels, *upper),
        Command::Betti { complex } => commands::betti_numbers(&mut report, complex),
        Command::Example { which } => {
            let (name, out) = match which {
                Example::SphereReflection { m, out } => (ExampleName::SphereReflection(*m), out),
                Example::SphereRotation { m, out } => (ExampleName::SphereRotation(*m), out),
                Example::PathReflection { out } => (ExampleName::PathReflection, out),
            };
            commands::example(&mut report, name, out)
        }
    };
    report.elapsed = start.elapsed();
    let code = match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("fixcalc: {}", f.message);
            let code = f.code;
            report.error = Some(f);
            code
        }
    };
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(code as u8)
}
