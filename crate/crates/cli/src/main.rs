//! `kforms`: norm forms, symbol algebras, Milnor symbols and cd bounds from
//! the command line.
//!
//! Exit status: 0 when every assertion of the command held, 1 when one
//! failed, 2 for usage and input errors.

mod commands;
mod report;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::Report;

#[derive(Parser)]
#[command(name = "kforms", version, about = "Exact norm forms and mod-p Milnor symbols over finite and Laurent series fields")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Field descriptor: gf(7), gf(5^2), gf(7)((t))((s)).
    #[arg(long, global = true, default_value = "gf(7)")]
    pub field: String,
    /// The prime p of the symbols and algebras.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Exhaustive search budget (points); defaults to KFORMS_BUDGET or 10^8.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Laurent series precision (retained terms).
    #[arg(long, global = true)]
    pub precision: Option<i64>,
    /// Add wall-clock timings to the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Field arithmetic and p-th power classes.
    #[command(subcommand)]
    Field(commands::FieldCmd),
    /// Forms: isotropy search, Chevalley-Warning counts, Pfister forms.
    #[command(subcommand)]
    Form(commands::FormCmd),
    /// Algebras from structure constants: reduced norm, division tests.
    #[command(subcommand)]
    Algebra(commands::AlgebraCmd),
    /// Symbol algebras D_(a,b).
    #[command(subcommand)]
    Symbolalg(commands::SymbolalgCmd),
    /// First Tits construction Albert algebras.
    #[command(subcommand)]
    Albert(commands::AlbertCmd),
    /// Mod-p Milnor symbols.
    #[command(subcommand)]
    Milnor(commands::MilnorCmd),
    /// Upper bounds for cd_p of C_n fields.
    #[command(subcommand)]
    Bounds(commands::BoundsCmd),
    /// Runs a fast version of every acceptance check.
    VerifyAll,
}

fn exit_code(e: &kforms::Error) -> u8 {
    match e {
        kforms::Error::IdentityFailed(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let g = &cli.global;
    let result: kforms::Result<Report> = match &cli.command {
        Command::Field(c) => commands::field(g, c),
        Command::Form(c) => commands::form(g, c),
        Command::Algebra(c) => commands::algebra(g, c),
        Command::Symbolalg(c) => commands::symbolalg(g, c),
        Command::Albert(c) => commands::albert(g, c),
        Command::Milnor(c) => commands::milnor(g, c),
        Command::Bounds(c) => commands::bounds(g, c),
        Command::VerifyAll => verify::verify_all(g),
    };
    let elapsed = g.timings.then(|| start.elapsed());
    match result {
        Ok(report) => {
            if g.json {
                println!("{}", serde_json::to_string_pretty(&report.to_json(elapsed)).expect("report serializes"));
            } else {
                print!("{}", report.render(elapsed));
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
