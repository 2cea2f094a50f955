//! `cesaro`: evaluate, compare and stress-test utility streams.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on bad
//! input (malformed specs, bound violations, unknown ids).

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cesaro",
    version,
    about = "Cesàro-type welfare criteria for infinite utility streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partial means, Cesàro average, discounted values and W1..W4 per stream.
    Eval(commands::EvalArgs),
    /// Compare every pair of input streams (in input order).
    Compare(commands::CompareArgs),
    /// Run axiom checks against a rule.
    Axioms(commands::AxiomsArgs),
    /// Abel identity residuals and sandwich inequalities.
    IdentityCheck(commands::IdentityArgs),
    /// Seeded counterexample search.
    Search(commands::SearchArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => commands::eval(args),
        Command::Compare(args) => commands::compare(args),
        Command::Axioms(args) => commands::axioms(args),
        Command::IdentityCheck(args) => commands::identity_check(args),
        Command::Search(args) => commands::search(args),
    };
    match result {
        Ok(status) => status.into(),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
