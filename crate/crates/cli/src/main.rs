//! `subspace`: command-line front end for subspace code computations.

mod cmd;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subspace_core::Error;

use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "subspace", version, about = "Binary subspace codes: construction, verification, bounds and models")]
struct Cli {
    /// Emit machine-readable CSV instead of the text report.
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    /// Emit a JSON report (schema 1).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subspace distance between two subspaces.
    Distance(cmd::code::DistanceArgs),
    /// Check minimum distance and dimensions of a code file.
    Verify(cmd::code::VerifyArgs),
    /// Isomorphism invariants of a code file.
    Fingerprint(cmd::code::FingerprintArgs),
    /// Build codes from rank-metric and spread constructions.
    #[command(subcommand)]
    Construct(cmd::construct::ConstructCmd),
    /// Tables of known bounds on code sizes.
    #[command(subcommand)]
    Bounds(cmd::bounds::BoundsCmd),
    /// Matrix groups and their action on subspaces.
    #[command(subcommand)]
    Group(cmd::group::GroupCmd),
    /// Integer programming models and the exact solver.
    #[command(subcommand)]
    Ilp(cmd::ilp::IlpCmd),
    /// Divisible point multisets.
    #[command(subcommand)]
    Divis(cmd::divis::DivisCmd),
}

/// Shared `--out` option for commands producing a code.
#[derive(Args, Debug, Clone)]
pub struct OutArg {
    /// Write the resulting code to this file.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("SUBSPACE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("SUBSPACE_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> subspace_core::Result<Report> {
    match cli.command {
        Command::Distance(a) => cmd::code::distance(a),
        Command::Verify(a) => cmd::code::verify(a),
        Command::Fingerprint(a) => cmd::code::fingerprint(a),
        Command::Construct(c) => cmd::construct::run(c),
        Command::Bounds(c) => cmd::bounds::run(c),
        Command::Group(c) => cmd::group::run(c),
        Command::Ilp(c) => cmd::ilp::run(c),
        Command::Divis(c) => cmd::divis::run(c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    match run(cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = report.render(format, &mut out).and_then(|_| out.flush()) {
                eprintln!("error: writing report: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(u8::from(report.failed()))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Precondition(_) => 1,
                _ => 2,
            })
        }
    }
}
