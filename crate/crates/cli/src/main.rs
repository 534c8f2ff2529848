use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;
mod report;
mod verify;

/// Contact invariants of Gorenstein toric contact manifolds.
///
/// Exit codes: 0 success, 1 malformed input, 2 validation failure,
/// 3 degenerate Reeb vector, 4 verification failure.
#[derive(Parser, Debug)]
#[command(name = "tcc", version, about, long_about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate a toric diagram (or cone normals) and print its Betti table.
    Diagram(DiagramArgs),
    /// Lens space data for weights (l0, ..., ln).
    Lens(LensArgs),
    /// Betti table of the unit cosphere bundle of L^3_p(q).
    Cosphere(CosphereArgs),
    /// Compare two weight vectors for the same p.
    Compare(CompareArgs),
    /// Re-run the built-in table of known values.
    VerifyPaper(VerifyArgs),
}

#[derive(Args, Debug)]
struct DiagramArgs {
    /// JSON file with {"vertices": [[..], ..]} or {"normals": [[..], ..]}.
    #[arg(long)]
    input: PathBuf,
    /// Even degree cap (default 2n+4).
    #[arg(long)]
    cap: Option<i64>,
    /// Base point of the Reeb vector, e.g. "1/3,1/5" (default: barycenter).
    #[arg(long, allow_hyphen_values = true)]
    base: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct LensArgs {
    #[arg(long)]
    p: u64,
    /// Comma separated weights, e.g. 1,1,1,1,2,-2,1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    weights: Vec<i64>,
    /// Contact Betti numbers sequence.
    #[arg(long)]
    cbs: bool,
    /// Per-class Betti numbers up to the cap.
    #[arg(long)]
    by_class: bool,
    /// Contact symmetry set and diffeomorphism-realizable units.
    #[arg(long)]
    symmetry: bool,
    /// The group ring element Delta.
    #[arg(long)]
    delta: bool,
    /// Even degree cap for --by-class (default 2n+4).
    #[arg(long)]
    cap: Option<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CosphereArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    /// Even degree cap (default 8).
    #[arg(long)]
    cap: Option<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    w1: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    w2: Vec<i64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    json: bool,
    /// Corrupt one expectation to exercise the failure path.
    #[arg(long, hide = true)]
    corrupt: bool,
}

fn configure_threads() {
    if let Some(n) = std::env::var("TCC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_MALFORMED } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::Diagram(a) => commands::diagram(&a.input, a.cap, a.base.as_deref(), a.json),
        Command::Lens(a) => commands::lens(&commands::LensRequest {
            p: a.p,
            weights: a.weights,
            cbs: a.cbs,
            by_class: a.by_class,
            symmetry: a.symmetry,
            delta: a.delta,
            cap: a.cap,
            json: a.json,
        }),
        Command::Cosphere(a) => commands::cosphere(a.p, a.q, a.cap, a.json),
        Command::Compare(a) => commands::compare(a.p, &a.w1, &a.w2, a.json),
        Command::VerifyPaper(a) => verify::run(a.json, a.corrupt),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
