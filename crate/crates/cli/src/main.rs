use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mixphase_cli::scenario::{Format, Kind, Overrides};
use mixphase_cli::{execute, Run};

#[derive(Parser)]
#[command(name = "mixphase", version, about = "Off-diagonal phases of mixed states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form qubit traces over an (eta, alpha, lambda1) grid
    QubitScan(Flags),
    /// Orthogonal family tables for permuting, diagonal or transported unitaries
    Families(Flags),
    /// Simulated two-photon fringes and extracted inner products
    TwoPhoton(Flags),
    /// Run the invariant suite; exits 1 if any check fails
    Verify(Flags),
    /// Run a scenario file of any kind
    Run(Flags),
}

#[derive(clap::Args)]
struct Flags {
    /// Scenario file (JSON)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Indeterminacy threshold on |trace|
    #[arg(long)]
    tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = match cli.command {
        Command::QubitScan(f) => (Some(Kind::QubitScan), f),
        Command::Families(f) => (Some(Kind::Families), f),
        Command::TwoPhoton(f) => (Some(Kind::TwoPhoton), f),
        Command::Verify(f) => (Some(Kind::Verify), f),
        Command::Run(f) => (None, f),
    };
    let overrides = Overrides {
        out: flags.out,
        format: flags.format,
        seed: flags.seed,
        steps: flags.steps,
        tol: flags.tol,
    };
    let run: Run = match execute(kind, flags.config.as_deref(), &overrides).and_then(|run| run.emit().map(|_| run)) {
        Ok(run) => run,
        Err(e) => {
            eprintln!("mixphase: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if run.report.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("mixphase: {} reported failed checks", run.report.kind.name());
        ExitCode::from(1)
    }
}
