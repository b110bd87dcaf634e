use clap::{Parser, Subcommand};
use plie_cli::{exit_code, run, Command};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "plie", version, about = "Poisson-Lie workbench for SL_n")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(clap::Args)]
struct Common {
    /// JSON experiment config (`"schema": 1`).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Threshold override `name=value`; repeatable.
    #[arg(long = "tol", value_name = "K=V")]
    tol: Vec<String>,
}

#[derive(Subcommand)]
enum Sub {
    /// Bialgebra axioms, Jacobi sampling and the invariant-bracket identities.
    Verify(Common),
    /// Leaf-dimension and Casimir atlas over all cells.
    Atlas(Common),
    /// Factorization flow against RK4, with conservation checks.
    Flow(Common),
    /// Action-angle chart along a flow.
    Aa(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Atlas(a) => (Command::Atlas, a),
        Sub::Flow(a) => (Command::Flow, a),
        Sub::Aa(a) => (Command::Aa, a),
    };
    match run(command, &args.config, &args.out, args.seed, &args.tol) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            for c in &report.checks {
                let residual = c.residual.map_or("-".to_string(), |r| format!("{r:.3e}"));
                let status = match c.status {
                    plie_cli::report::Status::Pass => "ok",
                    plie_cli::report::Status::Fail => "FAIL",
                    plie_cli::report::Status::Skipped => "skipped",
                };
                let _ = writeln!(stdout, "{:<28} {:>12} < {:<10.3e} {status}", c.name, residual, c.threshold);
            }
            let code = exit_code(&report);
            let _ = writeln!(stdout, "{}: {}", report.command, if code == 0 { "pass" } else { "fail" });
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("plie: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
