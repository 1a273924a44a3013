use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use neumann_vortex::config::RunConfig;
use neumann_vortex::runner::{run, Command, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "nv", version, about = "BPS vortices with Neumann boundary conditions on a disk")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the area bound for the configured vortices.
    Check(Args),
    /// Shoot for a vortex centered at the origin.
    SolveRadial(Args),
    /// Newton solve on the polar grid, with diagnostics and export.
    #[command(name = "solve-2d")]
    Solve2d(Args),
    /// Moduli metric data for a unit vortex at the origin.
    Metric(Args),
    /// Run the verification suite at the configured resolution.
    Verify(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    nr: Option<usize>,
    #[arg(long)]
    ntheta: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let (command, args) = match cli.command {
        Cmd::Check(a) => (Command::Check, a),
        Cmd::SolveRadial(a) => (Command::SolveRadial, a),
        Cmd::Solve2d(a) => (Command::Solve2d, a),
        Cmd::Metric(a) => (Command::Metric, a),
        Cmd::Verify(a) => (Command::Verify, a),
    };

    if let Some(n) = std::env::var("NV_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }

    let Some(path) = args.config else {
        eprintln!("error: --config <PATH> is required");
        return ExitCode::from(EXIT_CONFIG as u8);
    };
    let cfg = RunConfig::from_path(&path).and_then(|c| {
        c.with_overrides(args.nr, args.ntheta, args.tol, args.out)
    });
    let cfg = match cfg {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };

    let outcome = run(command, &cfg);
    print!("{}", outcome.stdout);
    if !outcome.stderr.is_empty() {
        eprintln!("{}", outcome.stderr);
    }
    ExitCode::from(outcome.code as u8)
}
