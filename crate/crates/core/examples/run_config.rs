//! Drive the command layer from code: run a command on a JSON configuration
//! and list the files it wrote.
//!
//! `cargo run --release --example run_config -- <command> <config.json> [out-dir]`
//! where `<command>` is one of `check`, `solve-radial`, `solve-2d`, `metric`, `verify`.

use std::path::PathBuf;
use std::process::ExitCode;

use neumann_vortex::config::RunConfig;
use neumann_vortex::runner::{run, Command};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let command = match args.first().map(String::as_str) {
        Some("check") => Command::Check,
        Some("solve-radial") => Command::SolveRadial,
        Some("solve-2d") => Command::Solve2d,
        Some("metric") => Command::Metric,
        Some("verify") => Command::Verify,
        _ => {
            eprintln!("usage: run_config <check|solve-radial|solve-2d|metric|verify> <config.json> [out-dir]");
            return ExitCode::from(1);
        }
    };
    let path = args.get(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/centered.json"))
    });
    let cfg = match RunConfig::from_path(&path).and_then(|c| c.with_overrides(None, None, None, args.get(2).map(PathBuf::from))) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    let outcome = run(command, &cfg);
    print!("{}", outcome.stdout);
    if !outcome.stderr.is_empty() {
        eprintln!("{}", outcome.stderr);
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    ExitCode::from(outcome.code as u8)
}
