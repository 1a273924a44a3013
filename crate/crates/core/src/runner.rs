//! Command implementations behind the `nv` binary.
//!
//! Every command returns an [`Outcome`] carrying the process exit code, the
//! text for standard output, and the files it wrote under `outputs.dir`.

use std::path::PathBuf;

use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::diagnostics::{
    export, field_csv, profile_csv, ObservableSet, RadialSummary, SolveSummary, SCHEMA_VERSION,
};
use crate::error::Error;
use crate::geometry::{bradlow_margin, check_bradlow, VortexConfiguration};
use crate::moduli::{metric_coefficient, MetricOptions};
use crate::radial::shoot;
use crate::taubes::TaubesSolution;
use crate::verify::{gate_only, table, CheckResult, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BRADLOW: i32 = 2;
pub const EXIT_BRACKET: i32 = 3;
pub const EXIT_NEWTON: i32 = 4;
pub const EXIT_METRIC: i32 = 5;
pub const EXIT_VERIFY: i32 = 6;

pub const PROFILE_FILE: &str = "profile.csv";
pub const FIELD_FILE: &str = "field.csv";
pub const REPORT_FILE: &str = "report.json";
pub const METRIC_FILE: &str = "metric.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    SolveRadial,
    Solve2d,
    Metric,
    Verify,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    /// Diagnostic for standard error; empty on success.
    pub stderr: String,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn ok(stdout: String, files: Vec<PathBuf>) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
            files,
        }
    }

    fn fail(code: i32, err: impl std::fmt::Display) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("error: {err}"),
            files: Vec::new(),
        }
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> Outcome {
    match command {
        Command::Check => cmd_check(cfg),
        Command::SolveRadial => cmd_solve_radial(cfg),
        Command::Solve2d => cmd_solve_2d(cfg),
        Command::Metric => cmd_metric(cfg),
        Command::Verify => cmd_verify(cfg),
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Gate errors keep their own code; everything else maps to `fallback`.
fn code_for(err: &Error, fallback: i32) -> i32 {
    match err {
        Error::Bradlow { .. } => EXIT_BRADLOW,
        Error::Config(_) | Error::InvalidConfiguration(_) | Error::InvalidDomain(_) | Error::GridTooCoarse { .. } => {
            EXIT_CONFIG
        }
        _ => fallback,
    }
}

fn write_outputs(cfg: &RunConfig, files: Vec<(&str, String, Format)>) -> Result<Vec<PathBuf>, Error> {
    let selected: Vec<(&str, String)> = files
        .into_iter()
        .filter(|(_, _, f)| cfg.outputs.wants(*f))
        .map(|(n, c, _)| (n, c))
        .collect();
    if selected.is_empty() {
        return Ok(Vec::new());
    }
    export(&cfg.outputs.dir, &selected)
}

/// A configuration holding exactly one interior vortex at the origin; returns its multiplicity.
fn centered_multiplicity(config: &VortexConfiguration) -> Option<u32> {
    match config.interior() {
        [v] if config.boundary().is_empty() && v.position.norm() == 0.0 => Some(v.multiplicity),
        _ => None,
    }
}

#[derive(Serialize)]
struct CheckReport {
    schema_version: u32,
    command: &'static str,
    radius: f64,
    area: f64,
    interior_count: u32,
    boundary_count: u32,
    margin: f64,
    admissible: bool,
}

pub fn cmd_check(cfg: &RunConfig) -> Outcome {
    let (disk, config) = match cfg.disk().and_then(|d| Ok((d, cfg.configuration()?))) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(EXIT_CONFIG, e),
    };
    let margin = bradlow_margin(&config, &disk);
    let admissible = check_bradlow(&config, &disk).is_ok();
    let report = CheckReport {
        schema_version: SCHEMA_VERSION,
        command: "check",
        radius: disk.radius(),
        area: disk.area(),
        interior_count: config.interior_count(),
        boundary_count: config.boundary_count(),
        margin,
        admissible,
    };
    let mut out = Outcome::ok(pretty(&report), Vec::new());
    if !admissible {
        out.code = EXIT_BRADLOW;
        out.stderr = format!("error: Bradlow bound violated (margin {margin})");
    }
    out
}

pub fn cmd_solve_radial(cfg: &RunConfig) -> Outcome {
    let (disk, config) = match cfg.disk().and_then(|d| Ok((d, cfg.configuration()?))) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(EXIT_CONFIG, e),
    };
    let Some(n) = centered_multiplicity(&config) else {
        return Outcome::fail(
            EXIT_CONFIG,
            "solve-radial needs a single interior vortex at the origin and no boundary vortices",
        );
    };
    let profile = match shoot(&disk, n, &cfg.shoot_options()) {
        Ok(p) => p,
        Err(e) => return Outcome::fail(code_for(&e, EXIT_BRACKET), e),
    };
    let summary = RadialSummary::new(&profile, &disk);
    let report = pretty(&summary);
    let files = vec![
        (PROFILE_FILE, profile_csv(&profile, cfg.shooting.csv_rows), Format::Csv),
        (REPORT_FILE, report.clone(), Format::Json),
    ];
    match write_outputs(cfg, files) {
        Ok(written) => Outcome::ok(report, written),
        Err(e) => Outcome::fail(EXIT_CONFIG, e),
    }
}

pub fn cmd_solve_2d(cfg: &RunConfig) -> Outcome {
    let loaded = cfg
        .disk()
        .and_then(|d| Ok((cfg.configuration()?, cfg.polar_grid()?, d)));
    let (config, grid, disk) = match loaded {
        Ok(v) => v,
        Err(e) => return Outcome::fail(EXIT_CONFIG, e),
    };
    let sol = match TaubesSolution::solve(&disk, &config, &grid, &cfg.solve_options()) {
        Ok(s) => s,
        Err(e) => return Outcome::fail(code_for(&e, EXIT_NEWTON), e),
    };
    let obs = ObservableSet::compute(&sol);
    let report = pretty(&SolveSummary::new(&sol, &obs));
    if !sol.report.converged {
        let mut out = Outcome::fail(
            EXIT_NEWTON,
            format!(
                "Newton iteration stopped after {} iterations at residual {:e} (tol {:e})",
                sol.report.iterations,
                sol.report.final_residual(),
                cfg.solver.tol
            ),
        );
        out.stdout = report.clone();
        if let Ok(w) = write_outputs(cfg, vec![(REPORT_FILE, report, Format::Json)]) {
            out.files = w;
        }
        return out;
    }
    let files = vec![
        (FIELD_FILE, field_csv(&sol, &obs), Format::Csv),
        (REPORT_FILE, report.clone(), Format::Json),
    ];
    match write_outputs(cfg, files) {
        Ok(written) => Outcome::ok(report, written),
        Err(e) => Outcome::fail(EXIT_CONFIG, e),
    }
}

pub fn cmd_metric(cfg: &RunConfig) -> Outcome {
    let loaded = cfg
        .disk()
        .and_then(|d| Ok((cfg.configuration()?, cfg.polar_grid()?, d)));
    let (config, grid, disk) = match loaded {
        Ok(v) => v,
        Err(e) => return Outcome::fail(EXIT_CONFIG, e),
    };
    if centered_multiplicity(&config) != Some(1) {
        return Outcome::fail(
            EXIT_CONFIG,
            "metric needs a single unit vortex at the origin and no boundary vortices",
        );
    }
    let opts = MetricOptions {
        delta: cfg.metric.delta,
        solve: cfg.solve_options(),
        shoot: cfg.shoot_options(),
    };
    let report = match metric_coefficient(&disk, &grid, &opts) {
        Ok(r) => pretty(&r),
        Err(e) => return Outcome::fail(code_for(&e, EXIT_METRIC), e),
    };
    match write_outputs(cfg, vec![(METRIC_FILE, report.clone(), Format::Json)]) {
        Ok(written) => Outcome::ok(report, written),
        Err(e) => Outcome::fail(EXIT_CONFIG, e),
    }
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema_version: u32,
    command: &'static str,
    nr: usize,
    ntheta: usize,
    passed: bool,
    checks: &'a [CheckResult],
}

pub fn cmd_verify(cfg: &RunConfig) -> Outcome {
    let (disk, config) = match cfg.disk().and_then(|d| Ok((d, cfg.configuration()?))) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(EXIT_CONFIG, e),
    };
    let (nr, ntheta) = (cfg.grid.nr, cfg.grid.ntheta);
    let results = if check_bradlow(&config, &disk).is_err() {
        vec![gate_only(&config, &disk)]
    } else {
        let suite = match Suite::with_options(nr, ntheta, cfg.solve_options(), cfg.shoot_options()) {
            Ok(s) => s,
            Err(e) => return Outcome::fail(EXIT_CONFIG, e),
        };
        suite.run_all()
    };
    let passed = results.iter().all(|r| r.passed);
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        nr,
        ntheta,
        passed,
        checks: &results,
    };
    let mut out = Outcome::ok(table(&results), Vec::new());
    match write_outputs(cfg, vec![(REPORT_FILE, pretty(&report), Format::Json)]) {
        Ok(w) => out.files = w,
        Err(e) => return Outcome::fail(EXIT_CONFIG, e),
    }
    if !passed {
        out.code = EXIT_VERIFY;
        out.stderr = "error: verification failed".into();
    }
    out
}
