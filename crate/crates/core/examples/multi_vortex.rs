//! Several vortices on a large disk, loaded from a JSON configuration.
//!
//! `cargo run --release --example multi_vortex [config.json]`

use std::path::PathBuf;

use neumann_vortex::config::RunConfig;
use neumann_vortex::diagnostics::ObservableSet;
use neumann_vortex::taubes::TaubesSolution;

fn main() -> neumann_vortex::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/multi.json")));
    let cfg = RunConfig::from_path(&path)?;
    let disk = cfg.disk()?;
    let config = cfg.configuration()?;
    let grid = cfg.polar_grid()?;

    let sol = TaubesSolution::solve(&disk, &config, &grid, &cfg.solve_options())?;
    let obs = ObservableSet::compute(&sol);
    println!("{} interior + {} boundary vortices on R = {}", config.interior_count(), config.boundary_count(), disk.radius());
    println!("Newton residuals: {:?}", sol.report.residual_history);
    println!("flux   {:.10} (expected {:.10})", obs.flux, obs.expected_flux);
    println!("energy {:.10} (expected {:.10})", obs.energy, obs.expected_energy);

    // |phi|^2 near each interior core should vanish.
    for v in config.interior() {
        let z = v.position;
        let i = ((z.norm() / grid.dr()) as usize).min(grid.nr() - 1);
        let j = ((z.arg().rem_euclid(std::f64::consts::TAU) / grid.dtheta()) as usize) % grid.ntheta();
        println!("|phi|^2 near {z}: {:.4}", sol.h().at(i, j).exp());
    }
    Ok(())
}
