//! Full-disk Newton solve of the centered vortex, checked against the shooting profile.
//!
//! `cargo run --release --example centered_vortex`

use neumann_vortex::diagnostics::ObservableSet;
use neumann_vortex::radial::{shoot, ShootOptions};
use neumann_vortex::taubes::{SolveOptions, TaubesSolution};
use neumann_vortex::verify::radial_deviation;
use neumann_vortex::{ConformalDisk, PolarGrid, VortexConfiguration};

fn main() -> neumann_vortex::Result<()> {
    let disk = ConformalDisk::euclidean(3.0)?;
    let config = VortexConfiguration::centered(&disk, 1)?;
    let profile = shoot(&disk, 1, &ShootOptions::default())?;

    println!("{:>9} {:>6} {:>14} {:>14} {:>14}", "grid", "steps", "flux/2pi - 1", "E/pi - 1", "vs radial");
    for n in [64, 128, 256] {
        let grid = PolarGrid::new(&disk, n, n)?;
        let sol = TaubesSolution::solve(&disk, &config, &grid, &SolveOptions::default())?;
        let obs = ObservableSet::compute(&sol);
        println!(
            "{:>9} {:>6} {:>14.3e} {:>14.3e} {:>14.3e}",
            format!("{n}x{n}"),
            sol.report.iterations,
            obs.flux / obs.expected_flux - 1.0,
            obs.energy / obs.expected_energy - 1.0,
            radial_deviation(&sol, &profile),
        );
    }
    Ok(())
}
