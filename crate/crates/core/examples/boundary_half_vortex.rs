//! A vortex sitting on the boundary circle carries half the flux and energy
//! of an interior one, and its energy density peaks inside the disk.
//!
//! `cargo run --release --example boundary_half_vortex`

use std::f64::consts::PI;

use neumann_vortex::diagnostics::ObservableSet;
use neumann_vortex::taubes::{SolveOptions, TaubesSolution};
use neumann_vortex::{ConformalDisk, PolarGrid, VortexConfiguration};

fn main() -> neumann_vortex::Result<()> {
    let disk = ConformalDisk::euclidean(3.0)?;
    let grid = PolarGrid::new(&disk, 256, 256)?;
    let config = VortexConfiguration::on_boundary(&disk, 0.0, 1)?;
    let sol = TaubesSolution::solve(&disk, &config, &grid, &SolveOptions::default())?;
    let obs = ObservableSet::compute(&sol);

    println!("flux   = {:.8}  (pi   = {:.8})", obs.flux, PI);
    println!("energy = {:.8}  (pi/2 = {:.8})", obs.energy, PI / 2.0);

    let (i, j) = obs.energy_density.argmax();
    println!(
        "energy density peaks at r = {:.4}, theta = {:.4} (boundary at r = {})",
        grid.r(i),
        grid.theta(j),
        grid.radius()
    );
    println!("along theta = 0:");
    for i in (0..grid.nr()).step_by(16).chain([grid.nr() - 1]) {
        println!(
            "  r = {:.3}  |phi|^2 = {:.5}  B = {:.5}  energy density = {:.5}",
            grid.r(i),
            sol.h().at(i, 0).exp(),
            obs.magnetic_field.at(i, 0),
            obs.energy_density.at(i, 0)
        );
    }
    Ok(())
}
