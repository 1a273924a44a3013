//! A cap of the sphere of radius 2: the disk of radius 2 with `Omega = 16 / (1 + r^2)^2`.
//!
//! `cargo run --release --example curved_disk`

use std::f64::consts::PI;

use neumann_vortex::diagnostics::{radial_integrals, ObservableSet};
use neumann_vortex::radial::{shoot, ShootOptions};
use neumann_vortex::taubes::{SolveOptions, TaubesSolution};
use neumann_vortex::verify::radial_deviation;
use neumann_vortex::{bradlow_margin, ConformalDisk, PolarGrid, VortexConfiguration};

fn main() -> neumann_vortex::Result<()> {
    let disk = ConformalDisk::from_profile(2.0, |r| 16.0 / (1.0 + r * r).powi(2))?;
    // Area of the cap: 16 pi R^2 / (1 + R^2).
    println!("area = {:.10} (closed form {:.10})", disk.area(), 16.0 * PI * 4.0 / 5.0);

    let config = VortexConfiguration::centered(&disk, 1)?;
    println!("margin = {:.6}", bradlow_margin(&config, &disk));

    let profile = shoot(&disk, 1, &ShootOptions::default())?;
    let (flux, energy) = radial_integrals(&profile);
    println!("shooting: h0 = {:.10}, flux/2pi = {:.8}, energy/pi = {:.8}", profile.h0, flux / (2.0 * PI), energy / PI);

    let grid = PolarGrid::new(&disk, 128, 128)?;
    let sol = TaubesSolution::solve(&disk, &config, &grid, &SolveOptions::default())?;
    let obs = ObservableSet::compute(&sol);
    println!(
        "2D: flux/2pi = {:.8}, energy/pi = {:.8}, max |h~_2D - h~_radial| = {:.2e}",
        obs.flux / (2.0 * PI),
        obs.energy / PI,
        radial_deviation(&sol, &profile)
    );
    Ok(())
}
