//! Observed order of the 2D solver against the shooting profile.
//!
//! `cargo run --release --example convergence_study`

use neumann_vortex::radial::{shoot, ShootOptions};
use neumann_vortex::taubes::{SolveOptions, TaubesSolution};
use neumann_vortex::verify::radial_deviation;
use neumann_vortex::{ConformalDisk, PolarGrid, VortexConfiguration};

fn main() -> neumann_vortex::Result<()> {
    let disk = ConformalDisk::euclidean(3.0)?;
    let config = VortexConfiguration::centered(&disk, 1)?;
    let profile = shoot(&disk, 1, &ShootOptions::default())?;
    let mut last: Option<f64> = None;
    for n in [32, 64, 128, 256, 512] {
        let grid = PolarGrid::new(&disk, n, 32)?;
        let sol = TaubesSolution::solve(&disk, &config, &grid, &SolveOptions::default())?;
        let err = radial_deviation(&sol, &profile);
        match last {
            Some(prev) => println!("nr = {n:>4}  error {err:.3e}  order {:.3}", (prev / err).log2()),
            None => println!("nr = {n:>4}  error {err:.3e}"),
        }
        last = Some(err);
    }
    Ok(())
}
