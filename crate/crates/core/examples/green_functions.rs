//! Discrete Neumann Green functions: symmetry and logarithmic singularities.
//!
//! `cargo run --release --example green_functions`

use std::f64::consts::PI;

use neumann_vortex::green::{boundary_log_slope, boundary_neumann_green, interior_log_slope, neumann_green};
use neumann_vortex::{ConformalDisk, PolarGrid};

fn main() -> neumann_vortex::Result<()> {
    let disk = ConformalDisk::euclidean(3.0)?;
    let grid = PolarGrid::new(&disk, 256, 256)?;

    let p = (32, 1);
    let q = (192, 85);
    let gp = neumann_green(&disk, &grid, p)?;
    let gq = neumann_green(&disk, &grid, q)?;
    println!("G_P(Q) = {:.15}", gp.at(q.0, q.1));
    println!("G_Q(P) = {:.15}", gq.at(p.0, p.1));

    let g0 = neumann_green(&disk, &grid, (0, 0))?;
    let s = interior_log_slope(&g0, (0, 0));
    println!("interior slope {s:.6}  vs -1/(2 pi) = {:.6}", -1.0 / (2.0 * PI));

    let h = boundary_neumann_green(&disk, &grid, 0.0)?;
    let s = boundary_log_slope(&h, 0);
    println!("boundary slope {s:.6}  vs -1/pi     = {:.6}", -1.0 / PI);
    Ok(())
}
