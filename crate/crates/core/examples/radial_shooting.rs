//! Shooting for the rotationally symmetric vortex on the flat disk of radius 3.
//!
//! `cargo run --release --example radial_shooting`

use std::f64::consts::PI;

use neumann_vortex::diagnostics::radial_integrals;
use neumann_vortex::radial::{shoot, ShootOptions};
use neumann_vortex::ConformalDisk;

fn main() -> neumann_vortex::Result<()> {
    let disk = ConformalDisk::euclidean(3.0)?;
    for n in [1, 2] {
        let profile = shoot(&disk, n, &ShootOptions::default())?;
        let (flux, energy) = radial_integrals(&profile);
        println!("n = {n}");
        println!("  h0              = {:.12}", profile.h0);
        println!("  h~'(R)          = {:.9}  (target {:.9})", profile.boundary_slope(), -2.0 * n as f64 / 3.0);
        println!("  flux / 2 pi n   = {:.9}", flux / (2.0 * PI * n as f64));
        println!("  energy / pi n   = {:.9}", energy / (PI * n as f64));
        println!("  max |phi|^2     = {:.9}", profile.max_phi_sq());
        print!("  |phi|^2 at r = 0.5, 1, 2, 3:");
        for r in [0.5, 1.0, 2.0, 3.0] {
            let (h, _) = profile.interpolate(r);
            print!(" {:.5}", (h + 2.0 * n as f64 * r.ln()).exp());
        }
        println!();
    }
    Ok(())
}
