//! Metric data of a unit vortex at the center of the flat disk.
//!
//! `cargo run --release --example moduli_metric [n]` with grid size `n` (default 128).

use neumann_vortex::moduli::{metric_coefficient, solve_linearized_with, MetricOptions};
use neumann_vortex::{ConformalDisk, PolarGrid};

fn main() -> neumann_vortex::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(128);
    let disk = ConformalDisk::euclidean(3.0)?;

    let vacuum = solve_linearized_with(3.0, |_| 0.0, 100_000)?;
    println!("without vortex: a(R) - 2/R = {:.10} (closed form -4/R = {:.10})", vacuum.boundary_value, -4.0 / 3.0);

    let grid = PolarGrid::new(&disk, n, n)?;
    let rep = metric_coefficient(&disk, &grid, &MetricOptions::default())?;
    println!("h0                        {:.12}", rep.h0);
    println!("d_X h(R; 0)               {:.12}", rep.boundary_value);
    println!("boundary term (pi/2) v^2  {:.10}", rep.boundary_term);
    println!("loop integral             {:.10} (closed form {:.10})", rep.boundary_quadrature.integral, rep.loop_closed_form);
    println!("b(0)                      {:.3e}", rep.samols_b.norm());
    println!("db/dZ                     {:.8} (half step {:.8}, Richardson {:.8})", rep.db_dz, rep.db_dz_half, rep.db_dz_richardson);
    println!("db/dZ from linearization  {:.8}", rep.db_dz_linearized);
    println!("local term                {:.8}", rep.local_term);
    println!("total coefficient         {:.8}", rep.total_coefficient);
    Ok(())
}
