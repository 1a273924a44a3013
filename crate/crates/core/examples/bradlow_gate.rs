//! Area-bound margins for a few configurations, and what the solver does with them.
//!
//! `cargo run --release --example bradlow_gate`

use neumann_vortex::taubes::{SolveOptions, TaubesSolution};
use neumann_vortex::{bradlow_margin, Complex64, ConformalDisk, Error, PolarGrid, VortexConfiguration};

type Case = (&'static str, f64, Vec<(Complex64, u32)>, Vec<(f64, u32)>);

fn main() -> neumann_vortex::Result<()> {
    let cases: [Case; 5] = [
        ("one centered vortex, R = 3", 3.0, vec![(Complex64::new(0.0, 0.0), 1)], vec![]),
        ("double vortex, R = 3", 3.0, vec![(Complex64::new(0.0, 0.0), 2)], vec![]),
        ("triple vortex, R = 3", 3.0, vec![(Complex64::new(0.0, 0.0), 3)], vec![]),
        ("two interior + one boundary, R = 3.5", 3.5, vec![(Complex64::new(1.0, 0.0), 1), (Complex64::new(-1.0, 0.5), 1)], vec![(0.0, 1)]),
        ("one vortex, R = 1", 1.0, vec![(Complex64::new(0.0, 0.0), 1)], vec![]),
    ];

    println!("{:<38} {:>8} {:>10}  outcome", "configuration", "margin", "A/4pi");
    for (label, radius, interior, boundary) in cases {
        let disk = ConformalDisk::euclidean(radius)?;
        let config = VortexConfiguration::new(&disk, interior, boundary)?;
        let grid = PolarGrid::new(&disk, 64, 64)?;
        let outcome = match TaubesSolution::solve(&disk, &config, &grid, &SolveOptions::default()) {
            Ok(sol) => format!("solved in {} Newton steps", sol.report.iterations),
            Err(Error::Bradlow { margin }) => format!("refused (margin {margin})"),
            Err(e) => format!("error: {e}"),
        };
        println!(
            "{label:<38} {:>8.4} {:>10.4}  {outcome}",
            bradlow_margin(&config, &disk),
            disk.area_over_four_pi()
        );
    }
    Ok(())
}
