//! Property tests over randomly drawn configurations on small grids.

use std::f64::consts::{PI, TAU};

use neumann_vortex::diagnostics::ObservableSet;
use neumann_vortex::green::neumann_green;
use neumann_vortex::radial::{mismatch, shoot, ShootOptions};
use neumann_vortex::singular::SingularPart;
use neumann_vortex::taubes::{SolveOptions, TaubesSolution};
use neumann_vortex::{bradlow_margin, Complex64, ConformalDisk, PolarGrid, VortexConfiguration};
use proptest::prelude::*;

const NR: usize = 24;
const NT: usize = 32;

/// Interior vortices as (fraction of R, angle, multiplicity) and boundary ones as (angle, multiplicity).
type Draw = (f64, Vec<(f64, f64, u32)>, Vec<(f64, u32)>);

fn draws() -> impl Strategy<Value = Draw> {
    (
        3.0f64..6.0,
        prop::collection::vec((0.0f64..0.85, 0.0f64..TAU, 1u32..3), 0..3),
        prop::collection::vec((0.0f64..TAU, 1u32..3), 0..2),
    )
        .prop_filter("needs at least one vortex", |(_, i, b)| !i.is_empty() || !b.is_empty())
}

fn build((radius, interior, boundary): &Draw) -> (ConformalDisk, VortexConfiguration) {
    let disk = ConformalDisk::euclidean(*radius).unwrap();
    let config = VortexConfiguration::new(
        &disk,
        interior.iter().map(|&(s, t, n)| (Complex64::from_polar(s * radius, t), n)),
        boundary.iter().copied(),
    )
    .unwrap();
    (disk, config)
}

fn max_diff(a: impl Iterator<Item = (f64, f64)>) -> f64 {
    a.map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn converged_solves_obey_field_bounds_and_conservation(draw in draws()) {
        let (disk, config) = build(&draw);
        prop_assume!(bradlow_margin(&config, &disk) > 0.1);
        // B is O(1e-5) far from a vortex on the larger disks; the grid must resolve that.
        let grid = PolarGrid::new(&disk, 2 * NR, 2 * NT).unwrap();
        let sol = TaubesSolution::solve(&disk, &config, &grid, &SolveOptions::default()).unwrap();
        prop_assert!(sol.report.converged);
        prop_assert!(sol.report.final_residual() <= 1e-8);
        let hist = &sol.report.residual_history;
        prop_assert!(hist.windows(2).skip(1).all(|w| w[1] < w[0]), "{hist:?}");
        prop_assert!(sol.htilde.values().iter().all(|v| v.is_finite()));

        let obs = ObservableSet::compute(&sol);
        let bmax = obs.magnetic_field.values().iter().copied().fold(f64::MIN, f64::max);
        let bmin = obs.magnetic_field.values().iter().copied().fold(f64::MAX, f64::min);
        prop_assert!(bmin >= 0.0 && bmax <= 0.5 + 1e-6, "B in [{bmin}, {bmax}]");
        // Summing the pointwise residual against cell volumes gives the flux balance exactly.
        let area = grid.discrete_area(&disk);
        let bound = sol.report.final_residual() * area + 1e-12 * obs.flux;
        prop_assert!(obs.bc_residual <= bound, "flux balance {} > {bound}", obs.bc_residual);
        prop_assert!(obs.bc_residual <= 1e-8 * area);
        // Flux equals half the discrete boundary integral of the Neumann data.
        let boundary = -0.5 * sol.singular.neumann_data().iter().sum::<f64>() * disk.radius() * grid.dtheta();
        prop_assert!((obs.flux - boundary).abs() <= 0.5 * bound, "{} vs {boundary}", obs.flux);
    }

    #[test]
    fn rotation_by_grid_angles_permutes_the_solution(draw in draws(), k in 1usize..NT) {
        let (disk, config) = build(&draw);
        prop_assume!(bradlow_margin(&config, &disk) > 0.1);
        let grid = PolarGrid::new(&disk, NR, NT).unwrap();
        let opts = SolveOptions::default();
        let a = TaubesSolution::solve(&disk, &config, &grid, &opts).unwrap();
        let b = TaubesSolution::solve(&disk, &config.rotated(k as f64 * grid.dtheta()), &grid, &opts).unwrap();
        let defect = max_diff((0..NR).flat_map(|i| (0..NT).map(move |j| (i, j)))
            .map(|(i, j)| (b.htilde.at(i, (j + k) % NT), a.htilde.at(i, j))));
        prop_assert!(defect <= 1e-9, "defect {defect}");
    }

    #[test]
    fn reflection_symmetric_configurations_give_symmetric_fields(
        radius in 3.0f64..6.0,
        s in 0.1f64..0.8,
        t in 0.1f64..3.0,
        on_axis in prop::bool::ANY,
        boundary_at_pi in prop::bool::ANY,
    ) {
        let disk = ConformalDisk::euclidean(radius).unwrap();
        let z = Complex64::from_polar(s * radius, t);
        let mut interior = vec![(z, 1), (z.conj(), 1)];
        if on_axis {
            interior.push((Complex64::new(-0.5 * radius, 0.0), 1));
        }
        let boundary = if boundary_at_pi { vec![(PI, 1)] } else { vec![] };
        let config = VortexConfiguration::new(&disk, interior, boundary).unwrap();
        prop_assume!(bradlow_margin(&config, &disk) > 0.1);
        let grid = PolarGrid::new(&disk, NR, NT).unwrap();
        let sol = TaubesSolution::solve(&disk, &config, &grid, &SolveOptions::default()).unwrap();
        let defect = max_diff((0..NR).flat_map(|i| (0..NT).map(move |j| (i, j)))
            .map(|(i, j)| (sol.htilde.at(i, j), sol.htilde.at(i, (NT - j) % NT))));
        prop_assert!(defect <= 1e-9, "defect {defect}");
    }

    #[test]
    fn singular_flux_matches_vortex_count(draw in draws()) {
        let (disk, config) = build(&draw);
        let grid = PolarGrid::new(&disk, 8, 4096).unwrap();
        let sp = SingularPart::build(&config, &disk, &grid);
        let r = disk.radius();
        // Neumann data is g = -d_r v0 on the circle; its integral is -(4 pi N + 2 pi M).
        let total: f64 = sp.neumann_data().iter().sum::<f64>() * r * grid.dtheta();
        let expected = 4.0 * PI * config.interior_count() as f64 + 2.0 * PI * config.boundary_count() as f64;
        prop_assert!((total + expected).abs() <= 1e-6 * expected, "{total} vs -{expected}");
    }

    #[test]
    fn green_functions_are_symmetric(
        p in (0usize..NR, 0usize..NT),
        q in (0usize..NR, 0usize..NT),
        radius in 1.0f64..6.0,
    ) {
        let disk = ConformalDisk::euclidean(radius).unwrap();
        let grid = PolarGrid::new(&disk, NR, NT).unwrap();
        let gp = neumann_green(&disk, &grid, p).unwrap();
        let gq = neumann_green(&disk, &grid, q).unwrap();
        prop_assert!((gp.at(q.0, q.1) - gq.at(p.0, p.1)).abs() <= 1e-10);
    }

    #[test]
    fn refinement_halves_spacings(radius in 0.5f64..20.0, nr in 8usize..200, nt in 8usize..200) {
        let disk = ConformalDisk::euclidean(radius).unwrap();
        let g = PolarGrid::new(&disk, nr, nt).unwrap();
        let f = g.refined();
        prop_assert_eq!(f.dr(), 0.5 * g.dr());
        prop_assert_eq!(f.dtheta(), 0.5 * g.dtheta());
        prop_assert_eq!(f.len(), 4 * g.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn shooting_mismatch_is_monotone_and_profiles_bounded(radius in 2.2f64..8.0, n in 1u32..3) {
        let disk = ConformalDisk::euclidean(radius).unwrap();
        prop_assume!(bradlow_margin(&VortexConfiguration::centered(&disk, n).unwrap(), &disk) > 0.05);
        let opts = ShootOptions { steps: 20_000, ..ShootOptions::default() };
        let scan: Vec<f64> = (0..20)
            .map(|k| opts.scan_lo + (opts.scan_hi - opts.scan_lo) * k as f64 / 19.0)
            .map(|h0| mismatch(h0, &disk, n, &opts).unwrap())
            .collect();
        prop_assert!(scan.windows(2).all(|w| w[1] >= w[0]), "{scan:?}");
        let profile = shoot(&disk, n, &opts).unwrap();
        prop_assert!(profile.converged);
        prop_assert!(profile.max_phi_sq() <= 1.0 + 1e-6);
    }
}
