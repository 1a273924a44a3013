//! Gauge-invariant observables of a solved configuration and their export.
//!
//! On a solution, `B = (1 - e^h) / 2` and the energy density reduces to
//! `B^2 + e^h |grad h|_g^2 / 4` with `|grad h|_g^2 = |grad_e h|^2 / Omega`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{bradlow_margin, ConformalDisk, PolarGrid, ScalarField};
use crate::radial::RadialProfile;
use crate::singular::SingularPart;
use crate::taubes::{SolveReport, TaubesSolution};

pub const SCHEMA_VERSION: u32 = 1;
pub const FIELD_COLUMNS: [&str; 9] = [
    "r", "theta", "x", "y", "htilde", "h", "exp_h", "B", "energy_density",
];
pub const PROFILE_COLUMNS: [&str; 6] = ["r", "htilde", "dhtilde", "phi_sq", "B", "energy_density"];

/// `B = (1 - e^h) / 2`; exactly `1/2` where `e^h` underflows.
pub fn magnetic_field(h: &ScalarField) -> ScalarField {
    h.map(|v| 0.5 * (1.0 - v.exp()))
}

/// Midpoint quadrature `sum B Omega r dr dtheta`.
pub fn total_flux(b: &ScalarField, disk: &ConformalDisk) -> f64 {
    b.integrate(disk)
}

/// Euclidean gradient of a grid function with outward boundary flux `flux`,
/// returned as Cartesian components at each node.
pub fn grid_gradient(u: &ScalarField, flux: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let grid = u.grid();
    let (nr, nt) = (grid.nr(), grid.ntheta());
    let (dr, dt) = (grid.dr(), grid.dtheta());
    let mut gx = vec![0.0; grid.len()];
    let mut gy = vec![0.0; grid.len()];
    for i in 0..nr {
        let r = grid.r(i);
        for (j, &g) in flux.iter().enumerate().take(nt) {
            let du_dr = if nr == 1 {
                0.0
            } else if i == 0 {
                // Mirror node through the pole: (r_0, theta + pi).
                let across = opposite_value(u, j);
                (u.at(1, j) - across) / (2.0 * dr)
            } else if i + 1 == nr {
                0.5 * ((u.at(i, j) - u.at(i - 1, j)) / dr + g)
            } else {
                (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * dr)
            };
            let jp = (j + 1) % nt;
            let jm = (j + nt - 1) % nt;
            let du_dt = (u.at(i, jp) - u.at(i, jm)) / (2.0 * dt * r);
            let (s, c) = grid.theta(j).sin_cos();
            let k = grid.index(i, j);
            gx[k] = c * du_dr - s * du_dt;
            gy[k] = s * du_dr + c * du_dt;
        }
    }
    (gx, gy)
}

fn opposite_value(u: &ScalarField, j: usize) -> f64 {
    let nt = u.grid().ntheta();
    if nt.is_multiple_of(2) {
        u.at(0, (j + nt / 2) % nt)
    } else {
        let j0 = (j + nt / 2) % nt;
        0.5 * (u.at(0, j0) + u.at(0, (j0 + 1) % nt))
    }
}

/// `B^2 + e^h |grad_e h|^2 / (4 Omega)` with `grad h = grad h~ (differenced) + grad v0 (exact)`.
pub fn energy_density(
    htilde: &ScalarField,
    singular: &SingularPart,
    disk: &ConformalDisk,
) -> ScalarField {
    let grid = *htilde.grid();
    let (gx, gy) = grid_gradient(htilde, singular.neumann_data());
    ScalarField::from_fn(grid, |i, j| {
        let k = grid.index(i, j);
        let h = htilde.values()[k] + singular.v0().values()[k];
        let eh = h.exp();
        let b = 0.5 * (1.0 - eh);
        let (vx, vy) = singular.gradient_at(grid.point(i, j));
        let (hx, hy) = (gx[k] + vx, gy[k] + vy);
        b * b + 0.25 * eh * (hx * hx + hy * hy) / disk.omega(grid.r(i))
    })
}

/// Midpoint quadrature of the energy density against `dV = Omega r dr dtheta`.
pub fn total_energy(density: &ScalarField, disk: &ConformalDisk) -> f64 {
    density.integrate(disk)
}

#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub magnetic_field: ScalarField,
    pub energy_density: ScalarField,
    pub flux: f64,
    pub energy: f64,
    pub expected_flux: f64,
    pub expected_energy: f64,
    pub bc_residual: f64,
}

impl ObservableSet {
    pub fn compute(sol: &TaubesSolution) -> Self {
        let b = magnetic_field(&sol.h());
        let eps = energy_density(&sol.htilde, &sol.singular, &sol.disk);
        let n = f64::from(sol.config.interior_count());
        let m = f64::from(sol.config.boundary_count());
        Self {
            flux: total_flux(&b, &sol.disk),
            energy: total_energy(&eps, &sol.disk),
            expected_flux: (2.0 * n + m) * PI,
            expected_energy: (n + 0.5 * m) * PI,
            bc_residual: sol.report.bc_residual,
            magnetic_field: b,
            energy_density: eps,
        }
    }

    pub fn flux_error(&self) -> f64 {
        (self.flux - self.expected_flux).abs() / self.expected_flux
    }

    pub fn energy_error(&self) -> f64 {
        (self.energy - self.expected_energy).abs() / self.expected_energy
    }

    /// `|E - Phi/2| / Phi`.
    pub fn bogomolny_defect(&self) -> f64 {
        (self.energy - 0.5 * self.flux).abs() / self.flux
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub nr: usize,
    pub ntheta: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub schema_version: u32,
    pub radius: f64,
    pub area: f64,
    pub interior_count: u32,
    pub boundary_count: u32,
    pub grid: GridInfo,
    pub flux: f64,
    pub energy: f64,
    pub expected_flux: f64,
    pub expected_energy: f64,
    pub bc_residual: f64,
    pub bradlow_margin: f64,
    pub iterations: usize,
    pub converged: bool,
    pub residual_history: Vec<f64>,
    pub damping_events: usize,
    pub field_columns: Vec<&'static str>,
}

impl SolveSummary {
    pub fn new(sol: &TaubesSolution, obs: &ObservableSet) -> Self {
        let report: &SolveReport = &sol.report;
        Self {
            schema_version: SCHEMA_VERSION,
            radius: sol.disk.radius(),
            area: sol.disk.area(),
            interior_count: sol.config.interior_count(),
            boundary_count: sol.config.boundary_count(),
            grid: GridInfo {
                nr: sol.grid.nr(),
                ntheta: sol.grid.ntheta(),
            },
            flux: obs.flux,
            energy: obs.energy,
            expected_flux: obs.expected_flux,
            expected_energy: obs.expected_energy,
            bc_residual: obs.bc_residual,
            bradlow_margin: bradlow_margin(&sol.config, &sol.disk),
            iterations: report.iterations,
            converged: report.converged,
            residual_history: report.residual_history.clone(),
            damping_events: report.damping_events,
            field_columns: FIELD_COLUMNS.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RadialSummary {
    pub schema_version: u32,
    pub radius: f64,
    pub multiplicity: u32,
    pub h0: f64,
    pub boundary_slope: f64,
    pub residual: f64,
    pub converged: bool,
    pub steps: usize,
    pub flux: f64,
    pub energy: f64,
    pub expected_flux: f64,
    pub expected_energy: f64,
    pub bradlow_margin: f64,
    pub profile_columns: Vec<&'static str>,
}

/// Trapezoid integrals of `B` and the energy density over the radial profile.
pub fn radial_integrals(profile: &RadialProfile) -> (f64, f64) {
    let mut flux = 0.0;
    let mut energy = 0.0;
    for k in 1..profile.r.len() {
        let (r0, r1) = (profile.r[k - 1], profile.r[k]);
        let w = 0.5 * (r1 - r0);
        let f = |k: usize| 2.0 * PI * profile.r[k] * profile.omega(k);
        flux += w * (f(k - 1) * profile.magnetic_field(k - 1) + f(k) * profile.magnetic_field(k));
        energy += w * (f(k - 1) * profile.energy_density(k - 1) + f(k) * profile.energy_density(k));
    }
    (flux, energy)
}

impl RadialSummary {
    pub fn new(profile: &RadialProfile, disk: &ConformalDisk) -> Self {
        let (flux, energy) = radial_integrals(profile);
        let n = f64::from(profile.n);
        Self {
            schema_version: SCHEMA_VERSION,
            radius: disk.radius(),
            multiplicity: profile.n,
            h0: profile.h0,
            boundary_slope: profile.boundary_slope(),
            residual: profile.residual,
            converged: profile.converged,
            steps: profile.r.len() - 1,
            flux,
            energy,
            expected_flux: 2.0 * n * PI,
            expected_energy: n * PI,
            bradlow_margin: disk.area_over_four_pi() - n,
            profile_columns: PROFILE_COLUMNS.to_vec(),
        }
    }
}

/// Field CSV with the columns of [`FIELD_COLUMNS`].
pub fn field_csv(sol: &TaubesSolution, obs: &ObservableSet) -> String {
    let grid: &PolarGrid = &sol.grid;
    let h = sol.h();
    let mut out = String::with_capacity(grid.len() * 160);
    out.push_str(&FIELD_COLUMNS.join(","));
    out.push('\n');
    for i in 0..grid.nr() {
        for j in 0..grid.ntheta() {
            let z: Complex64 = grid.point(i, j);
            let k = grid.index(i, j);
            let hv = h.values()[k];
            let _ = writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                grid.r(i),
                grid.theta(j),
                z.re,
                z.im,
                sol.htilde.values()[k],
                hv,
                hv.exp(),
                obs.magnetic_field.values()[k],
                obs.energy_density.values()[k],
            );
        }
    }
    out
}

/// Profile CSV with the columns of [`PROFILE_COLUMNS`], decimated to at most `max_rows` rows.
pub fn profile_csv(profile: &RadialProfile, max_rows: usize) -> String {
    let n = profile.r.len();
    let stride = n.div_ceil(max_rows.max(2) - 1).max(1);
    let mut rows: Vec<usize> = (0..n).step_by(stride).collect();
    if rows.last() != Some(&(n - 1)) {
        rows.push(n - 1);
    }
    let mut out = String::with_capacity(rows.len() * 120);
    out.push_str(&PROFILE_COLUMNS.join(","));
    out.push('\n');
    for k in rows {
        let _ = writeln!(
            out,
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            profile.r[k],
            profile.htilde[k],
            profile.dhtilde[k],
            profile.phi_sq(k),
            profile.magnetic_field(k),
            profile.energy_density(k),
        );
    }
    out
}

/// Write named files into `dir` all-or-nothing: every file goes to a temporary
/// sibling first and is renamed only after all writes succeeded.
pub fn export(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>> {
    if dir.as_os_str().is_empty() {
        return Err(Error::InvalidArgument("output path is empty".into()));
    }
    if files.iter().any(|(name, _)| name.is_empty()) {
        return Err(Error::InvalidArgument("output file name is empty".into()));
    }
    fs::create_dir_all(dir)?;
    let mut staged = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let tmp = dir.join(format!(".{name}.partial"));
        if let Err(e) = fs::write(&tmp, contents) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        staged.push((tmp, dir.join(name)));
    }
    let mut written = Vec::with_capacity(staged.len());
    for (tmp, dest) in staged {
        fs::rename(&tmp, &dest)?;
        written.push(dest);
    }
    Ok(written)
}
