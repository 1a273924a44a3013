//! Discrete Neumann Green functions on the polar grid.
//!
//! Both problems are compensated by the constant `1/A` so that the pure
//! Neumann system is solvable, and both solutions are normalized to zero
//! mean against the Riemannian cell volumes. They use the same assembled
//! operator as the field solver.

use crate::error::{Error, Result};
use crate::geometry::{ConformalDisk, PolarGrid, ScalarField};
use crate::linalg::{solve_neumann, CgOptions, NeumannLaplacian};

fn riemannian_weights(disk: &ConformalDisk, grid: &PolarGrid) -> (Vec<f64>, f64) {
    let w = grid.ring_volumes(disk);
    let area = w.iter().sum::<f64>() * grid.ntheta() as f64;
    (w, area)
}

/// `-lap G_Q = delta_Q - 1/A` with `d_n G_Q = 0`, for the interior node `Q = (i, j)`.
pub fn neumann_green(
    disk: &ConformalDisk,
    grid: &PolarGrid,
    node: (usize, usize),
) -> Result<ScalarField> {
    let (qi, qj) = node;
    if qi >= grid.nr() || qj >= grid.ntheta() {
        return Err(Error::InvalidArgument(format!(
            "node {node:?} outside a {}x{} grid",
            grid.nr(),
            grid.ntheta()
        )));
    }
    let (w, area) = riemannian_weights(disk, grid);
    let nt = grid.ntheta();
    let mut b: Vec<f64> = (0..grid.len()).map(|k| -w[k / nt] / area).collect();
    b[grid.index(qi, qj)] += 1.0;
    let op = NeumannLaplacian::new(grid);
    let (x, _) = solve_neumann(&op, &b, &w, CgOptions::default())?;
    ScalarField::from_values(*grid, x)
}

/// `lap H_Q = 1/A` with `d_n H_Q = delta_Q` on the boundary, `Q` at angular node `j`.
///
/// The delta is a single outer-face flux of `1 / (R dtheta)`.
pub fn boundary_neumann_green(
    disk: &ConformalDisk,
    grid: &PolarGrid,
    angle: f64,
) -> Result<ScalarField> {
    let dt = grid.dtheta();
    let pos = angle.rem_euclid(std::f64::consts::TAU) / dt;
    let j = pos.round();
    if (pos - j).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "boundary point angle {angle} does not coincide with an angular node"
        )));
    }
    let j = (j as usize) % grid.ntheta();
    let (w, area) = riemannian_weights(disk, grid);
    let nt = grid.ntheta();
    let mut b: Vec<f64> = (0..grid.len()).map(|k| -w[k / nt] / area).collect();
    b[grid.index(grid.nr() - 1, j)] += 1.0;
    let op = NeumannLaplacian::new(grid);
    let (x, _) = solve_neumann(&op, &b, &w, CgOptions::default())?;
    ScalarField::from_values(*grid, x)
}

/// Boundary flux of `H_Q` on each outer face: `1 / (R dtheta)` at `Q`, zero elsewhere.
pub fn boundary_green_flux(grid: &PolarGrid, angle: f64) -> Vec<f64> {
    let j = ((angle.rem_euclid(std::f64::consts::TAU) / grid.dtheta()).round() as usize)
        % grid.ntheta();
    let mut g = vec![0.0; grid.ntheta()];
    g[j] = 1.0 / (grid.radius() * grid.dtheta());
    g
}

/// Least-squares slope of `values` against `ln(distances)`.
pub fn log_slope(distances: &[f64], values: &[f64]) -> f64 {
    let n = distances.len() as f64;
    let xs: Vec<f64> = distances.iter().map(|d| d.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = values.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(values).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Fitted `d G / d ln(dist)` along the ray through an interior node `Q = (i, j)`,
/// over nodes at distance `[4 dr, 8 dr]` from `Q`.
pub fn interior_log_slope(field: &ScalarField, node: (usize, usize)) -> f64 {
    let grid = field.grid();
    let q = grid.point(node.0, node.1);
    let dr = grid.dr();
    let (mut d, mut v) = (Vec::new(), Vec::new());
    for i in 0..grid.nr() {
        let p = grid.point(i, node.1);
        let dist = (p - q).norm();
        if (4.0 * dr - 1e-12..=8.0 * dr + 1e-12).contains(&dist) {
            d.push(dist);
            v.push(field.at(i, node.1));
        }
    }
    log_slope(&d, &v)
}

/// Fitted `d H / d ln(dist)` along the inward normal ray from the boundary node `j`,
/// over nodes at distance `[4 dr, 8 dr]` from the boundary point.
pub fn boundary_log_slope(field: &ScalarField, j: usize) -> f64 {
    let grid = field.grid();
    let dr = grid.dr();
    let (mut d, mut v) = (Vec::new(), Vec::new());
    for i in 0..grid.nr() {
        let dist = grid.radius() - grid.r(i);
        if (4.0 * dr - 1e-12..=8.0 * dr + 1e-12).contains(&dist) {
            d.push(dist);
            v.push(field.at(i, j));
        }
    }
    log_slope(&d, &v)
}
