//! The logarithmic part `v0` of `h` and the Neumann data it induces.
//!
//! With `v0 = sum n_k log|z - X_k|^2 + sum m_j log|z - W_j|^2` the remainder
//! `h~ = h - v0` is smooth: the interior sources are absorbed exactly and each
//! boundary vortex contributes the constant outward flux `m_j / R`.

use num_complex::Complex64;

use crate::geometry::{ConformalDisk, PolarGrid, ScalarField, VortexConfiguration};

#[derive(Debug, Clone)]
pub struct SingularPart {
    v0: ScalarField,
    neumann_data: Vec<f64>,
    /// Point sources as `(position, weight)`; boundary vortices sit on `r = R`.
    sources: Vec<(Complex64, f64)>,
}

/// `|z - w|^2` for `z = r e^{i theta}`, `w = rho e^{i alpha}` via the law of cosines.
fn dist_sq(r: f64, theta: f64, w: Complex64) -> f64 {
    let rho = w.norm();
    if rho == 0.0 {
        return r * r;
    }
    let d = r * r + rho * rho - 2.0 * r * rho * (theta - w.arg()).cos();
    if d > 0.0 {
        d
    } else {
        (Complex64::from_polar(r, theta) - w).norm_sqr()
    }
}

impl SingularPart {
    pub fn build(config: &VortexConfiguration, disk: &ConformalDisk, grid: &PolarGrid) -> Self {
        let radius = disk.radius();
        let mut sources: Vec<(Complex64, f64)> = config
            .interior()
            .iter()
            .map(|v| (v.position, f64::from(v.multiplicity)))
            .collect();
        sources.extend(
            config
                .boundary()
                .iter()
                .map(|v| (Complex64::from_polar(radius, v.angle), f64::from(v.multiplicity))),
        );

        let v0 = ScalarField::from_fn(*grid, |i, j| {
            let (r, t) = (grid.r(i), grid.theta(j));
            sources
                .iter()
                .map(|&(w, n)| n * dist_sq(r, t, w).ln())
                .sum()
        });

        let neumann_data = (0..grid.ntheta())
            .map(|j| {
                let theta = grid.theta(j);
                let interior: f64 = config
                    .interior()
                    .iter()
                    .map(|v| {
                        let rho = v.position.norm();
                        let along = if rho == 0.0 {
                            0.0
                        } else {
                            rho * (theta - v.position.arg()).cos()
                        };
                        f64::from(v.multiplicity) * 2.0 * (radius - along)
                            / dist_sq(radius, theta, v.position)
                    })
                    .sum();
                let boundary: f64 = config
                    .boundary()
                    .iter()
                    .map(|v| f64::from(v.multiplicity) / radius)
                    .sum();
                -(interior + boundary)
            })
            .collect();

        Self {
            v0,
            neumann_data,
            sources,
        }
    }

    pub fn v0(&self) -> &ScalarField {
        &self.v0
    }

    /// `g(theta_j) = -d_r v0` at `r = R`: the outward flux imposed on `h~`.
    pub fn neumann_data(&self) -> &[f64] {
        &self.neumann_data
    }

    /// `v0` at an arbitrary point.
    pub fn value_at(&self, z: Complex64) -> f64 {
        self.sources
            .iter()
            .map(|&(w, n)| n * (z - w).norm_sqr().ln())
            .sum()
    }

    /// Euclidean gradient `(d_x v0, d_y v0)` at `z`, evaluated analytically.
    pub fn gradient_at(&self, z: Complex64) -> (f64, f64) {
        self.sources.iter().fold((0.0, 0.0), |(gx, gy), &(w, n)| {
            let d = z - w;
            let s = 2.0 * n / d.norm_sqr();
            (gx + s * d.re, gy + s * d.im)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn setup(config: impl FnOnce(&ConformalDisk) -> VortexConfiguration) -> (ConformalDisk, PolarGrid, SingularPart) {
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let grid = PolarGrid::new(&disk, 16, 32).unwrap();
        let c = config(&disk);
        let sp = SingularPart::build(&c, &disk, &grid);
        (disk, grid, sp)
    }

    #[test]
    fn centered_vortex_data() {
        let (_, _, sp) = setup(|d| VortexConfiguration::centered(d, 1).unwrap());
        assert!(sp.neumann_data().iter().all(|&g| (g + 2.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn boundary_vortex_data() {
        let (_, _, sp) = setup(|d| VortexConfiguration::on_boundary(d, 0.0, 1).unwrap());
        assert!(sp.neumann_data().iter().all(|&g| (g + 1.0 / 3.0).abs() < 1e-15));
        assert!(sp.v0().values().iter().all(|v| v.is_finite()));
    }

    #[test]
    fn double_vortex_data() {
        let (_, _, sp) = setup(|d| VortexConfiguration::centered(d, 2).unwrap());
        assert!(sp.neumann_data().iter().all(|&g| (g + 4.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn v0_is_finite_and_matches_pointwise_formula() {
        let (_, grid, sp) = setup(|d| {
            VortexConfiguration::new(d, [(Complex64::new(0.7, -0.4), 2)], [(1.0, 1)]).unwrap()
        });
        for i in 0..grid.nr() {
            for j in 0..grid.ntheta() {
                let v = sp.v0().at(i, j);
                assert!(v.is_finite());
                assert!((v - sp.value_at(grid.point(i, j))).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let (_, _, sp) = setup(|d| {
            VortexConfiguration::new(d, [(Complex64::new(0.7, -0.4), 2)], [(1.0, 1)]).unwrap()
        });
        let z = Complex64::new(-0.3, 1.1);
        let h = 1e-6;
        let fx = (sp.value_at(z + h) - sp.value_at(z - h)) / (2.0 * h);
        let fy = (sp.value_at(z + Complex64::i() * h) - sp.value_at(z - Complex64::i() * h)) / (2.0 * h);
        let (gx, gy) = sp.gradient_at(z);
        assert!((gx - fx).abs() < 1e-7 && (gy - fy).abs() < 1e-7);
    }

    #[test]
    fn neumann_data_integrates_to_vortex_count() {
        // Oracle: trapezoid quadrature of d_r v0 on a fine circle, independent of the grid.
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let config = VortexConfiguration::new(
            &disk,
            [(Complex64::new(0.9, 0.5), 1), (Complex64::new(-1.2, 0.1), 2)],
            [(2.0, 1), (4.0, 3)],
        )
        .unwrap();
        let grid = PolarGrid::new(&disk, 8, 256).unwrap();
        let sp = SingularPart::build(&config, &disk, &grid);
        let total: f64 = sp.neumann_data().iter().map(|g| -g * 3.0 * grid.dtheta()).sum();
        let (n, m) = (3.0, 4.0);
        assert!((total - (4.0 * PI * n + 2.0 * PI * m)).abs() < 1e-10, "{total}");
    }

    #[test]
    fn exp_v0_vanishes_quadratically_at_cores() {
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let x = Complex64::new(1.0, 0.5);
        let config = VortexConfiguration::new(&disk, [(x, 2)], []).unwrap();
        let grid = PolarGrid::new(&disk, 8, 8).unwrap();
        let sp = SingularPart::build(&config, &disk, &grid);
        let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&t| sp.value_at(x + t).exp() / t.powi(4))
            .collect();
        assert!(ratios.iter().all(|&q| (q - 1.0).abs() < 1e-10));
    }
}
