//! Kinetic-energy metric data for one vortex at the center of a rotationally
//! symmetric disk.
//!
//! Moving the vortex from the origin along `X` perturbs `h` by
//! `d_X h = (a(r) - 2/r) cos(theta)`, where `a` solves the linear radial problem
//!
//! ```text
//! a'' + a'/r - a/r^2 = f(r) (a - 2/r),   f = Omega e^h,   a(0) = 0,   a'(R) = -2/R^2.
//! ```
//!
//! The boundary value `a(R) - 2/R` controls the boundary contribution to the
//! metric. The local contribution uses the Samols coefficient `b(Z)`, extracted
//! from full 2D solves with the vortex displaced to `Z`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ConformalDisk, PolarGrid, VortexConfiguration};
use crate::radial::{shoot, RadialProfile, ShootOptions};
use crate::taubes::{SolveOptions, TaubesSolution};

/// Start of the linearized integration as a fraction of `R`.
pub const EPSILON_FRACTION: f64 = 1e-6;
/// Displacement used for `db/dZ` as a fraction of `R`.
pub const DELTA_FRACTION: f64 = 0.01;
/// Annulus `[FIT_INNER, FIT_OUTER] * dr` around the core used to fit `b`.
pub const FIT_INNER: f64 = 2.0;
pub const FIT_OUTER: f64 = 6.0;

#[derive(Debug, Clone, Serialize)]
pub struct LinearizedProfile {
    pub r: Vec<f64>,
    pub a: Vec<f64>,
    pub da: Vec<f64>,
    /// `a(R)`.
    pub a_r: f64,
    /// `d_X h(R; 0) = a(R) - 2/R`.
    pub boundary_value: f64,
    /// `a'(0)`, the coefficient of the regular branch `a ~ c r`.
    pub slope_at_origin: f64,
}

impl LinearizedProfile {
    /// `|a'(R) + 2/R^2|`.
    pub fn neumann_residual(&self) -> f64 {
        let radius = *self.r.last().expect("profile has nodes");
        (self.da.last().expect("profile has nodes") + 2.0 / (radius * radius)).abs()
    }
}

fn linear_rhs(r: f64, a: f64, p: f64, f: f64, forced: bool) -> (f64, f64) {
    let source = if forced { -2.0 / r } else { 0.0 };
    (p, -p / r + a / (r * r) + f * (a + source))
}

/// RK4 on a uniform grid from `eps` to `radius`, seeded with `(a, a')`.
fn integrate_linear(
    f: &dyn Fn(f64) -> f64,
    radius: f64,
    eps: f64,
    steps: usize,
    seed: (f64, f64),
    forced: bool,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let dr = (radius - eps) / steps as f64;
    let (mut a, mut p) = seed;
    let mut rs = Vec::with_capacity(steps + 1);
    let mut av = Vec::with_capacity(steps + 1);
    let mut pv = Vec::with_capacity(steps + 1);
    rs.push(eps);
    av.push(a);
    pv.push(p);
    let mut f0 = f(eps);
    for k in 0..steps {
        let r = eps + k as f64 * dr;
        let rm = r + 0.5 * dr;
        let r1 = if k + 1 == steps { radius } else { eps + (k + 1) as f64 * dr };
        let (fm, f1) = (f(rm), f(r1));
        let k1 = linear_rhs(r, a, p, f0, forced);
        let k2 = linear_rhs(rm, a + 0.5 * dr * k1.0, p + 0.5 * dr * k1.1, fm, forced);
        let k3 = linear_rhs(rm, a + 0.5 * dr * k2.0, p + 0.5 * dr * k2.1, fm, forced);
        let k4 = linear_rhs(r1, a + dr * k3.0, p + dr * k3.1, f1, forced);
        a += dr / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        p += dr / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        f0 = f1;
        rs.push(r1);
        av.push(a);
        pv.push(p);
    }
    (rs, av, pv)
}

/// Solves the linearized problem for an arbitrary coefficient `f` by superposition
/// of the regular homogeneous branch and one particular solution.
pub fn solve_linearized_with<F>(radius: f64, f: F, steps: usize) -> Result<LinearizedProfile>
where
    F: Fn(f64) -> f64,
{
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidDomain(format!("radius {radius} must be positive")));
    }
    if steps < 1000 {
        return Err(Error::InvalidArgument(format!(
            "at least 1000 integration steps required, got {steps}"
        )));
    }
    let eps = EPSILON_FRACTION * radius;
    let (r, ah, ph) = integrate_linear(&f, radius, eps, steps, (eps, 1.0), false);
    let (_, ap, pp) = integrate_linear(&f, radius, eps, steps, (0.0, 0.0), true);

    let scale = ah.iter().fold(0.0_f64, |m, v| m.max(v.abs())) / radius;
    let dh_end = *ph.last().expect("nonempty");
    if !(dh_end.abs() > 1e-10 * scale) || !dh_end.is_finite() {
        return Err(Error::Conditioning(format!(
            "homogeneous solution has a'(R) = {dh_end:e}; superposition is singular"
        )));
    }
    let target = -2.0 / (radius * radius);
    let c = (target - pp.last().expect("nonempty")) / dh_end;
    let a: Vec<f64> = ap.iter().zip(&ah).map(|(p, h)| p + c * h).collect();
    let da: Vec<f64> = pp.iter().zip(&ph).map(|(p, h)| p + c * h).collect();
    let a_r = *a.last().expect("nonempty");
    Ok(LinearizedProfile {
        slope_at_origin: da[0],
        boundary_value: a_r - 2.0 / radius,
        a_r,
        r,
        a,
        da,
    })
}

/// Linearized solve about a converged unit-vortex radial profile, with
/// `f = Omega r^2 e^{h~}` taken from its Hermite interpolant.
pub fn solve_linearized(disk: &ConformalDisk, radial: &RadialProfile) -> Result<LinearizedProfile> {
    if radial.n != 1 {
        return Err(Error::InvalidArgument(format!(
            "linearization needs a unit vortex, got multiplicity {}",
            radial.n
        )));
    }
    if !radial.converged {
        return Err(Error::InvalidArgument("radial profile did not converge".into()));
    }
    if (radial.radius() - disk.radius()).abs() > 1e-12 * disk.radius() {
        return Err(Error::InvalidArgument("profile and disk radii differ".into()));
    }
    let f = |r: f64| disk.omega(r) * r * r * radial.interpolate(r).0.exp();
    solve_linearized_with(disk.radius(), f, radial.r.len() - 1)
}

/// `(1/2) pi v^2`: half the boundary integral `oint d_X h d(d_Y h)` at the origin.
pub fn boundary_metric_term(lin: &LinearizedProfile) -> f64 {
    0.5 * PI * lin.boundary_value * lin.boundary_value
}

/// Least-squares fit of `b = d_zbar h~` around the single interior vortex of `sol`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SamolsFit {
    pub b: Complex64,
    pub nodes: usize,
    pub rms_residual: f64,
}

/// Fits `h~ ~ c0 + p dx + q dy + quadratic` over the annulus
/// `FIT_INNER dr <= |z - Z| <= FIT_OUTER dr` and returns `b = (p + i q) / 2`.
pub fn samols_fit(sol: &TaubesSolution) -> Result<SamolsFit> {
    let core = match sol.config.interior() {
        [v] if sol.config.boundary().is_empty() => v.position,
        _ => {
            return Err(Error::InvalidArgument(
                "the Samols coefficient needs exactly one interior vortex".into(),
            ))
        }
    };
    let grid = &sol.grid;
    let dr = grid.dr();
    let (lo, hi) = (FIT_INNER * dr, FIT_OUTER * dr);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..grid.nr() {
        for j in 0..grid.ntheta() {
            let d = grid.point(i, j) - core;
            let rho = d.norm();
            if rho >= lo && rho <= hi {
                let (x, y) = (d.re / dr, d.im / dr);
                rows.extend_from_slice(&[1.0, x, y, x * x, x * y, y * y]);
                rhs.push(sol.htilde.at(i, j));
            }
        }
    }
    let m = rhs.len();
    if m < 12 {
        return Err(Error::Conditioning(format!(
            "only {m} nodes in the fit annulus; refine the grid"
        )));
    }
    let a = DMatrix::from_row_slice(m, 6, &rows);
    let y = DVector::from_vec(rhs);
    let svd = a.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 1e-10 * smax) {
        return Err(Error::Conditioning(format!(
            "fit matrix is ill conditioned (singular values {smin:e} / {smax:e})"
        )));
    }
    let coef = svd
        .solve(&y, 1e-14 * smax)
        .map_err(|e| Error::Conditioning(e.to_string()))?;
    let resid = &a * &coef - &y;
    Ok(SamolsFit {
        b: Complex64::new(coef[1] / dr, coef[2] / dr) * 0.5,
        nodes: m,
        rms_residual: (resid.norm_squared() / m as f64).sqrt(),
    })
}

/// Solves for a single unit vortex at `z` and fits `b(z)`.
pub fn samols_b_at(
    disk: &ConformalDisk,
    grid: &PolarGrid,
    z: Complex64,
    opts: &SolveOptions,
) -> Result<(TaubesSolution, SamolsFit)> {
    let config = VortexConfiguration::new(disk, [(z, 1)], [])?;
    let sol = TaubesSolution::solve(disk, &config, grid, opts)?;
    if !sol.report.converged {
        return Err(Error::InvalidArgument(format!(
            "Newton solve at Z = {z} did not converge (residual {:e})",
            sol.report.final_residual()
        )));
    }
    let fit = samols_fit(&sol)?;
    Ok((sol, fit))
}

/// `db/dZ = (d_X b - i d_Y b) / 2` from the four-point central stencil.
pub fn db_dz_stencil(bp: Complex64, bm: Complex64, bip: Complex64, bim: Complex64, delta: f64) -> Complex64 {
    let dx = (bp - bm) / (2.0 * delta);
    let dy = (bip - bim) / (2.0 * delta);
    (dx - Complex64::i() * dy) * 0.5
}

#[derive(Debug, Clone, Serialize)]
pub struct SamolsEstimate {
    pub z: Complex64,
    pub delta: f64,
    pub b: Complex64,
    pub db_dz: Complex64,
    /// Same stencil at `delta / 2`.
    pub db_dz_half: Complex64,
    /// `(4 D(delta/2) - D(delta)) / 3`.
    pub db_dz_richardson: Complex64,
}

fn stencil_points(z: Complex64, delta: f64) -> Vec<Complex64> {
    let i = Complex64::i();
    let mut pts = vec![z];
    for d in [delta, 0.5 * delta] {
        pts.extend([z + d, z - d, z + i * d, z - i * d]);
    }
    pts
}

fn solve_points(
    disk: &ConformalDisk,
    grid: &PolarGrid,
    points: &[Complex64],
    opts: &SolveOptions,
) -> Result<Vec<(TaubesSolution, SamolsFit)>> {
    points
        .par_iter()
        .map(|&z| samols_b_at(disk, grid, z, opts))
        .collect()
}

fn estimate_from(z: Complex64, delta: f64, fits: &[SamolsFit]) -> SamolsEstimate {
    let b: Vec<Complex64> = fits.iter().map(|f| f.b).collect();
    let full = db_dz_stencil(b[1], b[2], b[3], b[4], delta);
    let half = db_dz_stencil(b[5], b[6], b[7], b[8], 0.5 * delta);
    SamolsEstimate {
        z,
        delta,
        b: b[0],
        db_dz: full,
        db_dz_half: half,
        db_dz_richardson: (half * 4.0 - full) / 3.0,
    }
}

/// `b(Z)` and `db/dZ` from nine independent 2D solves (run in parallel).
pub fn samols_b(
    disk: &ConformalDisk,
    grid: &PolarGrid,
    z: Complex64,
    delta: f64,
    opts: &SolveOptions,
) -> Result<SamolsEstimate> {
    if !(delta > 0.0) || z.norm() + delta >= disk.radius() {
        return Err(Error::InvalidArgument(format!(
            "stencil of half-width {delta} around {z} leaves the disk"
        )));
    }
    let sols = solve_points(disk, grid, &stencil_points(z, delta), opts)?;
    let fits: Vec<SamolsFit> = sols.iter().map(|(_, f)| *f).collect();
    Ok(estimate_from(z, delta, &fits))
}

/// `h` on the circle `r = R` at the angular nodes, extrapolating `h~` from the
/// outer ring with its Neumann data.
pub fn boundary_trace(sol: &TaubesSolution) -> Vec<f64> {
    let grid = &sol.grid;
    let outer = grid.nr() - 1;
    let half = 0.5 * grid.dr();
    (0..grid.ntheta())
        .map(|j| {
            let on_circle = Complex64::from_polar(grid.radius(), grid.theta(j));
            sol.htilde.at(outer, j)
                + sol.singular.neumann_data()[j] * half
                + sol.singular.value_at(on_circle)
        })
        .collect()
}

/// Periodic trapezoid value of `oint u dv` for nodal samples on the circle.
pub fn loop_integral(u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    (0..n)
        .map(|j| u[j] * 0.5 * (v[(j + 1) % n] - v[(j + n - 1) % n]))
        .sum()
}

/// Direct quadrature of `oint d_X h d(d_Y h)` with `d_X h`, `d_Y h` from central
/// differences of solves displaced by `+-delta` and `+-i delta`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryQuadrature {
    pub delta: f64,
    pub integral: f64,
    /// `d_X h` at the boundary point `theta = 0`.
    pub boundary_value: f64,
    /// `max_j |d_Y h(theta_j) - v sin(theta_j)|` with `v` the value at `theta = 0`.
    pub rotation_defect: f64,
}

pub fn boundary_quadrature(
    plus: &TaubesSolution,
    minus: &TaubesSolution,
    plus_i: &TaubesSolution,
    minus_i: &TaubesSolution,
    delta: f64,
) -> BoundaryQuadrature {
    let diff = |p: &TaubesSolution, m: &TaubesSolution| -> Vec<f64> {
        boundary_trace(p)
            .iter()
            .zip(boundary_trace(m))
            .map(|(a, b)| (a - b) / (2.0 * delta))
            .collect()
    };
    let dx = diff(plus, minus);
    let dy = diff(plus_i, minus_i);
    let v = dx[0];
    let grid = &plus.grid;
    let rotation_defect = (0..grid.ntheta())
        .map(|j| (dy[j] - v * grid.theta(j).sin()).abs())
        .fold(0.0, f64::max);
    BoundaryQuadrature {
        delta,
        integral: loop_integral(&dx, &dy),
        boundary_value: v,
        rotation_defect,
    }
}

#[derive(Debug, Clone, Default)]
pub struct MetricOptions {
    /// Stencil half-width for `db/dZ`; `None` means `DELTA_FRACTION * R`.
    pub delta: Option<f64>,
    pub solve: SolveOptions,
    pub shoot: ShootOptions,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub schema_version: u32,
    pub radius: f64,
    pub omega_origin: f64,
    pub grid: crate::diagnostics::GridInfo,
    pub h0: f64,
    /// `d_X h(R; 0) = a(R) - 2/R`.
    pub boundary_value: f64,
    pub a_r: f64,
    pub neumann_residual: f64,
    /// `(1/2) pi v^2`.
    pub boundary_term: f64,
    /// `pi v^2`, the closed form of the boundary loop integral.
    pub loop_closed_form: f64,
    pub boundary_quadrature: BoundaryQuadrature,
    pub samols_b: Complex64,
    pub db_dz: Complex64,
    pub db_dz_half: Complex64,
    pub db_dz_richardson: Complex64,
    /// `a'(0)/2 - Omega(0)/4`, predicted from the linearized profile.
    pub db_dz_linearized: f64,
    pub delta: f64,
    /// `pi (Omega(0) + 2 Re db/dZ)`.
    pub local_term: f64,
    pub local_term_convention: &'static str,
    pub total_coefficient: f64,
    /// `boundary_term > 0`: the metric depends on boundary data.
    pub nonlocal: bool,
}

/// Assembles the coefficient of `|dZ/dt|^2` at `Z = 0`.
pub fn metric_coefficient(
    disk: &ConformalDisk,
    grid: &PolarGrid,
    opts: &MetricOptions,
) -> Result<MetricReport> {
    let radius = disk.radius();
    let delta = opts.delta.unwrap_or(DELTA_FRACTION * radius);
    if !(delta > 0.0 && delta < radius) {
        return Err(Error::InvalidArgument(format!("stencil half-width {delta} out of range")));
    }
    let radial = shoot(disk, 1, &opts.shoot)?;
    let lin = solve_linearized(disk, &radial)?;

    let z0 = Complex64::new(0.0, 0.0);
    let sols = solve_points(disk, grid, &stencil_points(z0, delta), &opts.solve)?;
    let fits: Vec<SamolsFit> = sols.iter().map(|(_, f)| *f).collect();
    let est = estimate_from(z0, delta, &fits);
    let quad = boundary_quadrature(&sols[1].0, &sols[2].0, &sols[3].0, &sols[4].0, delta);

    let omega0 = disk.omega(0.0);
    let boundary_term = boundary_metric_term(&lin);
    let local_term = PI * (omega0 + 2.0 * est.db_dz.re);
    Ok(MetricReport {
        schema_version: crate::diagnostics::SCHEMA_VERSION,
        radius,
        omega_origin: omega0,
        grid: crate::diagnostics::GridInfo {
            nr: grid.nr(),
            ntheta: grid.ntheta(),
        },
        h0: radial.h0,
        boundary_value: lin.boundary_value,
        a_r: lin.a_r,
        neumann_residual: lin.neumann_residual(),
        boundary_term,
        loop_closed_form: PI * lin.boundary_value * lin.boundary_value,
        boundary_quadrature: quad,
        samols_b: est.b,
        db_dz: est.db_dz,
        db_dz_half: est.db_dz_half,
        db_dz_richardson: est.db_dz_richardson,
        db_dz_linearized: 0.5 * lin.slope_at_origin - 0.25 * omega0,
        delta,
        local_term,
        local_term_convention: "real part of db/dZ",
        total_coefficient: boundary_term + local_term,
        nonlocal: boundary_term > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_closed_form() {
        for radius in [1.0, 3.0, 7.5] {
            let lin = solve_linearized_with(radius, |_| 0.0, 10_000).unwrap();
            for (r, a) in lin.r.iter().zip(&lin.a) {
                assert!((a + 2.0 * r / (radius * radius)).abs() < 1e-8);
            }
            assert!((lin.boundary_value + 4.0 / radius).abs() < 1e-8);
            assert!(lin.neumann_residual() < 1e-8);
        }
    }

    #[test]
    fn boundary_term_is_half_pi_v_squared() {
        let mut lin = solve_linearized_with(3.0, |_| 0.0, 1000).unwrap();
        lin.boundary_value = 0.0;
        assert_eq!(boundary_metric_term(&lin), 0.0);
        lin.boundary_value = -0.3;
        assert!((boundary_metric_term(&lin) - 0.045 * PI).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(solve_linearized_with(0.0, |_| 0.0, 1000).is_err());
        assert!(solve_linearized_with(1.0, |_| 0.0, 10).is_err());
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let p = shoot(&disk, 2, &ShootOptions { steps: 2000, ..ShootOptions::default() }).unwrap();
        assert!(solve_linearized(&disk, &p).is_err());
    }

    #[test]
    fn loop_integral_of_circle() {
                let n = 64;
        let c: Vec<f64> = (0..n).map(|j| (j as f64 * std::f64::consts::TAU / n as f64).cos()).collect();
        let s: Vec<f64> = (0..n).map(|j| (j as f64 * std::f64::consts::TAU / n as f64).sin()).collect();
        let q = loop_integral(&c, &s);
        let step = std::f64::consts::TAU / n as f64;
        // Central differences of sin scale cos by sin(step)/step.
        assert!((q - PI * step.sin() / step).abs() < 1e-12, "{q}");
    }

    #[test]
    fn stencil_recovers_holomorphic_derivative() {
        // b(Z) = k Z has db/dZ = k
        let k = Complex64::new(0.3, -0.1);
        let d = 0.01;
        let i = Complex64::i();
        let got = db_dz_stencil(k * d, -k * d, k * i * d, -k * i * d, d);
        assert!((got - k).norm() < 1e-14);
        // b(Z) = conj(Z) has db/dZ = 0
        let got = db_dz_stencil(Complex64::new(d, 0.0), Complex64::new(-d, 0.0), -i * d, i * d, d);
        assert!(got.norm() < 1e-14);
    }

    fn centered(radius: f64) -> (ConformalDisk, RadialProfile, LinearizedProfile) {
        let disk = ConformalDisk::euclidean(radius).unwrap();
        let prof = shoot(&disk, 1, &ShootOptions::default()).unwrap();
        let lin = solve_linearized(&disk, &prof).unwrap();
        (disk, prof, lin)
    }

    #[test]
    fn minus_profile_slope_solves_the_forced_equation() {
        // On a flat disk, differentiating the radial equation shows that -h~'
        // solves the forced linear equation; integrate from its own seed and compare.
        let (disk, prof, _) = centered(3.0);
        let f = |r: f64| r * r * prof.interpolate(r).0.exp();
        let eps = 1e-3;
        let (h, p) = prof.interpolate(eps);
        let d2 = -p / eps + (eps * eps * h.exp() - 1.0);
        let (r, a, _) = integrate_linear(&f, disk.radius(), eps, 100_000, (-p, -d2), true);
        let worst = r
            .iter()
            .zip(&a)
            .map(|(&r, &a)| (a + prof.interpolate(r).1).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn boundary_value_is_nonzero_and_locked() {
        let (_, _, lin) = centered(3.0);
        assert!(lin.boundary_value.abs() > 1e-2);
        assert!((lin.boundary_value - (-0.372_046_563_741)).abs() < 1e-8, "{}", lin.boundary_value);
        assert!(lin.neumann_residual() < 1e-8);
        assert!(lin.a[0].abs() < 1e-5);
    }

    #[test]
    fn boundary_value_decays_on_large_disks() {
        let (_, _, small) = centered(3.0);
        let (_, _, large) = centered(12.0);
        assert!(large.boundary_value.abs() < small.boundary_value.abs());
    }

    fn grid128(disk: &ConformalDisk) -> PolarGrid {
        PolarGrid::new(disk, 128, 128).unwrap()
    }

    #[test]
    fn samols_b_vanishes_at_origin_and_derivative_is_real() {
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let est = samols_b(&disk, &grid128(&disk), Complex64::new(0.0, 0.0), 0.03, &SolveOptions::default())
            .unwrap();
        assert!(est.b.norm() < 1e-6, "{}", est.b);
        assert!(est.db_dz.im.abs() < 1e-3);
        // Agrees with the linearized prediction a'(0)/2 - Omega(0)/4.
        let (_, _, lin) = centered(3.0);
        let predicted = 0.5 * lin.slope_at_origin - 0.25;
        assert!((est.db_dz.re - predicted).abs() < 1e-3, "{} vs {predicted}", est.db_dz.re);
        assert!((est.db_dz_richardson - est.db_dz).norm() < 1e-3);
    }

    #[test]
    fn samols_b_reflects_with_conjugation() {
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let grid = grid128(&disk);
        let opts = SolveOptions::default();
        let z = Complex64::new(0.4, 0.25);
        let (_, up) = samols_b_at(&disk, &grid, z, &opts).unwrap();
        let (_, down) = samols_b_at(&disk, &grid, z.conj(), &opts).unwrap();
        assert!((up.b - down.b.conj()).norm() < 1e-8, "{} {}", up.b, down.b);
    }

    #[test]
    fn b_on_real_axis_is_real() {
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let (_, fit) = samols_b_at(&disk, &grid128(&disk), Complex64::new(0.03, 0.0), &SolveOptions::default())
            .unwrap();
        assert!(fit.b.im.abs() <= 1e-3 * fit.b.norm(), "{}", fit.b);
    }

    #[test]
    fn samols_fit_needs_a_single_interior_vortex() {
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let grid = PolarGrid::new(&disk, 16, 16).unwrap();
        let config = VortexConfiguration::on_boundary(&disk, 0.0, 1).unwrap();
        let sol = TaubesSolution::solve(&disk, &config, &grid, &SolveOptions::default()).unwrap();
        assert!(matches!(samols_fit(&sol), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn loop_closed_form_matches_boundary_quadrature() {
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let rep = metric_coefficient(&disk, &grid128(&disk), &MetricOptions::default()).unwrap();
        let rel = (rep.boundary_quadrature.integral - rep.loop_closed_form).abs() / rep.loop_closed_form;
        assert!(rel < 0.05, "{rel}");
        assert!(rep.boundary_term > 0.0 && rep.nonlocal);
        let assembled = rep.boundary_term + PI * (1.0 + 2.0 * rep.db_dz.re);
        assert!((rep.total_coefficient - assembled).abs() < 1e-14);
        // d_Y h on the circle is the rotated copy of d_X h.
        assert!(rep.boundary_quadrature.rotation_defect < 1e-3);
    }
}
