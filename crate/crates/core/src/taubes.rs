//! Damped Newton solver for the regularized Taubes equation on the disk:
//!
//! ```text
//! lap_e h~ = Omega(r) (e^{h~ + v0} - 1),   d_r h~ = g  on r = R,
//! ```
//!
//! where `v0` and `g` come from [`SingularPart`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{check_bradlow, ConformalDisk, PolarGrid, ScalarField, VortexConfiguration};
use crate::linalg::{solve_shifted, CgOptions, NeumannLaplacian};
use crate::singular::SingularPart;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 50;
const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Bound on the infinity norm of the pointwise nonlinear residual.
    pub tol: f64,
    pub max_iter: usize,
    pub cg: CgOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            cg: CgOptions {
                rtol: 1e-12,
                ..CgOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// Infinity norm of the nonlinear residual, starting with the initial iterate.
    pub residual_history: Vec<f64>,
    /// Flux balance `|sum Omega (e^h - 1) V - sum g R dtheta|` at the final iterate.
    pub bc_residual: f64,
    pub converged: bool,
    pub damping_events: usize,
    pub cg_iterations: Vec<usize>,
    pub bradlow_margin: f64,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().unwrap_or(&f64::INFINITY)
    }
}

struct Problem<'a> {
    op: NeumannLaplacian,
    v0: &'a [f64],
    flux: &'a [f64],
    omega: Vec<f64>,
    nt: usize,
}

impl Problem<'_> {
    /// Pointwise residual of `h~ = base + w` and its infinity norm.
    fn residual(&self, base: f64, w: &[f64]) -> (Vec<f64>, f64) {
        let mut res = self.op.laplacian(w, self.flux);
        let mut norm: f64 = 0.0;
        for (k, r) in res.iter_mut().enumerate() {
            *r -= self.omega[k / self.nt] * ((base + w[k] + self.v0[k]).exp() - 1.0);
            norm = if r.is_finite() { norm.max(r.abs()) } else { f64::INFINITY };
        }
        (res, norm)
    }
}

/// Newton solve of the regularized equation; refuses configurations failing the area gate.
pub fn solve_taubes_2d(
    disk: &ConformalDisk,
    config: &VortexConfiguration,
    grid: &PolarGrid,
    opts: &SolveOptions,
) -> Result<(ScalarField, SolveReport)> {
    let margin = check_bradlow(config, disk)?;
    let singular = SingularPart::build(config, disk, grid);
    solve_with_singular(disk, grid, &singular, margin, opts)
}

pub(crate) fn solve_with_singular(
    disk: &ConformalDisk,
    grid: &PolarGrid,
    singular: &SingularPart,
    bradlow_margin: f64,
    opts: &SolveOptions,
) -> Result<(ScalarField, SolveReport)> {
    let nt = grid.ntheta();
    let problem = Problem {
        op: NeumannLaplacian::new(grid),
        v0: singular.v0().values(),
        flux: singular.neumann_data(),
        omega: (0..grid.nr()).map(|i| disk.omega(grid.r(i))).collect(),
        nt,
    };

    // The iterate is stored as `base + h` with ring 0 of `h` rebased to mean zero,
    // so the values nearest the pole carry small absolute rounding errors.
    // Constant start with max |phi|^2 = 1, so the first Jacobian shift is at most Omega.
    let mut base = -problem.v0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut h = vec![0.0; grid.len()];
    let (mut res, mut norm) = problem.residual(base, &h);
    let mut history = vec![norm];
    let mut damping_events = 0;
    let mut cg_iterations = Vec::new();
    let mut iterations = 0;

    while norm > opts.tol && iterations < opts.max_iter {
        iterations += 1;
        let shift: Vec<f64> = (0..h.len())
            .map(|k| problem.omega[k / nt] * (base + h[k] + problem.v0[k]).exp())
            .collect();
        // J d = -F with J = L_e - Omega e^h, i.e. A d = V F.
        let load: Vec<f64> = res
            .iter()
            .enumerate()
            .map(|(k, f)| f * problem.op.volume(k / nt))
            .collect();
        let (step, stats) = solve_shifted(&problem.op, &shift, &load, opts.cg)?;
        cg_iterations.push(stats.iterations);

        let mut lambda = 1.0;
        let mut accepted = None;
        for halving in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = h.iter().zip(&step).map(|(a, d)| a + lambda * d).collect();
            let (r, n) = problem.residual(base, &trial);
            if n < norm {
                if halving > 0 {
                    damping_events += 1;
                }
                accepted = Some((trial, r, n));
                break;
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((trial, _, _)) => {
                h = trial;
                let shift = h[..nt].iter().sum::<f64>() / nt as f64;
                base += shift;
                h.iter_mut().for_each(|v| *v -= shift);
                (res, norm) = problem.residual(base, &h);
                history.push(norm);
            }
            // No decrease along the Newton direction: stagnated at the rounding floor.
            None => break,
        }
    }

    let load: f64 = (0..grid.nr())
        .map(|i| {
            let v = problem.op.volume(i) * problem.omega[i];
            (0..nt)
                .map(|j| {
                    let k = i * nt + j;
                    (base + h[k] + problem.v0[k]).exp() - 1.0
                })
                .sum::<f64>()
                * v
        })
        .sum();
    let boundary: f64 = problem.flux.iter().sum::<f64>() * grid.radius() * grid.dtheta();
    let report = SolveReport {
        iterations,
        converged: norm <= opts.tol,
        residual_history: history,
        bc_residual: (load - boundary).abs(),
        damping_events,
        cg_iterations,
        bradlow_margin,
    };
    h.iter_mut().for_each(|v| *v += base);
    Ok((ScalarField::from_values(*grid, h)?, report))
}

/// `h = h~ + v0` nodewise.
pub fn reconstruct_h(htilde: &ScalarField, singular: &SingularPart) -> Result<ScalarField> {
    if htilde.grid() != singular.v0().grid() {
        return Err(Error::InvalidArgument("grids of h~ and v0 differ".into()));
    }
    let values = htilde
        .values()
        .iter()
        .zip(singular.v0().values())
        .map(|(a, b)| a + b)
        .collect();
    ScalarField::from_values(*htilde.grid(), values)
}

/// A solved configuration with everything needed for diagnostics.
#[derive(Debug, Clone)]
pub struct TaubesSolution {
    pub disk: ConformalDisk,
    pub config: VortexConfiguration,
    pub grid: PolarGrid,
    pub singular: SingularPart,
    pub htilde: ScalarField,
    pub report: SolveReport,
}

impl TaubesSolution {
    pub fn solve(
        disk: &ConformalDisk,
        config: &VortexConfiguration,
        grid: &PolarGrid,
        opts: &SolveOptions,
    ) -> Result<Self> {
        let margin = check_bradlow(config, disk)?;
        let singular = SingularPart::build(config, disk, grid);
        let (htilde, report) = solve_with_singular(disk, grid, &singular, margin, opts)?;
        Ok(Self {
            disk: disk.clone(),
            config: config.clone(),
            grid: *grid,
            singular,
            htilde,
            report,
        })
    }

    pub fn h(&self) -> ScalarField {
        reconstruct_h(&self.htilde, &self.singular).expect("grids agree by construction")
    }
}
