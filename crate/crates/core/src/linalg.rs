//! Flux-form Neumann Laplacian on the polar grid and its solvers.
//!
//! All matrices here are *volume weighted*: row `(i, j)` of the Euclidean
//! Laplacian is multiplied by the cell area `r_i dr dtheta`, which makes the
//! operator symmetric. The solver works with
//!
//! ```text
//! A u = -V (L_e u) + s V u,      s >= 0 nodewise,
//! ```
//!
//! which is symmetric positive semidefinite, and definite as soon as `s` is
//! nonzero somewhere. The boundary flux never enters `A`; it is a right-hand
//! side contribution `R dtheta g_j` on the outer ring.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::geometry::{PolarGrid, ScalarField};

/// Stencil weights of the volume-weighted Laplacian.
#[derive(Debug, Clone)]
pub struct NeumannLaplacian {
    grid: PolarGrid,
    /// `r_{i+1/2} dtheta / dr`, zero on the outer ring.
    outer: Vec<f64>,
    /// `r_{i-1/2} dtheta / dr`, zero on the first ring.
    inner: Vec<f64>,
    /// `dr / (r_i dtheta)`.
    angular: Vec<f64>,
    /// `r_i dr dtheta`.
    volume: Vec<f64>,
}

impl NeumannLaplacian {
    pub fn new(grid: &PolarGrid) -> Self {
        let (dr, dt) = (grid.dr(), grid.dtheta());
        let nr = grid.nr();
        let outer = (0..nr)
            .map(|i| {
                if i + 1 == nr {
                    0.0
                } else {
                    grid.face_r(i + 1) * dt / dr
                }
            })
            .collect();
        let inner = (0..nr).map(|i| grid.face_r(i) * dt / dr).collect();
        let angular = (0..nr).map(|i| dr / (grid.r(i) * dt)).collect();
        let volume = (0..nr).map(|i| grid.cell_area(i)).collect();
        Self {
            grid: *grid,
            outer,
            inner,
            angular,
            volume,
        }
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    /// Euclidean cell area of ring `i`.
    pub fn volume(&self, i: usize) -> f64 {
        self.volume[i]
    }

    /// `y = A u` with `A = -V L_e + diag(s V)`; `shift = None` means `s = 0`.
    pub fn apply(&self, u: &[f64], shift: Option<&[f64]>, y: &mut [f64]) {
        let (nr, nt) = (self.grid.nr(), self.grid.ntheta());
        for i in 0..nr {
            let (a_out, a_in, b, v) = (self.outer[i], self.inner[i], self.angular[i], self.volume[i]);
            for j in 0..nt {
                let k = i * nt + j;
                let c = u[k];
                let jp = if j + 1 == nt { 0 } else { j + 1 };
                let jm = if j == 0 { nt - 1 } else { j - 1 };
                let mut acc = b * ((c - u[i * nt + jp]) + (c - u[i * nt + jm]));
                if i + 1 < nr {
                    acc += a_out * (c - u[k + nt]);
                }
                if i > 0 {
                    acc += a_in * (c - u[k - nt]);
                }
                if let Some(s) = shift {
                    acc += s[k] * v * c;
                }
                y[k] = acc;
            }
        }
    }

    /// Pointwise Euclidean Laplacian with outward boundary flux `g_j = d_r u(R, theta_j)`.
    pub fn laplacian(&self, u: &[f64], flux: &[f64]) -> Vec<f64> {
        let (nr, nt) = (self.grid.nr(), self.grid.ntheta());
        let mut y = vec![0.0; u.len()];
        self.apply(u, None, &mut y);
        let boundary = self.grid.radius() * self.grid.dtheta();
        for (j, g) in flux.iter().enumerate() {
            y[(nr - 1) * nt + j] -= boundary * g;
        }
        for i in 0..nr {
            let inv = -1.0 / self.volume[i];
            for v in &mut y[i * nt..(i + 1) * nt] {
                *v *= inv;
            }
        }
        y
    }

    /// Right-hand side contribution of the boundary flux: `R dtheta g_j` on the outer ring.
    pub fn flux_load(&self, flux: &[f64]) -> Vec<f64> {
        let (nr, nt) = (self.grid.nr(), self.grid.ntheta());
        let mut b = vec![0.0; self.grid.len()];
        let w = self.grid.radius() * self.grid.dtheta();
        for j in 0..nt {
            b[(nr - 1) * nt + j] = w * flux[j];
        }
        b
    }
}

/// Exact solver for operators whose shift depends on `r` only.
///
/// A DFT in `theta` decouples the angular modes; each mode is a symmetric
/// tridiagonal system in `r`, factored once. Used as the preconditioner for
/// general shifts (ring-averaged), and it is the exact inverse when the shift is
/// rotationally symmetric.
pub struct RadialModeSolver {
    nr: usize,
    nt: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Per mode: Thomas-factored `(c', 1/denominator)` pairs, length `nr`.
    factors: Vec<(Vec<f64>, Vec<f64>)>,
    /// Off-diagonal `-outer[i]` (shared by all modes).
    lower: Vec<f64>,
    /// Mode zero is singular (pure Neumann) and solved on the mean-free subspace.
    singular_mode0: bool,
}

impl RadialModeSolver {
    pub fn new(op: &NeumannLaplacian, ring_shift: &[f64]) -> Result<Self> {
        let grid = op.grid;
        let (nr, nt) = (grid.nr(), grid.ntheta());
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(nt);
        let inverse = planner.plan_fft_inverse(nt);
        let singular_mode0 = ring_shift.iter().all(|&s| s == 0.0);
        let lower: Vec<f64> = (0..nr).map(|i| -op.outer[i]).collect();

        let mut factors = Vec::with_capacity(nt);
        for k in 0..nt {
            let angle = std::f64::consts::PI * k as f64 / nt as f64;
            let lam = 4.0 * angle.sin().powi(2);
            let diag: Vec<f64> = (0..nr)
                .map(|i| {
                    op.outer[i] + op.inner[i] + op.angular[i] * lam + ring_shift[i] * op.volume[i]
                })
                .collect();
            let start = usize::from(k == 0 && singular_mode0);
            let mut cp = vec![0.0; nr];
            let mut inv = vec![0.0; nr];
            for i in start..nr {
                let sub = if i > start { lower[i - 1] } else { 0.0 };
                let denom = diag[i] - sub * if i > start { cp[i - 1] } else { 0.0 };
                if !(denom.is_finite() && denom > 0.0) {
                    return Err(Error::LinearSolve(format!(
                        "nonpositive pivot {denom} in radial mode {k}"
                    )));
                }
                inv[i] = 1.0 / denom;
                cp[i] = lower[i] * inv[i];
            }
            factors.push((cp, inv));
        }
        Ok(Self {
            nr,
            nt,
            forward,
            inverse,
            factors,
            lower,
            singular_mode0,
        })
    }

    /// `x = M^{-1} b`.
    pub fn solve(&self, b: &[f64], x: &mut [f64]) {
        let (nr, nt) = (self.nr, self.nt);
        let mut spec: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        for row in spec.chunks_mut(nt) {
            self.forward.process(row);
        }
        if self.singular_mode0 {
            // Restrict mode zero to the range of the singular tridiagonal (sum zero).
            let mean = (0..nr).map(|i| spec[i * nt]).sum::<Complex64>() / nr as f64;
            for i in 0..nr {
                spec[i * nt] -= mean;
            }
        }
        for k in 0..nt {
            let (cp, inv) = &self.factors[k];
            let start = usize::from(k == 0 && self.singular_mode0);
            if start == 1 {
                spec[k] = Complex64::new(0.0, 0.0);
            }
            // Forward sweep.
            let mut prev = Complex64::new(0.0, 0.0);
            for i in start..nr {
                let sub = if i > start { self.lower[i - 1] } else { 0.0 };
                let d = (spec[i * nt + k] - prev * sub) * inv[i];
                spec[i * nt + k] = d;
                prev = d;
            }
            // Back substitution.
            for i in (start..nr.saturating_sub(1)).rev() {
                let next = spec[(i + 1) * nt + k];
                spec[i * nt + k] -= cp[i] * next;
            }
        }
        for row in spec.chunks_mut(nt) {
            self.inverse.process(row);
        }
        let scale = 1.0 / nt as f64;
        for (xi, s) in x.iter_mut().zip(&spec) {
            *xi = s.re * scale;
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CgOptions {
    /// Stop when `|r|_2 <= rtol |b|_2`.
    pub rtol: f64,
    /// Residual accepted when the iteration stagnates or runs out of iterations.
    pub accept_rtol: f64,
    pub max_iter: usize,
}

const STAGNATION_WINDOW: usize = 100;

impl Default for CgOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-13,
            accept_rtol: 1e-9,
            max_iter: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CgStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Preconditioned conjugate gradients for `A x = b`, starting from `x = 0`.
pub fn pcg(
    op: &NeumannLaplacian,
    shift: Option<&[f64]>,
    precond: &RadialModeSolver,
    b: &[f64],
    opts: CgOptions,
) -> Result<(Vec<f64>, CgStats)> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let bnorm = dot(b, b).sqrt();
    if bnorm == 0.0 {
        return Ok((
            x,
            CgStats {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    precond.solve(&r, &mut z);
    let mut p = z.clone();
    let mut q = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut checkpoint = 1.0;
    for it in 1..=opts.max_iter {
        op.apply(&p, shift, &mut q);
        let pq = dot(&p, &q);
        if !(pq.is_finite() && pq > 0.0) {
            return Err(Error::LinearSolve(format!(
                "operator not positive definite along search direction (p.Ap = {pq})"
            )));
        }
        let alpha = rz / pq;
        for k in 0..n {
            x[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        let rel = dot(&r, &r).sqrt() / bnorm;
        let stalled = it % STAGNATION_WINDOW == 0 && rel > 0.5 * checkpoint && rel <= opts.accept_rtol;
        if it % STAGNATION_WINDOW == 0 {
            checkpoint = rel;
        }
        if rel <= opts.rtol || stalled {
            return Ok((
                x,
                CgStats {
                    iterations: it,
                    relative_residual: rel,
                },
            ));
        }
        precond.solve(&r, &mut z);
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    let rel = dot(&r, &r).sqrt() / bnorm;
    if rel <= opts.accept_rtol {
        return Ok((
            x,
            CgStats {
                iterations: opts.max_iter,
                relative_residual: rel,
            },
        ));
    }
    Err(Error::LinearSolve(format!(
        "conjugate gradients did not converge in {} iterations (relative residual {rel:e})",
        opts.max_iter
    )))
}

/// Solve `A x = b` with `A = -V L_e + diag(shift V)`, preconditioned by the
/// ring-averaged shift.
pub fn solve_shifted(
    op: &NeumannLaplacian,
    shift: &[f64],
    b: &[f64],
    opts: CgOptions,
) -> Result<(Vec<f64>, CgStats)> {
    let nt = op.grid.ntheta();
    let ring_shift: Vec<f64> = shift
        .chunks(nt)
        .map(|row| row.iter().sum::<f64>() / nt as f64)
        .collect();
    let precond = RadialModeSolver::new(op, &ring_shift)?;
    pcg(op, Some(shift), &precond, b, opts)
}

/// Solve the pure Neumann problem `A x = b` (`sum b = 0` required) and return
/// the solution with zero mean against `weights` (one weight per ring).
pub fn solve_neumann(
    op: &NeumannLaplacian,
    b: &[f64],
    ring_weights: &[f64],
    opts: CgOptions,
) -> Result<(Vec<f64>, CgStats)> {
    let total: f64 = b.iter().sum();
    let scale = b.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if total.abs() > 1e-9 * scale * (b.len() as f64).sqrt() {
        return Err(Error::LinearSolve(format!(
            "Neumann problem is not solvable: load sums to {total:e}"
        )));
    }
    let mean = total / b.len() as f64;
    let b: Vec<f64> = b.iter().map(|v| v - mean).collect();
    let precond = RadialModeSolver::new(op, &vec![0.0; op.grid.nr()])?;
    let (mut x, stats) = pcg(op, None, &precond, &b, opts)?;
    project_mean_zero(op.grid(), &mut x, ring_weights);
    Ok((x, stats))
}

/// Subtract the weighted mean so that `sum_i w_i sum_j x_ij = 0`.
pub fn project_mean_zero(grid: &PolarGrid, x: &mut [f64], ring_weights: &[f64]) {
    let nt = grid.ntheta();
    let (mut num, mut den) = (0.0, 0.0);
    for (i, row) in x.chunks(nt).enumerate() {
        num += ring_weights[i] * row.iter().sum::<f64>();
        den += ring_weights[i] * nt as f64;
    }
    let mean = num / den;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

/// Convenience: pointwise Laplacian of a field with zero boundary flux.
pub fn laplacian_of(field: &ScalarField) -> Vec<f64> {
    let op = NeumannLaplacian::new(field.grid());
    op.laplacian(field.values(), &vec![0.0; field.grid().ntheta()])
}
