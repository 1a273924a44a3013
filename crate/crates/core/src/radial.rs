//! Centered vortex of multiplicity `n` as a radial two-point boundary value
//! problem, solved by shooting on the central value `h0`.
//!
//! The regular part `h~ = h - 2n log r` satisfies
//!
//! ```text
//! h~'' + h~'/r = Omega(r) (r^{2n} e^{h~} - 1),   h~'(0) = 0,   h~'(R) = -2n/R.
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{check_bradlow, ConformalDisk, VortexConfiguration};

pub const DEFAULT_EPSILON: f64 = 1e-8;
pub const DEFAULT_STEPS: usize = 100_000;
pub const DEFAULT_TOL: f64 = 1e-6;

/// Solution of one radial initial value problem (converged or not).
#[derive(Debug, Clone, Serialize)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    pub htilde: Vec<f64>,
    pub dhtilde: Vec<f64>,
    pub h0: f64,
    pub n: u32,
    pub converged: bool,
    pub diverged: bool,
    /// `|h~'(R) + 2n/R|`.
    pub residual: f64,
    #[serde(skip)]
    omega: Vec<f64>,
}

/// Taylor data `(h~(eps), h~'(eps))` at the start of the integration.
///
/// For `n = 1` on a flat core the quartic term is kept; otherwise only
/// `h0 - Omega(0) r^2 / 4`.
pub fn taylor_seed(h0: f64, eps: f64, n: u32, omega0: f64) -> (f64, f64) {
    if n == 1 && omega0 == 1.0 {
        let e = h0.exp();
        (
            h0 - eps * eps / 4.0 + e * eps.powi(4) / 16.0,
            -eps / 2.0 + e * eps.powi(3) / 4.0,
        )
    } else {
        (h0 - omega0 * eps * eps / 4.0, -omega0 * eps / 2.0)
    }
}

fn rhs(r: f64, h: f64, p: f64, n: u32, omega: f64) -> (f64, f64) {
    let core = (h + 2.0 * f64::from(n) * r.ln()).exp();
    (p, -p / r + omega * (core - 1.0))
}

/// Classical RK4 from `eps` to `R` with `steps` equal steps.
pub fn integrate_radial(
    h0: f64,
    disk: &ConformalDisk,
    n: u32,
    eps: f64,
    steps: usize,
) -> Result<RadialProfile> {
    let radius = disk.radius();
    if !(eps > 0.0 && eps < radius) {
        return Err(Error::InvalidArgument(format!(
            "start point {eps} must lie in (0, R)"
        )));
    }
    if steps < 1000 {
        return Err(Error::InvalidArgument(format!(
            "at least 1000 integration steps required, got {steps}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("multiplicity must be at least 1".into()));
    }
    let dr = (radius - eps) / steps as f64;
    let omega_at = |r: f64| disk.omega(r);
    let (mut h, mut p) = taylor_seed(h0, eps, n, omega_at(0.0));

    let mut rs = Vec::with_capacity(steps + 1);
    let mut hs = Vec::with_capacity(steps + 1);
    let mut ps = Vec::with_capacity(steps + 1);
    let mut om = Vec::with_capacity(steps + 1);
    rs.push(eps);
    hs.push(h);
    ps.push(p);
    om.push(omega_at(eps));
    let mut diverged = false;
    for k in 0..steps {
        let r = eps + k as f64 * dr;
        let rm = r + 0.5 * dr;
        let r1 = if k + 1 == steps { radius } else { eps + (k + 1) as f64 * dr };
        let (w0, wm, w1) = (om[k], omega_at(rm), omega_at(r1));
        let k1 = rhs(r, h, p, n, w0);
        let k2 = rhs(rm, h + 0.5 * dr * k1.0, p + 0.5 * dr * k1.1, n, wm);
        let k3 = rhs(rm, h + 0.5 * dr * k2.0, p + 0.5 * dr * k2.1, n, wm);
        let k4 = rhs(r1, h + dr * k3.0, p + dr * k3.1, n, w1);
        h += dr / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        p += dr / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        if !(h.is_finite() && p.is_finite()) || h + 2.0 * f64::from(n) * r1.ln() > 700.0 {
            diverged = true;
            break;
        }
        rs.push(r1);
        hs.push(h);
        ps.push(p);
        om.push(w1);
    }
    let residual = if diverged {
        f64::INFINITY
    } else {
        (ps[steps] + 2.0 * f64::from(n) / radius).abs()
    };
    Ok(RadialProfile {
        r: rs,
        htilde: hs,
        dhtilde: ps,
        h0,
        n,
        converged: false,
        diverged,
        residual,
        omega: om,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct ShootOptions {
    pub tol: f64,
    pub steps: usize,
    pub epsilon: f64,
    pub scan_lo: f64,
    pub scan_hi: f64,
    pub scan_points: usize,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            steps: DEFAULT_STEPS,
            epsilon: DEFAULT_EPSILON,
            scan_lo: -50.0,
            scan_hi: 5.0,
            scan_points: 23,
        }
    }
}

/// Boundary mismatch `F(h0) = h~'(R) + 2n/R`; `+inf` when the integration blows up.
pub fn mismatch(h0: f64, disk: &ConformalDisk, n: u32, opts: &ShootOptions) -> Result<f64> {
    let p = integrate_radial(h0, disk, n, opts.epsilon, opts.steps)?;
    Ok(if p.diverged {
        f64::INFINITY
    } else {
        p.boundary_slope() + 2.0 * f64::from(n) / disk.radius()
    })
}

/// Shoot for the centered vortex after passing the area gate.
pub fn shoot(disk: &ConformalDisk, n: u32, opts: &ShootOptions) -> Result<RadialProfile> {
    let config = VortexConfiguration::centered(disk, n)?;
    check_bradlow(&config, disk)?;
    shoot_unchecked(disk, n, opts)
}

/// Shooting without the area gate; fails with [`Error::BracketFailure`] when
/// the scan finds no sign change.
pub fn shoot_unchecked(disk: &ConformalDisk, n: u32, opts: &ShootOptions) -> Result<RadialProfile> {
    let points = opts.scan_points.max(2);
    let step = (opts.scan_hi - opts.scan_lo) / (points - 1) as f64;
    let mut bracket = None;
    let mut prev = (opts.scan_lo, mismatch(opts.scan_lo, disk, n, opts)?);
    for k in 1..points {
        let h0 = opts.scan_lo + k as f64 * step;
        let f = mismatch(h0, disk, n, opts)?;
        if prev.1 <= 0.0 && f >= 0.0 {
            bracket = Some((prev.0, h0));
            break;
        }
        prev = (h0, f);
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::BracketFailure {
        lo: opts.scan_lo,
        hi: opts.scan_hi,
    })?;

    // Bisect to the resolution of h0 itself, well past |F| <= tol.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mismatch(mid, disk, n, opts)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (mismatch(lo, disk, n, opts)?, mismatch(hi, disk, n, opts)?);
    let h0 = if flo.abs() <= fhi.abs() { lo } else { hi };
    let mut profile = integrate_radial(h0, disk, n, opts.epsilon, opts.steps)?;
    if profile.diverged || profile.residual > opts.tol {
        return Err(Error::BracketFailure { lo, hi });
    }
    profile.converged = true;
    Ok(profile)
}

impl RadialProfile {
    pub fn boundary_slope(&self) -> f64 {
        *self.dhtilde.last().expect("profile has nodes")
    }

    pub fn radius(&self) -> f64 {
        *self.r.last().expect("profile has nodes")
    }

    /// Cubic Hermite interpolation of `(h~, h~')` at `r`; clamps to the end nodes.
    pub fn interpolate(&self, r: f64) -> (f64, f64) {
        let last = self.r.len() - 1;
        if r <= self.r[0] {
            return (self.htilde[0], self.dhtilde[0]);
        }
        if r >= self.r[last] {
            return (self.htilde[last], self.dhtilde[last]);
        }
        let k = self.r.partition_point(|&x| x <= r).min(last) - 1;
        let (r0, r1) = (self.r[k], self.r[k + 1]);
        let dx = r1 - r0;
        let t = (r - r0) / dx;
        let (y0, y1) = (self.htilde[k], self.htilde[k + 1]);
        let (m0, m1) = (self.dhtilde[k] * dx, self.dhtilde[k + 1] * dx);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let slope = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / dx;
        (value, slope)
    }

    /// `|phi|^2 = r^{2n} e^{h~}` at node `k`.
    pub fn phi_sq(&self, k: usize) -> f64 {
        (self.htilde[k] + 2.0 * f64::from(self.n) * self.r[k].ln()).exp()
    }

    pub fn magnetic_field(&self, k: usize) -> f64 {
        0.5 * (1.0 - self.phi_sq(k))
    }

    /// `B^2 + e^h |h'|^2 / (4 Omega)` with `h' = h~' + 2n/r`.
    pub fn energy_density(&self, k: usize) -> f64 {
        let b = self.magnetic_field(k);
        let dh = self.dhtilde[k] + 2.0 * f64::from(self.n) / self.r[k];
        b * b + 0.25 * self.phi_sq(k) * dh * dh / self.omega[k]
    }

    /// `Omega(r_k)` as used by the integrator.
    pub fn omega(&self, k: usize) -> f64 {
        self.omega[k]
    }

    /// `max_k |phi|^2`.
    pub fn max_phi_sq(&self) -> f64 {
        (0..self.r.len()).map(|k| self.phi_sq(k)).fold(0.0, f64::max)
    }
}
