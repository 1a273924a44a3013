//! Disk domain, vortex configurations, the area gate and the polar grid.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of radial panels used for the area quadrature.
const AREA_PANELS: usize = 10_000;

/// Smallest admissible grid resolution in each direction.
pub const MIN_GRID: usize = 8;

/// Radial conformal factor of the metric `Omega(r) (dr^2 + r^2 dtheta^2)`.
#[derive(Clone)]
pub enum ConformalFactor {
    Euclidean,
    /// `(r, Omega)` samples, linearly interpolated and held constant past the ends.
    Sampled(Vec<(f64, f64)>),
    Profile(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for ConformalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Euclidean => write!(f, "Euclidean"),
            Self::Sampled(t) => f.debug_tuple("Sampled").field(t).finish(),
            Self::Profile(_) => write!(f, "Profile(..)"),
        }
    }
}

impl ConformalFactor {
    fn eval(&self, r: f64) -> f64 {
        match self {
            Self::Euclidean => 1.0,
            Self::Sampled(table) => interpolate_table(table, r),
            Self::Profile(f) => f(r),
        }
    }
}

fn interpolate_table(table: &[(f64, f64)], r: f64) -> f64 {
    let (first, last) = (table[0], table[table.len() - 1]);
    if r <= first.0 {
        return first.1;
    }
    if r >= last.0 {
        return last.1;
    }
    let k = table.partition_point(|&(rk, _)| rk <= r);
    let (r0, w0) = table[k - 1];
    let (r1, w1) = table[k];
    w0 + (w1 - w0) * (r - r0) / (r1 - r0)
}

/// A disk of radius `R` with a radial conformal factor.
#[derive(Debug, Clone)]
pub struct ConformalDisk {
    radius: f64,
    factor: ConformalFactor,
    area: f64,
}

impl ConformalDisk {
    pub fn euclidean(radius: f64) -> Result<Self> {
        Self::new(radius, ConformalFactor::Euclidean)
    }

    pub fn sampled(radius: f64, mut table: Vec<(f64, f64)>) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::InvalidDomain(
                "conformal factor table needs at least two samples".into(),
            ));
        }
        table.sort_by(|a, b| a.0.total_cmp(&b.0));
        if table.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidDomain(
                "conformal factor table has repeated radii".into(),
            ));
        }
        Self::new(radius, ConformalFactor::Sampled(table))
    }

    pub fn from_profile<F>(radius: f64, omega: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(radius, ConformalFactor::Profile(Arc::new(omega)))
    }

    pub fn new(radius: f64, factor: ConformalFactor) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let dr = radius / AREA_PANELS as f64;
        let mut sum = 0.0;
        for k in 0..AREA_PANELS {
            let r = (k as f64 + 0.5) * dr;
            let w = factor.eval(r);
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidDomain(format!(
                    "conformal factor must be positive, Omega({r}) = {w}"
                )));
            }
            sum += w * r;
        }
        for r in [0.0, radius] {
            let w = factor.eval(r);
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidDomain(format!(
                    "conformal factor must be positive, Omega({r}) = {w}"
                )));
            }
        }
        let area = match factor {
            ConformalFactor::Euclidean => PI * radius * radius,
            _ => TAU * sum * dr,
        };
        Ok(Self {
            radius,
            factor,
            area,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn omega(&self, r: f64) -> f64 {
        self.factor.eval(r)
    }

    pub fn factor(&self) -> &ConformalFactor {
        &self.factor
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self.factor, ConformalFactor::Euclidean)
    }

    /// Riemannian area `int Omega r dr dtheta`.
    pub fn area(&self) -> f64 {
        self.area
    }

    /// `A / 4pi`, exact (`R^2 / 4`) for the Euclidean disk.
    pub fn area_over_four_pi(&self) -> f64 {
        if self.is_euclidean() {
            0.25 * self.radius * self.radius
        } else {
            self.area / (4.0 * PI)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorVortex {
    pub position: Complex64,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryVortex {
    /// Angle on the circle `r = R`, normalized to `[0, 2pi)`.
    pub angle: f64,
    pub multiplicity: u32,
}

/// Interior and boundary vortex positions with multiplicities.
///
/// Coincident positions are merged by summing their multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct VortexConfiguration {
    interior: Vec<InteriorVortex>,
    boundary: Vec<BoundaryVortex>,
}

fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

impl VortexConfiguration {
    pub fn new(
        disk: &ConformalDisk,
        interior: impl IntoIterator<Item = (Complex64, u32)>,
        boundary: impl IntoIterator<Item = (f64, u32)>,
    ) -> Result<Self> {
        let radius = disk.radius();
        let merge_tol = 1e-12 * radius.max(1.0);

        let mut merged_interior: Vec<InteriorVortex> = Vec::new();
        for (position, multiplicity) in interior {
            if multiplicity == 0 {
                return Err(Error::InvalidConfiguration(
                    "multiplicities must be at least 1".into(),
                ));
            }
            if !(position.re.is_finite() && position.im.is_finite()) || position.norm() >= radius
            {
                return Err(Error::InvalidConfiguration(format!(
                    "interior vortex at {position} is not strictly inside the disk of radius {radius}"
                )));
            }
            match merged_interior
                .iter_mut()
                .find(|v| (v.position - position).norm() <= merge_tol)
            {
                Some(v) => v.multiplicity += multiplicity,
                None => merged_interior.push(InteriorVortex {
                    position,
                    multiplicity,
                }),
            }
        }

        let mut merged_boundary: Vec<BoundaryVortex> = Vec::new();
        for (angle, multiplicity) in boundary {
            if multiplicity == 0 {
                return Err(Error::InvalidConfiguration(
                    "multiplicities must be at least 1".into(),
                ));
            }
            if !angle.is_finite() {
                return Err(Error::InvalidConfiguration(format!(
                    "boundary vortex angle {angle} is not finite"
                )));
            }
            let angle = normalize_angle(angle);
            match merged_boundary.iter_mut().find(|v| {
                let d = (v.angle - angle).abs();
                d.min(TAU - d) <= 1e-12
            }) {
                Some(v) => v.multiplicity += multiplicity,
                None => merged_boundary.push(BoundaryVortex {
                    angle,
                    multiplicity,
                }),
            }
        }

        if merged_interior.is_empty() && merged_boundary.is_empty() {
            return Err(Error::InvalidConfiguration(
                "configuration must contain at least one vortex".into(),
            ));
        }
        Ok(Self {
            interior: merged_interior,
            boundary: merged_boundary,
        })
    }

    /// A single vortex of multiplicity `n` at the origin.
    pub fn centered(disk: &ConformalDisk, n: u32) -> Result<Self> {
        Self::new(disk, [(Complex64::new(0.0, 0.0), n)], [])
    }

    /// A single boundary vortex of multiplicity `m` at angle `theta`.
    pub fn on_boundary(disk: &ConformalDisk, theta: f64, m: u32) -> Result<Self> {
        Self::new(disk, [], [(theta, m)])
    }

    pub fn interior(&self) -> &[InteriorVortex] {
        &self.interior
    }

    pub fn boundary(&self) -> &[BoundaryVortex] {
        &self.boundary
    }

    /// Total interior multiplicity `N`.
    pub fn interior_count(&self) -> u32 {
        self.interior.iter().map(|v| v.multiplicity).sum()
    }

    /// Total boundary multiplicity `M`.
    pub fn boundary_count(&self) -> u32 {
        self.boundary.iter().map(|v| v.multiplicity).sum()
    }

    /// Rotate every vortex by `angle` about the origin.
    pub fn rotated(&self, angle: f64) -> Self {
        let phase = Complex64::from_polar(1.0, angle);
        Self {
            interior: self
                .interior
                .iter()
                .map(|v| InteriorVortex {
                    position: v.position * phase,
                    ..*v
                })
                .collect(),
            boundary: self
                .boundary
                .iter()
                .map(|v| BoundaryVortex {
                    angle: normalize_angle(v.angle + angle),
                    ..*v
                })
                .collect(),
        }
    }

    /// Mirror image under `z -> conj(z)`.
    pub fn reflected(&self) -> Self {
        Self {
            interior: self
                .interior
                .iter()
                .map(|v| InteriorVortex {
                    position: v.position.conj(),
                    ..*v
                })
                .collect(),
            boundary: self
                .boundary
                .iter()
                .map(|v| BoundaryVortex {
                    angle: normalize_angle(-v.angle),
                    ..*v
                })
                .collect(),
        }
    }
}

/// `A / 4pi - N - M/2`; a solution exists iff this is strictly positive.
pub fn bradlow_margin(config: &VortexConfiguration, disk: &ConformalDisk) -> f64 {
    disk.area_over_four_pi()
        - f64::from(config.interior_count())
        - 0.5 * f64::from(config.boundary_count())
}

/// Gate used by the solvers: the margin on success, [`Error::Bradlow`] otherwise.
pub fn check_bradlow(config: &VortexConfiguration, disk: &ConformalDisk) -> Result<f64> {
    let margin = bradlow_margin(config, disk);
    if margin > 0.0 {
        Ok(margin)
    } else {
        Err(Error::Bradlow { margin })
    }
}

/// Cell-centered polar grid, periodic in `theta`.
///
/// Radial nodes sit at `r_i = (i + 1/2) dr` for `i = 0..nr`, so the pole is a
/// cell face rather than a node. Field storage is row-major by radial index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarGrid {
    nr: usize,
    ntheta: usize,
    radius: f64,
}

impl PolarGrid {
    pub fn new(disk: &ConformalDisk, nr: usize, ntheta: usize) -> Result<Self> {
        if nr < MIN_GRID || ntheta < MIN_GRID {
            return Err(Error::GridTooCoarse {
                nr,
                ntheta,
                min: MIN_GRID,
            });
        }
        Ok(Self {
            nr,
            ntheta,
            radius: disk.radius(),
        })
    }

    pub fn nr(&self) -> usize {
        self.nr
    }

    pub fn ntheta(&self) -> usize {
        self.ntheta
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.nr * self.ntheta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dr(&self) -> f64 {
        self.radius / self.nr as f64
    }

    pub fn dtheta(&self) -> f64 {
        TAU / self.ntheta as f64
    }

    /// Radius of ring `i` (zero-based).
    pub fn r(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr()
    }

    /// Radius of the face between ring `i - 1` and ring `i`; `face_r(0) = 0`.
    pub fn face_r(&self, i: usize) -> f64 {
        i as f64 * self.dr()
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dtheta()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ntheta + j
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::from_polar(self.r(i), self.theta(j))
    }

    /// Euclidean cell area `r_i dr dtheta`.
    pub fn cell_area(&self, i: usize) -> f64 {
        self.r(i) * self.dr() * self.dtheta()
    }

    /// Grid with both spacings halved.
    pub fn refined(&self) -> Self {
        Self {
            nr: 2 * self.nr,
            ntheta: 2 * self.ntheta,
            radius: self.radius,
        }
    }

    /// Riemannian cell volumes `Omega(r_i) r_i dr dtheta`, one per ring.
    pub fn ring_volumes(&self, disk: &ConformalDisk) -> Vec<f64> {
        (0..self.nr)
            .map(|i| disk.omega(self.r(i)) * self.cell_area(i))
            .collect()
    }

    /// Discrete area `sum Omega V` consistent with the grid quadrature.
    pub fn discrete_area(&self, disk: &ConformalDisk) -> f64 {
        self.ring_volumes(disk).iter().sum::<f64>() * self.ntheta as f64
    }
}

/// Grid function stored row-major by radial index.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: PolarGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: PolarGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: PolarGrid, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..grid.nr() {
            for j in 0..grid.ntheta() {
                values.push(f(i, j));
            }
        }
        Self { grid, values }
    }

    pub fn from_values(grid: PolarGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &PolarGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn ring(&self, i: usize) -> &[f64] {
        let n = self.grid.ntheta();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// `sum value * Omega * cell_area`.
    pub fn integrate(&self, disk: &ConformalDisk) -> f64 {
        let vols = self.grid.ring_volumes(disk);
        (0..self.grid.nr())
            .map(|i| vols[i] * self.ring(i).iter().sum::<f64>())
            .sum()
    }

    /// Position of the maximum value as `(i, j)`.
    pub fn argmax(&self) -> (usize, usize) {
        let k = self
            .values
            .iter()
            .enumerate()
            .fold(0, |best, (k, &v)| if v > self.values[best] { k } else { best });
        (k / self.grid.ntheta(), k % self.grid.ntheta())
    }

    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
