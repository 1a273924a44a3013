//! JSON run configuration.
//!
//! ```json
//! {
//!   "radius": 3.0,
//!   "omega": "euclidean",
//!   "interior": [{"x": 0.0, "y": 0.0, "n": 1}],
//!   "boundary": [{"theta": 0.0, "m": 1}],
//!   "grid": {"nr": 256, "ntheta": 256},
//!   "solver": {"tol": 1e-8, "max_iter": 50},
//!   "outputs": {"dir": "out", "formats": ["csv", "json"]}
//! }
//! ```
//!
//! `omega` is either `"euclidean"` or a table `[[r, omega], ...]` interpolated
//! linearly. Unknown fields are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ConformalDisk, PolarGrid, VortexConfiguration};
use crate::radial::ShootOptions;
use crate::taubes::{SolveOptions, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::Complex64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaSpec {
    Named(String),
    Table(Vec<(f64, f64)>),
}

impl Default for OmegaSpec {
    fn default() -> Self {
        Self::Named("euclidean".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteriorSpec {
    pub x: f64,
    pub y: f64,
    #[serde(default = "one")]
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub theta: f64,
    #[serde(default = "one")]
    pub m: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub nr: usize,
    pub ntheta: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { nr: 256, ntheta: 256 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSpec {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json],
        }
    }
}

impl OutputSpec {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// Options of the radial shooting command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShootingSpec {
    pub steps: usize,
    pub tol: f64,
    /// Scan range for the shooting parameter `h0`.
    pub scan_lo: f64,
    pub scan_hi: f64,
    /// Rows kept in `profile.csv` (the profile is subsampled evenly).
    pub csv_rows: usize,
}

impl Default for ShootingSpec {
    fn default() -> Self {
        let d = ShootOptions::default();
        Self {
            steps: d.steps,
            tol: d.tol,
            scan_lo: d.scan_lo,
            scan_hi: d.scan_hi,
            csv_rows: 2001,
        }
    }
}

/// Options of the metric command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct MetricSpec {
    /// Stencil half-width for `db/dZ`; defaults to `R/100`.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub radius: f64,
    #[serde(default)]
    pub omega: OmegaSpec,
    #[serde(default)]
    pub interior: Vec<InteriorSpec>,
    #[serde(default)]
    pub boundary: Vec<BoundarySpec>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
    #[serde(default)]
    pub shooting: ShootingSpec,
    #[serde(default)]
    pub metric: MetricSpec,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Builds every derived object once so that errors surface before any solve.
    pub fn validate(&self) -> Result<()> {
        let disk = self.disk()?;
        self.configuration_on(&disk)?;
        self.grid_on(&disk)?;
        if !(self.solver.tol > 0.0) || self.solver.max_iter == 0 {
            return Err(Error::Config("solver.tol must be positive and solver.max_iter nonzero".into()));
        }
        let sh = &self.shooting;
        if sh.steps < 1000 || !(sh.tol > 0.0) || !(sh.scan_lo < sh.scan_hi) || sh.csv_rows < 2 {
            return Err(Error::Config(
                "shooting needs steps >= 1000, tol > 0, scan_lo < scan_hi and csv_rows >= 2".into(),
            ));
        }
        if let Some(d) = self.metric.delta {
            if !(d > 0.0 && d < self.radius) {
                return Err(Error::Config(format!("metric.delta {d} must lie in (0, R)")));
            }
        }
        if self.outputs.dir.as_os_str().is_empty() {
            return Err(Error::Config("outputs.dir is empty".into()));
        }
        Ok(())
    }

    pub fn disk(&self) -> Result<ConformalDisk> {
        let disk = match &self.omega {
            OmegaSpec::Named(name) if name == "euclidean" => ConformalDisk::euclidean(self.radius),
            OmegaSpec::Named(name) => {
                return Err(Error::Config(format!(
                    "unknown conformal factor {name:?}; use \"euclidean\" or a table"
                )))
            }
            OmegaSpec::Table(t) => ConformalDisk::sampled(self.radius, t.clone()),
        };
        disk.map_err(|e| Error::Config(e.to_string()))
    }

    fn configuration_on(&self, disk: &ConformalDisk) -> Result<VortexConfiguration> {
        VortexConfiguration::new(
            disk,
            self.interior.iter().map(|v| (Complex64::new(v.x, v.y), v.n)),
            self.boundary.iter().map(|v| (v.theta, v.m)),
        )
        .map_err(|e| Error::Config(e.to_string()))
    }

    fn grid_on(&self, disk: &ConformalDisk) -> Result<PolarGrid> {
        PolarGrid::new(disk, self.grid.nr, self.grid.ntheta).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn configuration(&self) -> Result<VortexConfiguration> {
        self.configuration_on(&self.disk()?)
    }

    pub fn polar_grid(&self) -> Result<PolarGrid> {
        self.grid_on(&self.disk()?)
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            ..SolveOptions::default()
        }
    }

    pub fn shoot_options(&self) -> ShootOptions {
        ShootOptions {
            steps: self.shooting.steps,
            tol: self.shooting.tol,
            scan_lo: self.shooting.scan_lo,
            scan_hi: self.shooting.scan_hi,
            ..ShootOptions::default()
        }
    }

    /// Command-line overrides, re-validated.
    pub fn with_overrides(
        mut self,
        nr: Option<usize>,
        ntheta: Option<usize>,
        tol: Option<f64>,
        out: Option<PathBuf>,
    ) -> Result<Self> {
        if let Some(v) = nr {
            self.grid.nr = v;
        }
        if let Some(v) = ntheta {
            self.grid.ntheta = v;
        }
        if let Some(v) = tol {
            self.solver.tol = v;
        }
        if let Some(v) = out {
            self.outputs.dir = v;
        }
        self.validate()?;
        Ok(self)
    }
}
