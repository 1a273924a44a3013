//! The verification suite: ten numbered checks of quantization, the area gate,
//! solver agreement, moduli data, symmetry, and the discrete Green functions.
//!
//! Expensive runs are computed once per [`Suite`] and shared between checks.
//! Tolerances are stated for a 256 x 256 grid; on coarser grids the
//! discretization-limited ones are widened by `(256 / n)^2`, and the Green
//! functions are always resolved on at least the reference grid.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::diagnostics::ObservableSet;
use crate::error::Error;
use crate::geometry::{bradlow_margin, check_bradlow, ConformalDisk, PolarGrid, VortexConfiguration};
use crate::green::{boundary_log_slope, boundary_neumann_green, interior_log_slope, neumann_green};
use crate::moduli::{metric_coefficient, solve_linearized_with, MetricOptions, MetricReport};
use crate::radial::{shoot, RadialProfile, ShootOptions};
use crate::taubes::{SolveOptions, TaubesSolution};
use crate::Complex64;

pub const REFERENCE_RESOLUTION: usize = 256;
const RUNTIME_LIMIT: Duration = Duration::from_secs(60);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = "==")]
    Equals,
}

#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub label: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
}

impl Measurement {
    fn new(label: impl Into<String>, value: f64, relation: Relation, bound: f64) -> Self {
        Self {
            label: label.into(),
            value,
            relation,
            bound,
        }
    }

    pub fn holds(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.value <= self.bound,
            Relation::Below => self.value < self.bound,
            Relation::AtLeast => self.value >= self.bound,
            Relation::Above => self.value > self.bound,
            Relation::Equals => self.value == self.bound,
        }
    }

    fn symbol(&self) -> &'static str {
        match self.relation {
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::AtLeast => ">=",
            Relation::Above => ">",
            Relation::Equals => "==",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub measurements: Vec<Measurement>,
    /// Failure of a run the check depends on.
    pub error: Option<String>,
    pub seconds: f64,
}

impl CheckResult {
    fn from_measurements(id: u8, name: &'static str, measurements: Vec<Measurement>, started: Instant) -> Self {
        Self {
            id,
            name,
            passed: measurements.iter().all(Measurement::holds),
            measurements,
            error: None,
            seconds: started.elapsed().as_secs_f64(),
        }
    }

    fn failed(id: u8, name: &'static str, error: String, started: Instant) -> Self {
        Self {
            id,
            name,
            passed: false,
            measurements: Vec::new(),
            error: Some(error),
            seconds: started.elapsed().as_secs_f64(),
        }
    }

    /// `PASS [3] name: a = ... <= ...; b = ...`
    pub fn line(&self) -> String {
        let mut s = format!(
            "{} [{}] {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name
        );
        if let Some(e) = &self.error {
            let _ = write!(s, ": {e}");
        }
        for (k, m) in self.measurements.iter().enumerate() {
            let sep = if k == 0 { ": " } else { "; " };
            let mark = if m.holds() { "" } else { " (!)" };
            let _ = write!(s, "{sep}{} = {:.6e} {} {:.3e}{mark}", m.label, m.value, m.symbol(), m.bound);
        }
        s
    }
}

type Cached<T> = OnceLock<Result<T, String>>;

fn cached<T>(cell: &Cached<T>, f: impl FnOnce() -> crate::Result<T>) -> Result<&T, String> {
    cell.get_or_init(|| f().map_err(|e| e.to_string())).as_ref().map_err(Clone::clone)
}

struct Timed<T> {
    value: T,
    elapsed: Duration,
}

/// Shared state of one verification run at a fixed resolution.
pub struct Suite {
    nr: usize,
    ntheta: usize,
    solve: SolveOptions,
    shoot: ShootOptions,
    disk: ConformalDisk,
    centered: Cached<Timed<TaubesSolution>>,
    boundary: Cached<Timed<TaubesSolution>>,
    profile: Cached<RadialProfile>,
    metric: Cached<MetricReport>,
}

impl Suite {
    pub fn new(nr: usize, ntheta: usize) -> crate::Result<Self> {
        Self::with_options(nr, ntheta, SolveOptions::default(), ShootOptions::default())
    }

    pub fn with_options(
        nr: usize,
        ntheta: usize,
        solve: SolveOptions,
        shoot: ShootOptions,
    ) -> crate::Result<Self> {
        let disk = ConformalDisk::euclidean(3.0)?;
        // The convergence study runs at a quarter of the resolution.
        PolarGrid::new(&disk, nr / 4, ntheta / 4).map_err(|_| {
            Error::InvalidArgument(format!(
                "verification needs at least 32 x 32 (got {nr} x {ntheta})"
            ))
        })?;
        Ok(Self {
            nr,
            ntheta,
            solve,
            shoot,
            disk,
            centered: OnceLock::new(),
            boundary: OnceLock::new(),
            profile: OnceLock::new(),
            metric: OnceLock::new(),
        })
    }

    pub fn resolution(&self) -> (usize, usize) {
        (self.nr, self.ntheta)
    }

    /// Widening applied to discretization-limited tolerances.
    pub fn tolerance_scale(&self) -> f64 {
        let n = self.nr.min(self.ntheta) as f64;
        (REFERENCE_RESOLUTION as f64 / n).powi(2).max(1.0)
    }

    fn grid(&self) -> PolarGrid {
        PolarGrid::new(&self.disk, self.nr, self.ntheta).expect("validated in the constructor")
    }

    fn solve_timed(&self, config: &VortexConfiguration, grid: &PolarGrid) -> crate::Result<Timed<TaubesSolution>> {
        let t = Instant::now();
        let value = TaubesSolution::solve(&self.disk, config, grid, &self.solve)?;
        Ok(Timed {
            value,
            elapsed: t.elapsed(),
        })
    }

    fn centered(&self) -> Result<&Timed<TaubesSolution>, String> {
        cached(&self.centered, || {
            let config = VortexConfiguration::centered(&self.disk, 1)?;
            self.solve_timed(&config, &self.grid())
        })
    }

    fn boundary(&self) -> Result<&Timed<TaubesSolution>, String> {
        cached(&self.boundary, || {
            let config = VortexConfiguration::on_boundary(&self.disk, 0.0, 1)?;
            self.solve_timed(&config, &self.grid())
        })
    }

    fn profile(&self) -> Result<&RadialProfile, String> {
        cached(&self.profile, || shoot(&self.disk, 1, &self.shoot))
    }

    fn metric(&self) -> Result<&MetricReport, String> {
        cached(&self.metric, || {
            let opts = MetricOptions {
                delta: None,
                solve: self.solve,
                shoot: self.shoot,
            };
            metric_coefficient(&self.disk, &self.grid(), &opts)
        })
    }

    /// Check 1: Flux of the centered vortex.
    pub fn flux_interior(&self) -> CheckResult {
        let t = Instant::now();
        let name = "flux quantization, interior vortex";
        match self.centered() {
            Ok(run) => {
                let obs = ObservableSet::compute(&run.value);
                CheckResult::from_measurements(1, name, vec![
                    Measurement::new("Newton converged", f64::from(u8::from(run.value.report.converged)), Relation::Equals, 1.0),
                    Measurement::new("|flux/2pi - 1|", obs.flux_error(), Relation::AtMost, 0.01 * self.tolerance_scale()),
                    Measurement::new("solve seconds", run.elapsed.as_secs_f64(), Relation::Below, RUNTIME_LIMIT.as_secs_f64()),
                ], t)
            }
            Err(e) => CheckResult::failed(1, name, e, t),
        }
    }

    /// Check 2: Flux of the boundary half-vortex.
    pub fn flux_boundary(&self) -> CheckResult {
        let t = Instant::now();
        let name = "flux quantization, boundary half-vortex";
        match self.boundary() {
            Ok(run) => {
                let obs = ObservableSet::compute(&run.value);
                CheckResult::from_measurements(2, name, vec![
                    Measurement::new("Newton converged", f64::from(u8::from(run.value.report.converged)), Relation::Equals, 1.0),
                    Measurement::new("|flux/pi - 1|", obs.flux_error(), Relation::AtMost, 0.015 * self.tolerance_scale()),
                    Measurement::new("solve seconds", run.elapsed.as_secs_f64(), Relation::Below, RUNTIME_LIMIT.as_secs_f64()),
                ], t)
            }
            Err(e) => CheckResult::failed(2, name, e, t),
        }
    }

    /// Check 3: Energy quantization and the Bogomolny identity for both runs.
    pub fn energy(&self) -> CheckResult {
        let t = Instant::now();
        let name = "energy quantization";
        let (c, b) = match (self.centered(), self.boundary()) {
            (Ok(c), Ok(b)) => (c, b),
            (Err(e), _) | (_, Err(e)) => return CheckResult::failed(3, name, e, t),
        };
        let s = self.tolerance_scale();
        let oc = ObservableSet::compute(&c.value);
        let ob = ObservableSet::compute(&b.value);
        CheckResult::from_measurements(3, name, vec![
            Measurement::new("|E/pi - 1| interior", oc.energy_error(), Relation::AtMost, 0.02 * s),
            Measurement::new("|E/(pi/2) - 1| boundary", ob.energy_error(), Relation::AtMost, 0.025 * s),
            Measurement::new("|E - flux/2|/flux interior", oc.bogomolny_defect(), Relation::AtMost, 1e-2 * s),
            Measurement::new("|E - flux/2|/flux boundary", ob.bogomolny_defect(), Relation::AtMost, 1e-2 * s),
        ], t)
    }

    /// Check 4: Area gate decisions and convergence of admissible solves.
    pub fn bradlow_gate(&self) -> CheckResult {
        let t = Instant::now();
        let name = "Bradlow gate equivalence";
        let run = || -> crate::Result<Vec<Measurement>> {
            let disk = &self.disk;
            let mut m = Vec::new();
            let grid = self.grid();
            for n in [1, 2] {
                let config = VortexConfiguration::centered(disk, n)?;
                m.push(Measurement::new(format!("margin N={n}"), bradlow_margin(&config, disk), Relation::Above, 0.0));
                let sol = TaubesSolution::solve(disk, &config, &grid, &self.solve)?;
                let iters = if sol.report.converged { sol.report.iterations as f64 } else { f64::INFINITY };
                m.push(Measurement::new(format!("Newton iterations N={n}"), iters, Relation::AtMost, 50.0));
            }
            let three = VortexConfiguration::centered(disk, 3)?;
            let refused = match TaubesSolution::solve(disk, &three, &grid, &self.solve) {
                Err(Error::Bradlow { margin }) => margin,
                _ => f64::NAN,
            };
            m.push(Measurement::new("refusal margin N=3", refused, Relation::Equals, -0.75));
            let unit = ConformalDisk::euclidean(1.0)?;
            let one = VortexConfiguration::centered(&unit, 1)?;
            let refused = match check_bradlow(&one, &unit) {
                Err(Error::Bradlow { margin }) => margin,
                _ => f64::NAN,
            };
            m.push(Measurement::new("refusal margin R=1 N=1", refused, Relation::Equals, -0.75));
            Ok(m)
        };
        match run() {
            Ok(m) => CheckResult::from_measurements(4, name, m, t),
            Err(e) => CheckResult::failed(4, name, e.to_string(), t),
        }
    }

    /// Check 5: Shooting profile against the 2D field, and the observed order over three grids.
    pub fn cross_solver(&self) -> CheckResult {
        let t = Instant::now();
        let name = "cross-solver agreement";
        let run = || -> Result<Vec<Measurement>, String> {
            let profile = self.profile()?;
            let fine = &self.centered()?.value;
            let config = VortexConfiguration::centered(&self.disk, 1).map_err(|e| e.to_string())?;
            let mut errs = Vec::new();
            for k in [4, 2] {
                let grid = PolarGrid::new(&self.disk, self.nr / k, self.ntheta / k).map_err(|e| e.to_string())?;
                let sol = TaubesSolution::solve(&self.disk, &config, &grid, &self.solve).map_err(|e| e.to_string())?;
                errs.push(radial_deviation(&sol, profile));
            }
            errs.push(radial_deviation(fine, profile));
            let o1 = (errs[0] / errs[1]).log2();
            let o2 = (errs[1] / errs[2]).log2();
            Ok(vec![
                Measurement::new("max |h~_2D - h~_radial|", errs[2], Relation::AtMost, 5e-3 * self.tolerance_scale()),
                Measurement::new("order n/4 -> n/2", o1, Relation::AtLeast, 1.8),
                Measurement::new("order n/2 -> n", o2, Relation::AtLeast, 1.8),
            ])
        };
        match run() {
            Ok(m) => CheckResult::from_measurements(5, name, m, t),
            Err(e) => CheckResult::failed(5, name, e, t),
        }
    }

    /// Check 6: Shooting boundary slope and step-halving stability of `h0`.
    pub fn shooting(&self) -> CheckResult {
        let t = Instant::now();
        let name = "shooting setup";
        let run = || -> Result<Vec<Measurement>, String> {
            let profile = self.profile()?;
            let halved = ShootOptions {
                steps: 2 * self.shoot.steps,
                ..self.shoot
            };
            let fine = shoot(&self.disk, 1, &halved).map_err(|e| e.to_string())?;
            Ok(vec![
                Measurement::new("|h~'(R) + 2/3|", (profile.boundary_slope() + 2.0 / 3.0).abs(), Relation::AtMost, 1e-6),
                Measurement::new("|h0(steps) - h0(2 steps)|", (profile.h0 - fine.h0).abs(), Relation::Below, 1e-8),
            ])
        };
        match run() {
            Ok(m) => CheckResult::from_measurements(6, name, m, t),
            Err(e) => CheckResult::failed(6, name, e, t),
        }
    }

    /// Check 7: Nonzero boundary value, the vacuum oracle, and the boundary loop integral.
    pub fn moduli(&self) -> CheckResult {
        let t = Instant::now();
        let name = "moduli nonlocality witness";
        let run = || -> Result<Vec<Measurement>, String> {
            let rep = self.metric()?;
            let radius = self.disk.radius();
            let vac = solve_linearized_with(radius, |_| 0.0, self.shoot.steps).map_err(|e| e.to_string())?;
            let oracle = vac
                .r
                .iter()
                .zip(&vac.a)
                .map(|(r, a)| (a + 2.0 * r / (radius * radius)).abs())
                .fold(0.0, f64::max);
            let rel = (rep.boundary_quadrature.integral - rep.loop_closed_form).abs() / rep.loop_closed_form;
            Ok(vec![
                Measurement::new("|d_X h(R;0)|", rep.boundary_value.abs(), Relation::Above, 1e-2),
                Measurement::new("vacuum |a + 2r/R^2|", oracle, Relation::AtMost, 1e-8),
                Measurement::new("loop integral vs pi v^2 (rel)", rel, Relation::AtMost, 0.05),
            ])
        };
        match run() {
            Ok(m) => CheckResult::from_measurements(7, name, m, t),
            Err(e) => CheckResult::failed(7, name, e, t),
        }
    }

    /// Check 8: `b(0) = 0`, rotational invariance of the centered solution,
    /// reflection symmetry, and exact equivariance under grid rotations.
    pub fn symmetry(&self) -> CheckResult {
        let t = Instant::now();
        let name = "symmetry suite";
        let run = || -> Result<Vec<Measurement>, String> {
            let rep = self.metric()?;
            let centered = &self.centered()?.value;
            let grid = self.grid();
            let variance = (0..grid.nr())
                .map(|i| {
                    let ring = centered.htilde.ring(i);
                    let hi = ring.iter().copied().fold(f64::MIN, f64::max);
                    let lo = ring.iter().copied().fold(f64::MAX, f64::min);
                    hi - lo
                })
                .fold(0.0, f64::max);

            let e = |x: crate::Error| x.to_string();
            let config = VortexConfiguration::new(&self.disk, [(Complex64::new(1.0, 0.0), 1)], [(PI, 1)]).map_err(e)?;
            let sol = TaubesSolution::solve(&self.disk, &config, &grid, &self.solve).map_err(e)?;
            let nt = grid.ntheta();
            let mut reflection: f64 = 0.0;
            for i in 0..grid.nr() {
                for j in 0..nt {
                    let d = sol.htilde.at(i, j) - sol.htilde.at(i, (nt - j) % nt);
                    reflection = reflection.max(d.abs());
                }
            }

            let shift = nt / 8;
            let rotated_config = config.rotated(shift as f64 * grid.dtheta());
            let rotated = TaubesSolution::solve(&self.disk, &rotated_config, &grid, &self.solve).map_err(e)?;
            let mut rotation: f64 = 0.0;
            for i in 0..grid.nr() {
                for j in 0..nt {
                    let d = rotated.htilde.at(i, (j + shift) % nt) - sol.htilde.at(i, j);
                    rotation = rotation.max(d.abs());
                }
            }
            Ok(vec![
                Measurement::new("|b(0)|", rep.samols_b.norm(), Relation::AtMost, 1e-6),
                Measurement::new("angular variation, centered", variance, Relation::AtMost, 1e-9),
                Measurement::new("reflection defect", reflection, Relation::AtMost, 1e-9),
                Measurement::new("rotation equivariance defect", rotation, Relation::AtMost, 1e-9),
            ])
        };
        match run() {
            Ok(m) => CheckResult::from_measurements(8, name, m, t),
            Err(e) => CheckResult::failed(8, name, e, t),
        }
    }

    /// Check 9: The energy density of the boundary run peaks inside the disk.
    pub fn boundary_energy_peak(&self) -> CheckResult {
        let t = Instant::now();
        let name = "boundary-vortex energy peak";
        match self.boundary() {
            Ok(run) => {
                let obs = ObservableSet::compute(&run.value);
                let (i, _) = obs.energy_density.argmax();
                let grid = &run.value.grid;
                CheckResult::from_measurements(9, name, vec![Measurement::new(
                    "r at argmax of energy density",
                    grid.r(i),
                    Relation::Below,
                    grid.radius() - grid.dr(),
                )], t)
            }
            Err(e) => CheckResult::failed(9, name, e, t),
        }
    }

    /// Check 10: Symmetry and logarithmic slopes of the discrete Green functions.
    pub fn green(&self) -> CheckResult {
        let t = Instant::now();
        let name = "Green-function suite";
        let run = || -> crate::Result<Vec<Measurement>> {
            // Slope fits need a fine grid whatever the suite resolution; these solves are cheap.
            let grid = PolarGrid::new(
                &self.disk,
                self.nr.max(REFERENCE_RESOLUTION),
                self.ntheta.max(REFERENCE_RESOLUTION),
            )?;
            let (p, q) = ((grid.nr() / 8, 1), (3 * grid.nr() / 4, grid.ntheta() / 3));
            let gp = neumann_green(&self.disk, &grid, p)?;
            let gq = neumann_green(&self.disk, &grid, q)?;
            let asym = (gp.at(q.0, q.1) - gq.at(p.0, p.1)).abs();
            let g0 = neumann_green(&self.disk, &grid, (0, 0))?;
            let s_int = interior_log_slope(&g0, (0, 0));
            let h = boundary_neumann_green(&self.disk, &grid, 0.0)?;
            let s_bnd = boundary_log_slope(&h, 0);
            let e_int = -1.0 / (2.0 * PI);
            let e_bnd = -1.0 / PI;
            Ok(vec![
                Measurement::new("|G_P(Q) - G_Q(P)|", asym, Relation::AtMost, 1e-10),
                Measurement::new("interior slope rel. error", ((s_int - e_int) / e_int).abs(), Relation::AtMost, 0.05),
                Measurement::new("boundary slope rel. error", ((s_bnd - e_bnd) / e_bnd).abs(), Relation::AtMost, 0.10),
            ])
        };
        match run() {
            Ok(m) => CheckResult::from_measurements(10, name, m, t),
            Err(e) => CheckResult::failed(10, name, e.to_string(), t),
        }
    }

    pub fn check(&self, id: u8) -> Option<CheckResult> {
        Some(match id {
            1 => self.flux_interior(),
            2 => self.flux_boundary(),
            3 => self.energy(),
            4 => self.bradlow_gate(),
            5 => self.cross_solver(),
            6 => self.shooting(),
            7 => self.moduli(),
            8 => self.symmetry(),
            9 => self.boundary_energy_peak(),
            10 => self.green(),
            _ => return None,
        })
    }

    pub fn run_all(&self) -> Vec<CheckResult> {
        (1..=10).filter_map(|id| self.check(id)).collect()
    }
}

/// `max |h~_2D(r_i, theta_j) - h~_radial(r_i)|` over the grid.
pub fn radial_deviation(sol: &TaubesSolution, profile: &RadialProfile) -> f64 {
    let grid = &sol.grid;
    (0..grid.nr())
        .map(|i| {
            let (v, _) = profile.interpolate(grid.r(i));
            sol.htilde.ring(i).iter().map(|x| (x - v).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Gate-only outcome for configurations that fail the area bound: no solve is attempted.
pub fn gate_only(config: &VortexConfiguration, disk: &ConformalDisk) -> CheckResult {
    let t = Instant::now();
    let margin = bradlow_margin(config, disk);
    let refused = matches!(check_bradlow(config, disk), Err(Error::Bradlow { .. }));
    CheckResult::from_measurements(4, "Bradlow gate equivalence", vec![
        Measurement::new("margin", margin, Relation::AtMost, 0.0),
        Measurement::new("solve refused", f64::from(u8::from(refused)), Relation::Equals, 1.0),
    ], t)
}

pub fn table(results: &[CheckResult]) -> String {
    let mut s = String::new();
    for r in results {
        s.push_str(&r.line());
        s.push('\n');
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(s, "{passed}/{} checks passed", results.len());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measurement_relations() {
        assert!(Measurement::new("a", 1.0, Relation::AtMost, 1.0).holds());
        assert!(!Measurement::new("a", 1.0, Relation::Below, 1.0).holds());
        assert!(Measurement::new("a", 2.0, Relation::Above, 1.0).holds());
        assert!(!Measurement::new("a", f64::NAN, Relation::AtMost, 1.0).holds());
        assert!(!Measurement::new("a", f64::NAN, Relation::Equals, f64::NAN).holds());
    }

    #[test]
    fn line_format() {
        let r = CheckResult::from_measurements(
            2,
            "x",
            vec![Measurement::new("v", 0.5, Relation::AtMost, 0.25)],
            Instant::now(),
        );
        assert!(!r.passed);
        assert!(r.line().starts_with("FAIL [2] x: v = 5.000000e-1 <= 2.500e-1 (!)"), "{}", r.line());
    }

    #[test]
    fn tolerance_scale_widens_on_coarse_grids() {
        assert_eq!(Suite::new(256, 256).unwrap().tolerance_scale(), 1.0);
        assert_eq!(Suite::new(64, 64).unwrap().tolerance_scale(), 16.0);
        assert_eq!(Suite::new(512, 512).unwrap().tolerance_scale(), 1.0);
        assert!(Suite::new(16, 16).is_err());
    }

    #[test]
    fn coarse_suite_passes() {
        let suite = Suite::new(64, 64).unwrap();
        let failed: Vec<String> = suite
            .run_all()
            .iter()
            .filter(|r| !r.passed)
            .map(CheckResult::line)
            .collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn gate_only_reports_refusal() {
        let disk = ConformalDisk::euclidean(3.0).unwrap();
        let config = VortexConfiguration::centered(&disk, 3).unwrap();
        let r = gate_only(&config, &disk);
        assert!(r.passed);
        assert_eq!(r.measurements[0].value, -0.75);
    }
}
