//! Acceptance gate: the ten numbered checks at 256 x 256.
//!
//! Run with `cargo test --release --test acceptance -- --nocapture` to see the
//! PASS/FAIL line of every criterion. Bounds are restated here as literals so a
//! drift in the suite's own tolerances cannot make a criterion easier.

use std::sync::OnceLock;

use neumann_vortex::verify::{CheckResult, Suite};

fn suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(|| Suite::new(256, 256).expect("256 x 256 is a valid suite resolution"))
}

fn run(id: u8) -> CheckResult {
    let r = suite().check(id).expect("ids 1..=10 exist");
    println!("{}", r.line());
    r
}

fn value(r: &CheckResult, label: &str) -> f64 {
    r.measurements
        .iter()
        .find(|m| m.label == label)
        .unwrap_or_else(|| panic!("check {} has no measurement {label:?}: {}", r.id, r.line()))
        .value
}

#[test]
fn criterion_01_interior_flux() {
    let r = run(1);
    assert!(r.passed, "{}", r.line());
    assert_eq!(value(&r, "Newton converged"), 1.0);
    assert!(value(&r, "|flux/2pi - 1|") <= 0.01);
    assert!(value(&r, "solve seconds") < 60.0);
}

#[test]
fn criterion_02_boundary_flux() {
    let r = run(2);
    assert!(r.passed, "{}", r.line());
    assert_eq!(value(&r, "Newton converged"), 1.0);
    assert!(value(&r, "|flux/pi - 1|") <= 0.015);
    assert!(value(&r, "solve seconds") < 60.0);
}

#[test]
fn criterion_03_energy() {
    let r = run(3);
    assert!(r.passed, "{}", r.line());
    assert!(value(&r, "|E/pi - 1| interior") <= 0.02);
    assert!(value(&r, "|E/(pi/2) - 1| boundary") <= 0.025);
    assert!(value(&r, "|E - flux/2|/flux interior") <= 1e-2);
    assert!(value(&r, "|E - flux/2|/flux boundary") <= 1e-2);
}

#[test]
fn criterion_04_bradlow_gate() {
    let r = run(4);
    assert!(r.passed, "{}", r.line());
    assert!(value(&r, "Newton iterations N=1") <= 50.0);
    assert!(value(&r, "Newton iterations N=2") <= 50.0);
    assert_eq!(value(&r, "refusal margin N=3"), -0.75);
    assert_eq!(value(&r, "refusal margin R=1 N=1"), -0.75);
}

#[test]
fn criterion_05_cross_solver() {
    let r = run(5);
    assert!(r.passed, "{}", r.line());
    assert!(value(&r, "max |h~_2D - h~_radial|") <= 5e-3);
    assert!(value(&r, "order n/4 -> n/2") >= 1.8);
    assert!(value(&r, "order n/2 -> n") >= 1.8);
}

#[test]
fn criterion_06_shooting() {
    let r = run(6);
    assert!(r.passed, "{}", r.line());
    assert!(value(&r, "|h~'(R) + 2/3|") <= 1e-6);
    assert!(value(&r, "|h0(steps) - h0(2 steps)|") < 1e-8);
}

#[test]
fn criterion_07_moduli() {
    let r = run(7);
    assert!(r.passed, "{}", r.line());
    assert!(value(&r, "|d_X h(R;0)|") > 1e-2);
    assert!(value(&r, "vacuum |a + 2r/R^2|") <= 1e-8);
    assert!(value(&r, "loop integral vs pi v^2 (rel)") <= 0.05);
}

#[test]
fn criterion_08_symmetry() {
    let r = run(8);
    assert!(r.passed, "{}", r.line());
    assert!(value(&r, "|b(0)|") <= 1e-6);
    assert!(value(&r, "angular variation, centered") <= 1e-9);
    assert!(value(&r, "reflection defect") <= 1e-9);
}

#[test]
fn criterion_09_boundary_energy_peak() {
    let r = run(9);
    assert!(r.passed, "{}", r.line());
    let dr = 3.0 / 256.0;
    assert!(value(&r, "r at argmax of energy density") < 3.0 - dr);
}

#[test]
fn criterion_10_green_functions() {
    let r = run(10);
    assert!(r.passed, "{}", r.line());
    assert!(value(&r, "|G_P(Q) - G_Q(P)|") <= 1e-10);
    assert!(value(&r, "interior slope rel. error") <= 0.05);
    assert!(value(&r, "boundary slope rel. error") <= 0.10);
}
