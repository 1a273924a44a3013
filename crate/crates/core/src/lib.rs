//! Abelian BPS vortices with Neumann boundary conditions on conformally flat disks.
//!
//! The crate solves the Taubes equation for prescribed interior and boundary
//! vortices, checks the flux and energy quantization of the solutions, and
//! computes the kinetic-energy metric data of a single vortex at the center of
//! a rotationally symmetric disk.
//!
//! | module | contents |
//! |---|---|
//! | [`geometry`] | disk, vortex configurations, area gate, polar grid |
//! | [`singular`] | logarithmic part `v0` and induced Neumann data |
//! | [`green`] | discrete Neumann Green functions |
//! | [`linalg`] | flux-form Laplacian, FFT-preconditioned CG |
//! | [`radial`] | shooting solver for the centered vortex |
//! | [`taubes`] | Newton solver on the full disk |
//! | [`diagnostics`] | magnetic field, energy density, quantization, export |
//! | [`moduli`] | linearized profile, boundary term, Samols coefficient |
//! | [`config`], [`runner`], [`verify`] | JSON configs, CLI commands, verification suite |

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod geometry;
pub mod green;
pub mod linalg;
pub mod moduli;
pub mod radial;
pub mod runner;
pub mod singular;
pub mod taubes;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{
    bradlow_margin, check_bradlow, ConformalDisk, PolarGrid, ScalarField, VortexConfiguration,
};
pub use num_complex::Complex64;
