//! Traveling waves of cells that climb gradients they create themselves.
//!
//! [`model`] holds the PDE family, [`analytic`] the closed-form waves and
//! speed laws, [`solver`] the finite-volume integrator, [`diagnostics`] the
//! measurements taken from runs and [`scenarios`] the named presets and the
//! configuration format.

// `!(x > y)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod diagnostics;
pub mod io;
pub mod model;
pub mod scenarios;
pub mod solver;

pub use analytic::{SpeedResult, WaveProfile};
pub use diagnostics::RunReport;
pub use model::ModelSpec;
pub use scenarios::{preset, ScenarioPreset};
pub use solver::{BoundarySpec, FieldState, Grid1D, SimConfig};
