//! Closed-form traveling waves and wave-speed laws.
//!
//! Four constructions are provided, all in the moving frame `z = x − ct`:
//!
//! * [`ks`]: logarithmic sensitivity with constant uptake and no signal
//!   diffusion. Speed fixed by the uptake budget, `c S_init = kM`.
//! * [`two_signal`]: binary response to the nutrient and to a secreted
//!   attractant. Speed is the root of an implicit relation.
//! * [`gogrow`]: thresholded sign sensitivity with growth above the
//!   threshold. Pulled/pushed dichotomy.
//! * [`logsens`]: thresholded logarithmic sensitivity with growth. The
//!   pushed branch is selected by a discriminant condition at the back.
//!
//! [`residual_of_profile`] checks any sampled [`WaveProfile`] against the
//! moving-frame equations of a [`ModelSpec`](crate::model::ModelSpec).

pub mod gogrow;
pub mod ks;
pub mod logsens;
mod residual;
pub mod roots;
pub mod spike;
pub mod two_signal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gogrow::{gogrow_profile, gogrow_speed, SignalClosure};
pub use ks::{ks_profile, ks_speed};
pub use logsens::{logsens_back_flux, logsens_phase_curves, logsens_speed, PhaseCurves};
pub use residual::residual_of_profile;
pub use spike::{half_line_spike, SpikeProfile};
pub use two_signal::{
    two_signal_profile, two_signal_rates, two_signal_speed, TwoSignalParams, TwoSignalRates,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no admissible wave: {0}")]
    NoAdmissibleWave(String),
    #[error("degenerate construction: {0}")]
    Degenerate(String),
    #[error("z grid must be strictly increasing with at least 2 points")]
    BadGrid,
    #[error(transparent)]
    Root(#[from] roots::RootError),
}

pub(crate) fn require_positive(name: &str, v: f64) -> Result<(), AnalyticError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(AnalyticError::Domain(format!(
            "{name} must be > 0, got {v}"
        )))
    }
}

pub(crate) fn check_grid(z: &[f64]) -> Result<(), AnalyticError> {
    if z.len() < 2 || z.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(AnalyticError::BadGrid);
    }
    Ok(())
}

/// Uniform grid `lo, lo + dz, ..., ≤ hi`.
pub fn uniform_grid(lo: f64, hi: f64, dz: f64) -> Vec<f64> {
    let n = ((hi - lo) / dz).round() as usize;
    (0..=n).map(|i| lo + i as f64 * dz).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Speed follows directly from a conservation argument.
    Direct,
    /// Speed is the root of an implicit relation.
    ImplicitRoot,
    /// Linear spreading speed of the leading edge.
    Pulled,
    /// Speed set by chemotactic advection at the interface.
    PushedChemotaxis,
    /// Speed set by the discriminant condition at the back of the wave.
    PushedBackConstraint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub satisfied: bool,
    /// Signed slack; non-negative when satisfied.
    pub margin: f64,
}

impl Constraint {
    fn new(name: &str, margin: f64) -> Self {
        Constraint {
            name: name.to_string(),
            satisfied: margin >= 0.0,
            margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedResult {
    pub c: f64,
    pub branch: Branch,
    pub residual: f64,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    KellerSegel,
    TwoSignal,
    GoOrGrow,
}

/// Integration constants and limits recorded alongside a sampled profile.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub construction: Option<Construction>,
    pub branch: Option<Branch>,
    /// Density amplitude at the interface (`ρ(0)`) for piecewise profiles.
    pub a: Option<f64>,
    /// Keller–Segel normalisation constant.
    pub a_prime: Option<f64>,
    /// Attractant kernel normalisation.
    pub a0: Option<f64>,
    /// Linear factor of the critical go-or-grow profile `(a + bz)e^{−λz}`.
    pub b: Option<f64>,
    /// Constant flux through the back of the wave.
    pub flux: Option<f64>,
    pub rho_minus: Option<f64>,
    pub s_minus: Option<f64>,
    pub s_init: Option<f64>,
    pub mass: Option<f64>,
    /// Position of a derivative discontinuity (threshold crossing or peak).
    pub interface: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveProfile {
    pub z: Vec<f64>,
    pub rho: Vec<f64>,
    pub s: Vec<f64>,
    pub a: Option<Vec<f64>>,
    pub speed: f64,
    pub meta: ProfileMeta,
}

impl WaveProfile {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Trapezoid mass of the sampled density.
    pub fn sampled_mass(&self) -> f64 {
        self.z
            .windows(2)
            .zip(self.rho.windows(2))
            .map(|(z, r)| 0.5 * (z[1] - z[0]) * (r[0] + r[1]))
            .sum()
    }
}

/// `log(1 + e^x)` without overflow.
pub(crate) fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
