//! Go-or-grow with logarithmic sensitivity below the threshold, uptake
//! `kρS` and no signal diffusion.
//!
//! Behind the threshold the density obeys
//! `dρ' = −cρ + (kχ/c)ρ² + J`, whose right-hand side must keep a
//! non-negative discriminant, `c³/(4kχ) ≥ J`. Together with the uptake
//! budget `c log(S_init/S_0) = (k/r)J` this gives
//! `c² ≥ 4rχ log(S_init/S_0)`: the speed is constrained from the back.

use super::{require_positive, AnalyticError, Branch, Constraint, SpeedResult};
use serde::{Deserialize, Serialize};

/// `c = 2√(r max{d, χ log(S_init/S_0)})`.
pub fn logsens_speed(
    chi: f64,
    r: f64,
    d: f64,
    s_init: f64,
    s0: f64,
) -> Result<SpeedResult, AnalyticError> {
    require_positive("chi", chi)?;
    require_positive("r", r)?;
    require_positive("d", d)?;
    require_positive("S_init", s_init)?;
    require_positive("S_0", s0)?;
    if !(s_init > s0) {
        return Err(AnalyticError::Domain(format!(
            "S_init = {s_init} must exceed the threshold S_0 = {s0}"
        )));
    }
    let back = chi * (s_init / s0).ln();
    let (c, branch) = if d >= back {
        (2.0 * (r * d).sqrt(), Branch::Pulled)
    } else {
        (2.0 * (r * back).sqrt(), Branch::PushedBackConstraint)
    };
    Ok(SpeedResult {
        c,
        branch,
        residual: 0.0,
        constraints: vec![
            Constraint::new("c^2 >= 4 r d", c * c - 4.0 * r * d),
            Constraint::new("c^2 >= 4 r chi log(S_init/S_0)", c * c - 4.0 * r * back),
        ],
    })
}

/// Back flux `J = (rc/k) log(S_init/S_0)` implied by the uptake budget.
pub fn logsens_back_flux(
    c: f64,
    r: f64,
    k: f64,
    s_init: f64,
    s0: f64,
) -> Result<f64, AnalyticError> {
    require_positive("c", c)?;
    require_positive("k", k)?;
    require_positive("S_init", s_init)?;
    require_positive("S_0", s0)?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(AnalyticError::Domain(format!("r must be >= 0, got {r}")));
    }
    Ok(r * c / k * (s_init / s0).ln())
}

/// Theoretical phase-plane curves `(ρ, ρ')` of the wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCurves {
    pub c: f64,
    pub d: f64,
    pub k: f64,
    pub chi: f64,
    pub flux: f64,
    /// Decay rate ahead of the threshold.
    pub lambda: f64,
}

impl PhaseCurves {
    /// `ρ' = −λρ` ahead of the threshold.
    pub fn front(&self, rho: f64) -> f64 {
        -self.lambda * rho
    }

    /// `ρ' = (−cρ + (kχ/c)ρ² + J)/d` behind the threshold; a perfect square
    /// `(kχ/(cd))(ρ − ρ*)²` when the discriminant vanishes.
    pub fn back(&self, rho: f64) -> f64 {
        (-self.c * rho + self.k * self.chi / self.c * rho * rho + self.flux) / self.d
    }

    /// Vertex of the back parabola, `ρ* = c²/(2kχ)`.
    pub fn rho_star(&self) -> f64 {
        self.c * self.c / (2.0 * self.k * self.chi)
    }

    /// `c³/(4kχ) − J`; zero on the pushed branch.
    pub fn discriminant_gap(&self) -> f64 {
        self.c.powi(3) / (4.0 * self.k * self.chi) - self.flux
    }

    /// Flux that cancels the discriminant at speed `c`.
    pub fn critical_flux(c: f64, k: f64, chi: f64) -> f64 {
        c.powi(3) / (4.0 * k * chi)
    }
}

pub fn logsens_phase_curves(
    c: f64,
    d: f64,
    k: f64,
    chi: f64,
    flux: f64,
    r: f64,
) -> Result<PhaseCurves, AnalyticError> {
    require_positive("c", c)?;
    require_positive("d", d)?;
    require_positive("k", k)?;
    require_positive("chi", chi)?;
    let disc = c * c - 4.0 * r * d;
    if disc < 0.0 {
        return Err(AnalyticError::Domain(format!(
            "c² − 4rd = {disc} < 0: no real decay rate ahead of the threshold"
        )));
    }
    Ok(PhaseCurves {
        c,
        d,
        k,
        chi,
        flux,
        lambda: (c + disc.sqrt()) / (2.0 * d),
    })
}
