//! Stationary spike on the half-line `x > 0`: logarithmic sensitivity,
//! uptake `kρ`, no-flux for `ρ` and `S(0) = S_b`.
//!
//! Zero flux gives `ρ = aS^{χ/d}`, and `D S'' = kρ` is solved by the power
//! law `S = A(x + x_0)^{−q}` with `q = 2d/(χ − d)`.

use super::{check_grid, require_positive, AnalyticError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpikeProfile {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub s: Vec<f64>,
    /// Offset of the power-law singularity behind the boundary.
    pub x0: f64,
    /// Exponent `q` of the signal decay.
    pub decay: f64,
}

pub fn half_line_spike(
    d: f64,
    chi: f64,
    signal_diffusivity: f64,
    k: f64,
    mass: f64,
    s_boundary: f64,
    x_grid: &[f64],
) -> Result<SpikeProfile, AnalyticError> {
    require_positive("d", d)?;
    require_positive("D", signal_diffusivity)?;
    require_positive("k", k)?;
    require_positive("M", mass)?;
    require_positive("S_b", s_boundary)?;
    check_grid(x_grid)?;
    if !(chi > d) {
        return Err(AnalyticError::NoAdmissibleWave(format!(
            "a stationary spike requires chi > d (chi = {chi}, d = {d})"
        )));
    }
    if x_grid[0] < 0.0 {
        return Err(AnalyticError::Domain("grid must lie in x >= 0".into()));
    }
    let p = chi / d;
    let q = 2.0 / (p - 1.0);
    // M = (D/k)(S'(∞) − S'(0)) = (D/k) q S_b / x0
    let x0 = signal_diffusivity * q * s_boundary / (k * mass);
    let amp = s_boundary * x0.powf(q);
    let a = signal_diffusivity * q * (q + 1.0) / (k * amp.powf(p - 1.0));
    let s: Vec<f64> = x_grid.iter().map(|&x| amp * (x + x0).powf(-q)).collect();
    let rho = s.iter().map(|&v| a * v.powf(p)).collect();
    Ok(SpikeProfile {
        x: x_grid.to_vec(),
        rho,
        s,
        x0,
        decay: q,
    })
}
