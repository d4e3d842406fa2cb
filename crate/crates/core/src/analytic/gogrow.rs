//! Go-or-grow wave: cells divide above the threshold `S_0` and migrate up
//! the gradient at speed `χ` below it.
//!
//! Behind the threshold crossing (`z < 0`) the flux is constant, `−J`, and
//! the density sits on the plateau `J/(c − χ)`. Ahead of it the density
//! solves the linearised F/KPP problem.

use super::{
    check_grid, require_positive, AnalyticError, Branch, Constraint, Construction, ProfileMeta,
    SpeedResult, WaveProfile,
};
use serde::{Deserialize, Serialize};

/// `c = 2√(rd)` if `χ ≤ √(rd)`, `χ + rd/χ` otherwise.
pub fn gogrow_speed(chi: f64, r: f64, d: f64) -> Result<SpeedResult, AnalyticError> {
    require_positive("chi", chi)?;
    require_positive("r", r)?;
    require_positive("d", d)?;
    let root_rd = (r * d).sqrt();
    let (c, branch) = if chi <= root_rd {
        (2.0 * root_rd, Branch::Pulled)
    } else {
        (chi + r * d / chi, Branch::PushedChemotaxis)
    };
    Ok(SpeedResult {
        c,
        branch,
        residual: 0.0,
        constraints: vec![
            Constraint::new("chi <= sqrt(r d)", root_rd - chi),
            Constraint::new("c^2 >= 4 r d", c * c - 4.0 * r * d),
        ],
    })
}

/// Signal closure used to sample `S` alongside the density: uptake `kρS`,
/// no signal diffusion, `S(0) = S_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalClosure {
    pub k: f64,
    pub s0: f64,
}

/// Samples the go-or-grow wave travelling at `c`, normalised by `ρ(0) = 1`.
///
/// At the minimal speed `c = 2√(rd)` the front is `(a + bz)e^{−λz}` with
/// `bd = a(√(rd) − χ)`; faster waves take the steepest decay
/// `λ = (c + √(c² − 4rd))/(2d)`.
pub fn gogrow_profile(
    chi: f64,
    r: f64,
    d: f64,
    c: f64,
    signal: SignalClosure,
    z_grid: &[f64],
) -> Result<WaveProfile, AnalyticError> {
    require_positive("chi", chi)?;
    require_positive("r", r)?;
    require_positive("d", d)?;
    require_positive("k", signal.k)?;
    require_positive("S_0", signal.s0)?;
    check_grid(z_grid)?;
    if !(c > chi) {
        return Err(AnalyticError::NoAdmissibleWave(format!(
            "the plateau behind the front requires c > chi (c = {c}, chi = {chi})"
        )));
    }
    let disc = c * c - 4.0 * r * d;
    let c_min = 2.0 * (r * d).sqrt();
    if disc < 0.0 && (c - c_min).abs() > 1e-12 * c_min {
        return Err(AnalyticError::NoAdmissibleWave(format!(
            "c = {c} is below the linear spreading speed {c_min}"
        )));
    }
    let critical = (c - c_min).abs() <= 1e-12 * c_min;

    let a = 1.0;
    let (lambda, b) = if critical {
        let lambda = (r / d).sqrt();
        (lambda, a * ((r * d).sqrt() - chi) / d)
    } else {
        ((c + disc.sqrt()) / (2.0 * d), 0.0)
    };
    if b < 0.0 {
        return Err(AnalyticError::NoAdmissibleWave(format!(
            "critical profile has b = {b} < 0, i.e. chi > sqrt(r d)"
        )));
    }
    let rho_minus = a;
    let flux = (c - chi) * rho_minus;

    // ∫₀^z ρ for z > 0
    let front_mass = |z: f64| {
        let e = (-lambda * z).exp();
        a * (1.0 - e) / lambda + b * (1.0 - e * (1.0 + lambda * z)) / (lambda * lambda)
    };
    let total_front_mass = a / lambda + b / (lambda * lambda);
    let s_init = signal.s0 * (signal.k * total_front_mass / c).exp();

    let mut rho = Vec::with_capacity(z_grid.len());
    let mut s = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        if z < 0.0 {
            rho.push(rho_minus);
            s.push(signal.s0 * (signal.k * rho_minus * z / c).exp());
        } else {
            rho.push((a + b * z) * (-lambda * z).exp());
            s.push(signal.s0 * (signal.k * front_mass(z) / c).exp());
        }
    }

    let branch = if chi <= (r * d).sqrt() && critical {
        Branch::Pulled
    } else {
        Branch::PushedChemotaxis
    };
    Ok(WaveProfile {
        z: z_grid.to_vec(),
        rho,
        s,
        a: None,
        speed: c,
        meta: ProfileMeta {
            construction: Some(Construction::GoOrGrow),
            branch: Some(branch),
            a: Some(a),
            b: Some(b),
            flux: Some(flux),
            rho_minus: Some(rho_minus),
            s_minus: Some(0.0),
            s_init: Some(s_init),
            interface: Some(0.0),
            ..ProfileMeta::default()
        },
    })
}
