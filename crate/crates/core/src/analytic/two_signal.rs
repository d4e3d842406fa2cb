//! Wave driven by a consumed nutrient `S` and a secreted attractant `A`,
//! with binary sensitivity `χ_S sign(S') + χ_A sign(A')`.
//!
//! The density is a two-sided exponential peaked where `A` is maximal
//! (`z = 0`): `e^{λ₋z}` behind, `e^{−λ₊z}` ahead. `A = β 𝒜∗ρ` where `𝒜` is
//! the Green function of `−c∂_z − D_A∂_z² + α`, itself a two-sided
//! exponential with rates `μ₋`, `μ₊`.

use super::roots::bisect;
use super::{
    check_grid, require_positive, AnalyticError, Branch, Construction, ProfileMeta, SpeedResult,
    WaveProfile,
};
use crate::model::ConsumptionKind;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSignalParams {
    pub chi_s: f64,
    pub chi_a: f64,
    /// Cell diffusivity.
    pub d: f64,
    pub alpha: f64,
    pub d_a: f64,
    pub beta: f64,
    pub consumption: ConsumptionKind,
    pub s_init: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSignalRates {
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub mu_minus: f64,
    pub mu_plus: f64,
}

fn residual(c: f64, chi_s: f64, chi_a: f64, alpha: f64, d_a: f64) -> f64 {
    chi_s - c - chi_a * c / (c * c + 4.0 * alpha * d_a).sqrt()
}

/// Root `c ∈ (0, χ_S)` of `χ_S − c = χ_A c / √(c² + 4αD_A)`.
pub fn two_signal_speed(
    chi_s: f64,
    chi_a: f64,
    alpha: f64,
    d_a: f64,
) -> Result<SpeedResult, AnalyticError> {
    require_positive("chi_s", chi_s)?;
    if !(chi_a.is_finite() && chi_a >= 0.0) {
        return Err(AnalyticError::Domain(format!(
            "chi_a must be >= 0, got {chi_a}"
        )));
    }
    require_positive("alpha", alpha)?;
    require_positive("D_A", d_a)?;

    if chi_a == 0.0 {
        return Ok(SpeedResult {
            c: chi_s,
            branch: Branch::ImplicitRoot,
            residual: 0.0,
            constraints: Vec::new(),
        });
    }
    let g = |c: f64| residual(c, chi_s, chi_a, alpha, d_a);
    let root = bisect(g, 0.0, chi_s, 1e-12 * chi_s)?;
    Ok(SpeedResult {
        c: root.x,
        branch: Branch::ImplicitRoot,
        residual: root.residual,
        constraints: Vec::new(),
    })
}

/// Decay rates of the density (`λ±`) and of the attractant kernel (`μ±`).
pub fn two_signal_rates(
    c: f64,
    chi_s: f64,
    chi_a: f64,
    d: f64,
    alpha: f64,
    d_a: f64,
) -> Result<TwoSignalRates, AnalyticError> {
    require_positive("d", d)?;
    require_positive("D_A", d_a)?;
    let q = (c * c + 4.0 * alpha * d_a).sqrt();
    let rates = TwoSignalRates {
        // signals aligned behind the peak, competing ahead of it
        lambda_minus: (-c + chi_s + chi_a) / d,
        lambda_plus: (c - chi_s + chi_a) / d,
        mu_minus: (-c + q) / (2.0 * d_a),
        mu_plus: (c + q) / (2.0 * d_a),
    };
    if rates.lambda_minus < 0.0 || rates.lambda_plus < 0.0 {
        return Err(AnalyticError::NoAdmissibleWave(format!(
            "negative density decay rate at c = {c}: {rates:?}"
        )));
    }
    if rates.lambda_minus == 0.0 || rates.lambda_plus == 0.0 {
        return Err(AnalyticError::Degenerate(format!(
            "zero density decay rate at c = {c} (no aggregation without the attractant)"
        )));
    }
    let lhs = rates.lambda_minus * rates.mu_minus;
    let rhs = rates.lambda_plus * rates.mu_plus;
    if (lhs - rhs).abs() > 1e-9 * lhs.abs().max(rhs.abs()) {
        return Err(AnalyticError::NoAdmissibleWave(format!(
            "attractant maximum not at the density peak: λ₋μ₋ = {lhs}, λ₊μ₊ = {rhs}"
        )));
    }
    Ok(rates)
}

/// `(e^{−bz} − e^{−az}) / (a − b)` for `z ≥ 0`, continuous through `a = b`.
fn exp_gap(a: f64, b: f64, z: f64) -> f64 {
    let delta = a - b;
    if (delta * z).abs() < 1e-8 {
        // first-order expansion around a = b
        z * (-b * z).exp() * (1.0 - 0.5 * delta * z)
    } else {
        ((-b * z).exp() - (-a * z).exp()) / delta
    }
}

/// Closed-form `(𝒜∗ρ)(z)` for `ρ = e^{λ₋z}` (z<0), `e^{−λ₊z}` (z>0), with
/// unit kernel amplitude.
fn attractant_shape(r: &TwoSignalRates, z: f64) -> f64 {
    let TwoSignalRates {
        lambda_minus: lm,
        lambda_plus: lp,
        mu_minus: mm,
        mu_plus: mp,
    } = *r;
    if z >= 0.0 {
        (-mp * z).exp() / (mp + lm) + exp_gap(mp, lp, z) + (-lp * z).exp() / (mm + lp)
    } else {
        let w = -z;
        (-lm * w).exp() / (mp + lm) + exp_gap(lm, mm, w) + (-mm * w).exp() / (mm + lp)
    }
}

/// `∫_z^∞ ρ` for the unit-amplitude density.
fn tail_mass(r: &TwoSignalRates, z: f64) -> f64 {
    if z >= 0.0 {
        (-r.lambda_plus * z).exp() / r.lambda_plus
    } else {
        1.0 / r.lambda_plus + (1.0 - (r.lambda_minus * z).exp()) / r.lambda_minus
    }
}

/// Samples the wave of mass `mass`. With no nutrient diffusion the signal
/// solves `c S' = k(S, ρ)` from `S(+∞) = S_init`, which integrates exactly
/// against the cumulative density.
pub fn two_signal_profile(
    params: &TwoSignalParams,
    mass: f64,
    z_grid: &[f64],
) -> Result<WaveProfile, AnalyticError> {
    require_positive("M", mass)?;
    require_positive("S_init", params.s_init)?;
    require_positive("beta", params.beta)?;
    check_grid(z_grid)?;
    let speed = two_signal_speed(params.chi_s, params.chi_a, params.alpha, params.d_a)?;
    let c = speed.c;
    let rates = two_signal_rates(
        c,
        params.chi_s,
        params.chi_a,
        params.d,
        params.alpha,
        params.d_a,
    )?;
    let rho0 = mass / (1.0 / rates.lambda_minus + 1.0 / rates.lambda_plus);
    let a0 = 1.0 / (c * c + 4.0 * params.alpha * params.d_a).sqrt();

    let rho: Vec<f64> = z_grid
        .iter()
        .map(|&z| {
            if z < 0.0 {
                rho0 * (rates.lambda_minus * z).exp()
            } else {
                rho0 * (-rates.lambda_plus * z).exp()
            }
        })
        .collect();
    let a: Vec<f64> = z_grid
        .iter()
        .map(|&z| params.beta * a0 * rho0 * attractant_shape(&rates, z))
        .collect();
    let s: Vec<f64> = z_grid
        .iter()
        .map(|&z| {
            let load = rho0 * tail_mass(&rates, z) / c;
            params.consumption.signal_after_uptake(params.s_init, load)
        })
        .collect();
    let s_minus = params
        .consumption
        .signal_after_uptake(params.s_init, mass / c);

    Ok(WaveProfile {
        z: z_grid.to_vec(),
        rho,
        s,
        a: Some(a),
        speed: c,
        meta: ProfileMeta {
            construction: Some(Construction::TwoSignal),
            branch: Some(Branch::ImplicitRoot),
            a: Some(rho0),
            a0: Some(a0),
            s_minus: Some(s_minus),
            s_init: Some(params.s_init),
            mass: Some(mass),
            interface: Some(0.0),
            ..ProfileMeta::default()
        },
    })
}
