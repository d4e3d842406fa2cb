//! The PDE family: chemotactic sensitivity, signal uptake and growth kernels.
//!
//! Every model handled by the crate has the form
//!
//! ```text
//! ρ_t + (−d ρ_x + ρ·v(S, S_x, A_x))_x = r(S) ρ
//! S_t = D S_xx − k(S, ρ)
//! A_t = D_A A_xx + β ρ − α A          (optional attractant)
//! ```
//!
//! where the advection velocity `v`, the uptake `k` and the growth `r` are
//! picked from the kernels below.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid model parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("logarithmic sensitivity sampled a non-positive signal on the {side} side of the face (S = {value:e})")]
    NonPositiveSignal { side: FaceSide, value: f64 },
    #[error("grid spacing must be positive, got {0}")]
    BadSpacing(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceSide {
    Left,
    Right,
}

impl std::fmt::Display for FaceSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FaceSide::Left => f.write_str("left"),
            FaceSide::Right => f.write_str("right"),
        }
    }
}

/// Chemotactic response `v(S, ∂S/∂x, ∂A/∂x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SensitivityKind {
    /// `χ ∂(log S)/∂x`, the original Keller–Segel response.
    LogGradient { chi: f64 },
    /// `χ_S sign(∂S/∂x) + χ_A sign(∂A/∂x)`.
    BinaryTwoSignal { chi_s: f64, chi_a: f64 },
    /// `χ tanh(f(S) ∂S/∂x)` with `f(S) = f_scale / (1 + S)²`.
    Tanh { chi: f64, f_scale: f64 },
    /// `χ sign(∂S/∂x) 1_{S < S_0}` (go-or-grow).
    ThresholdedSign { chi: f64, s0: f64 },
    /// `χ ∂(log S)/∂x 1_{S < S_0}`.
    ThresholdedLogGradient { chi: f64, s0: f64 },
}

impl SensitivityKind {
    pub fn is_logarithmic(&self) -> bool {
        matches!(
            self,
            SensitivityKind::LogGradient { .. } | SensitivityKind::ThresholdedLogGradient { .. }
        )
    }

    pub fn threshold(&self) -> Option<f64> {
        match *self {
            SensitivityKind::ThresholdedSign { s0, .. }
            | SensitivityKind::ThresholdedLogGradient { s0, .. } => Some(s0),
            _ => None,
        }
    }

    /// The main advection strength (`χ`, or `χ_S` for the two-signal kind).
    pub fn chi(&self) -> f64 {
        match *self {
            SensitivityKind::LogGradient { chi }
            | SensitivityKind::Tanh { chi, .. }
            | SensitivityKind::ThresholdedSign { chi, .. }
            | SensitivityKind::ThresholdedLogGradient { chi, .. } => chi,
            SensitivityKind::BinaryTwoSignal { chi_s, .. } => chi_s,
        }
    }

    /// Upper bound on `|v|`, when one exists.
    pub fn max_speed(&self) -> Option<f64> {
        match *self {
            SensitivityKind::BinaryTwoSignal { chi_s, chi_a } => Some(chi_s + chi_a),
            SensitivityKind::Tanh { chi, .. } | SensitivityKind::ThresholdedSign { chi, .. } => {
                Some(chi)
            }
            _ => None,
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        let check_nonneg = |name: &'static str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter {
                    name,
                    reason: format!("must be finite and >= 0, got {v}"),
                })
            }
        };
        let check_pos = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                })
            }
        };
        match *self {
            SensitivityKind::LogGradient { chi } => check_nonneg("chi", chi),
            SensitivityKind::BinaryTwoSignal { chi_s, chi_a } => {
                check_nonneg("chi_s", chi_s)?;
                check_nonneg("chi_a", chi_a)
            }
            SensitivityKind::Tanh { chi, f_scale } => {
                check_nonneg("chi", chi)?;
                check_pos("f_scale", f_scale)
            }
            SensitivityKind::ThresholdedSign { chi, s0 }
            | SensitivityKind::ThresholdedLogGradient { chi, s0 } => {
                check_nonneg("chi", chi)?;
                check_pos("s0", s0)
            }
        }
    }
}

/// Signal uptake `k(S, ρ)`; every kind is linear in `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConsumptionKind {
    /// `k ρ`. Does not vanish with `S`, so positivity of `S` is not guaranteed.
    Constant { k: f64 },
    /// `k ρ S`.
    Linear { k: f64 },
    /// `k ρ S^m`, `m ∈ (0, 1]`.
    Power { k: f64, m: f64 },
}

impl ConsumptionKind {
    pub fn k(&self) -> f64 {
        match *self {
            ConsumptionKind::Constant { k }
            | ConsumptionKind::Linear { k }
            | ConsumptionKind::Power { k, .. } => k,
        }
    }

    /// Uptake per unit density, `k(S, ρ) / ρ`.
    pub fn per_cell(&self, s: f64) -> f64 {
        match *self {
            ConsumptionKind::Constant { k } => k,
            ConsumptionKind::Linear { k } => k * s,
            ConsumptionKind::Power { k, m } => k * s.max(0.0).powf(m),
        }
    }

    /// Signal remaining after cells have taken up `load = (1/c)∫ρ` from a
    /// signal initially at `s_init`, i.e. the solution of `dS/dz = ρ k(S,1)/c`
    /// integrated from `+∞`. Can be negative for [`ConsumptionKind::Constant`].
    pub fn signal_after_uptake(&self, s_init: f64, load: f64) -> f64 {
        match *self {
            ConsumptionKind::Constant { k } => s_init - k * load,
            ConsumptionKind::Linear { k } => s_init * (-k * load).exp(),
            ConsumptionKind::Power { k, m } => {
                if m == 1.0 {
                    return s_init * (-k * load).exp();
                }
                let base = s_init.powf(1.0 - m) - (1.0 - m) * k * load;
                if base <= 0.0 {
                    0.0
                } else {
                    base.powf(1.0 / (1.0 - m))
                }
            }
        }
    }

    /// True when uptake shuts off as `S → 0`.
    pub fn preserves_positivity(&self) -> bool {
        !matches!(self, ConsumptionKind::Constant { .. })
    }

    fn validate(&self) -> Result<(), ModelError> {
        let k = self.k();
        if !(k.is_finite() && k > 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "k",
                reason: format!("must be finite and > 0, got {k}"),
            });
        }
        if let ConsumptionKind::Power { m, .. } = *self {
            if !(m > 0.0 && m <= 1.0) {
                return Err(ModelError::InvalidParameter {
                    name: "m",
                    reason: format!("must lie in (0, 1], got {m}"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GrowthKind {
    None,
    /// `r 1_{S > S_0}`.
    Threshold {
        r: f64,
        s0: f64,
    },
}

impl GrowthKind {
    pub fn rate(&self) -> f64 {
        match *self {
            GrowthKind::None => 0.0,
            GrowthKind::Threshold { r, .. } => r,
        }
    }

    pub fn threshold(&self) -> Option<f64> {
        match *self {
            GrowthKind::None => None,
            GrowthKind::Threshold { s0, .. } => Some(s0),
        }
    }
}

/// Second, cell-secreted attractant `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attractant {
    pub diffusivity: f64,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub sensitivity: SensitivityKind,
    pub consumption: ConsumptionKind,
    pub growth: GrowthKind,
    /// Cell diffusivity `d`.
    pub d: f64,
    /// Signal diffusivity `D`.
    pub signal_diffusivity: f64,
    pub attractant: Option<Attractant>,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<(), ModelError> {
        self.sensitivity.validate()?;
        self.consumption.validate()?;
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "d",
                reason: format!("cell diffusivity must be > 0, got {}", self.d),
            });
        }
        if !(self.signal_diffusivity.is_finite() && self.signal_diffusivity >= 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "d_signal",
                reason: format!("must be >= 0, got {}", self.signal_diffusivity),
            });
        }
        if let GrowthKind::Threshold { r, s0 } = self.growth {
            if !(r.is_finite() && r > 0.0) {
                return Err(ModelError::InvalidParameter {
                    name: "r",
                    reason: format!("growth rate must be > 0, got {r}"),
                });
            }
            if !(s0.is_finite() && s0 > 0.0) {
                return Err(ModelError::InvalidParameter {
                    name: "s0",
                    reason: format!("threshold must be > 0, got {s0}"),
                });
            }
            if let Some(s0_sens) = self.sensitivity.threshold() {
                if s0_sens != s0 {
                    return Err(ModelError::InvalidParameter {
                        name: "s0",
                        reason: format!(
                            "sensitivity threshold {s0_sens} differs from growth threshold {s0}"
                        ),
                    });
                }
            }
        }
        match (self.attractant, self.sensitivity) {
            (Some(att), SensitivityKind::BinaryTwoSignal { .. }) => {
                for (name, v) in [
                    ("d_attractant", att.diffusivity),
                    ("alpha", att.alpha),
                    ("beta", att.beta),
                ] {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(ModelError::InvalidParameter {
                            name,
                            reason: format!("must be > 0, got {v}"),
                        });
                    }
                }
            }
            (Some(_), _) => {
                return Err(ModelError::InvalidParameter {
                    name: "sensitivity",
                    reason: "an attractant requires the two-signal sensitivity".into(),
                })
            }
            (None, SensitivityKind::BinaryTwoSignal { chi_a, .. }) if chi_a > 0.0 => {
                return Err(ModelError::InvalidParameter {
                    name: "chi_a",
                    reason: "chi_a > 0 requires an attractant".into(),
                })
            }
            _ => {}
        }
        Ok(())
    }
}

/// Sign with `sign(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Cell-centred values on the two sides of a face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceSample {
    pub s_left: f64,
    pub s_right: f64,
    pub a_left: Option<f64>,
    pub a_right: Option<f64>,
    pub dx: f64,
}

impl FaceSample {
    pub fn signal(s_left: f64, s_right: f64, dx: f64) -> Self {
        FaceSample {
            s_left,
            s_right,
            a_left: None,
            a_right: None,
            dx,
        }
    }

    pub fn with_attractant(mut self, a_left: f64, a_right: f64) -> Self {
        self.a_left = Some(a_left);
        self.a_right = Some(a_right);
        self
    }
}

fn log_difference(face: &FaceSample) -> Result<f64, ModelError> {
    if !(face.s_left > 0.0) {
        return Err(ModelError::NonPositiveSignal {
            side: FaceSide::Left,
            value: face.s_left,
        });
    }
    if !(face.s_right > 0.0) {
        return Err(ModelError::NonPositiveSignal {
            side: FaceSide::Right,
            value: face.s_right,
        });
    }
    Ok((face.s_right.ln() - face.s_left.ln()) / face.dx)
}

/// Rivero-type signal integration function `f(S) = f_scale / (1 + S)²`.
pub fn tanh_gain(f_scale: f64, s: f64) -> f64 {
    f_scale / ((1.0 + s) * (1.0 + s))
}

/// Advection velocity on a face, from the discrete gradients of `S` (and `A`).
///
/// Thresholded kinds evaluate `1_{S < S_0}` on the upwind cell of the
/// unthresholded velocity.
pub fn advection_velocity(spec: &ModelSpec, face: &FaceSample) -> Result<f64, ModelError> {
    if !(face.dx > 0.0) {
        return Err(ModelError::BadSpacing(face.dx));
    }
    let grad_s = (face.s_right - face.s_left) / face.dx;
    let upwind_below = |v: f64, s0: f64| {
        let s_up = if v >= 0.0 { face.s_left } else { face.s_right };
        s_up < s0
    };
    let v = match spec.sensitivity {
        SensitivityKind::LogGradient { chi } => chi * log_difference(face)?,
        SensitivityKind::BinaryTwoSignal { chi_s, chi_a } => {
            let grad_a = match (face.a_left, face.a_right) {
                (Some(l), Some(r)) => (r - l) / face.dx,
                _ => 0.0,
            };
            chi_s * sign(grad_s) + chi_a * sign(grad_a)
        }
        SensitivityKind::Tanh { chi, f_scale } => {
            let s_mid = 0.5 * (face.s_left + face.s_right);
            chi * (tanh_gain(f_scale, s_mid) * grad_s).tanh()
        }
        SensitivityKind::ThresholdedSign { chi, s0 } => {
            let v = chi * sign(grad_s);
            if upwind_below(v, s0) {
                v
            } else {
                0.0
            }
        }
        SensitivityKind::ThresholdedLogGradient { chi, s0 } => {
            let v = chi * log_difference(face)?;
            if upwind_below(v, s0) {
                v
            } else {
                0.0
            }
        }
    };
    Ok(v)
}

/// Pointwise velocity from continuous values, used to check sampled profiles.
pub fn pointwise_velocity(
    spec: &ModelSpec,
    s: f64,
    ds: f64,
    da: Option<f64>,
) -> Result<f64, ModelError> {
    let below = |s0: f64| s < s0;
    let log_grad = || {
        if s > 0.0 {
            Ok(ds / s)
        } else {
            Err(ModelError::NonPositiveSignal {
                side: FaceSide::Left,
                value: s,
            })
        }
    };
    Ok(match spec.sensitivity {
        SensitivityKind::LogGradient { chi } => chi * log_grad()?,
        SensitivityKind::BinaryTwoSignal { chi_s, chi_a } => {
            chi_s * sign(ds) + chi_a * sign(da.unwrap_or(0.0))
        }
        SensitivityKind::Tanh { chi, f_scale } => chi * (tanh_gain(f_scale, s) * ds).tanh(),
        SensitivityKind::ThresholdedSign { chi, s0 } => {
            if below(s0) {
                chi * sign(ds)
            } else {
                0.0
            }
        }
        SensitivityKind::ThresholdedLogGradient { chi, s0 } => {
            if below(s0) {
                chi * log_grad()?
            } else {
                0.0
            }
        }
    })
}

/// Per-capita growth rate `r(S)`. The threshold itself belongs to the
/// migrating state, so `r(S_0) = 0`.
pub fn reaction_rate(spec: &ModelSpec, s: f64) -> f64 {
    match spec.growth {
        GrowthKind::None => 0.0,
        GrowthKind::Threshold { r, s0 } => {
            if s > s0 {
                r
            } else {
                0.0
            }
        }
    }
}

/// Uptake `k(S, ρ)`, non-negative for admissible inputs.
pub fn consumption_rate(spec: &ModelSpec, s: f64, rho: f64) -> f64 {
    rho * spec.consumption.per_cell(s)
}
