//! Named scenarios and the configuration-file schema.

mod config;

pub use config::{ConfigDoc, ConfigError};

use crate::analytic::{
    gogrow_speed, ks_profile, ks_speed, logsens_speed, two_signal_profile, two_signal_speed,
    uniform_grid, AnalyticError, SpeedResult, TwoSignalParams,
};
use crate::model::{Attractant, ConsumptionKind, GrowthKind, ModelSpec, SensitivityKind};
use crate::solver::{
    initial_condition, BoundarySpec, BreakdownPolicy, DomainKind, FieldState, Grid1D, InitKind,
    SignalBoundary, SimConfig, SolverError,
};
use serde::{Deserialize, Serialize};

pub const PRESET_NAMES: [&str; 9] = [
    "ks-breakdown",
    "ks-aligned",
    "ks-rescued",
    "spike-stable",
    "spike-breakdown",
    "two-signal",
    "gogrow",
    "logsens",
    "logsens-D1",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Breakdown,
    Rescued,
    StationarySpike,
    TravelingWave,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Breakdown => "breakdown",
            Outcome::Rescued => "rescued",
            Outcome::StationarySpike => "stationary-spike",
            Outcome::TravelingWave => "traveling-wave",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "breakdown" => Outcome::Breakdown,
            "rescued" => Outcome::Rescued,
            "stationary-spike" => Outcome::StationarySpike,
            "traveling-wave" => Outcome::TravelingWave,
            _ => return None,
        })
    }

    /// Whether a run ending with or without breakdown matches.
    pub fn matches_breakdown(&self, broke_down: bool) -> bool {
        match self {
            Outcome::Breakdown => broke_down,
            _ => !broke_down,
        }
    }
}

/// Initial data as written in a configuration; sampled profiles are
/// rebuilt from the model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitSpec {
    Gaussian {
        center: f64,
        width: f64,
        mass: f64,
    },
    HalfGaussian {
        center: f64,
        width: f64,
        mass: f64,
    },
    Plateau {
        edge: f64,
        height: f64,
    },
    /// Keller–Segel wave of the given mass with `z = 0` at `x = shift`.
    KsProfile {
        mass: f64,
        shift: f64,
    },
    /// Two-signal wave of the given mass with `z = 0` at `x = shift`.
    TwoSignalProfile {
        mass: f64,
        shift: f64,
    },
    /// Stationary spike for the left Dirichlet value, stretched along `x`.
    Spike {
        mass: f64,
        stretch: f64,
    },
}

impl InitSpec {
    pub fn mass(&self) -> Option<f64> {
        match *self {
            InitSpec::Gaussian { mass, .. }
            | InitSpec::HalfGaussian { mass, .. }
            | InitSpec::KsProfile { mass, .. }
            | InitSpec::TwoSignalProfile { mass, .. }
            | InitSpec::Spike { mass, .. } => Some(mass),
            InitSpec::Plateau { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expected {
    pub outcome: Outcome,
    /// Closed-form speed, when one applies to the model.
    pub speed: Option<SpeedResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPreset {
    pub name: String,
    pub spec: ModelSpec,
    pub grid: Grid1D,
    pub bc: BoundarySpec,
    pub init: InitSpec,
    /// Uniform signal level ahead of the cells.
    pub s_init: f64,
    pub config: SimConfig,
    pub expected: Expected,
}

impl ScenarioPreset {
    /// Checks the combined invariants and fills in the analytic speed.
    pub fn finalize(mut self) -> Result<Self, ConfigError> {
        let semantic = |e: String| ConfigError::Semantic(e);
        self.spec.validate().map_err(|e| semantic(e.to_string()))?;
        self.grid.validate().map_err(|e| semantic(e.to_string()))?;
        self.bc
            .validate(&self.grid)
            .map_err(|e| semantic(e.to_string()))?;
        self.config
            .validate()
            .map_err(|e| semantic(e.to_string()))?;
        if !(self.s_init > 0.0 && self.s_init.is_finite()) {
            return Err(semantic(format!("s_init must be > 0, got {}", self.s_init)));
        }
        match self.init {
            InitSpec::KsProfile { .. } => {
                if !matches!(self.spec.sensitivity, SensitivityKind::LogGradient { .. }) {
                    return Err(semantic(
                        "ks-profile needs the log-gradient sensitivity".into(),
                    ));
                }
                let chi = self.spec.sensitivity.chi();
                if !(chi > self.spec.d) {
                    return Err(semantic(format!(
                        "the Keller-Segel wave requires chi > d (chi = {chi}, d = {})",
                        self.spec.d
                    )));
                }
            }
            InitSpec::TwoSignalProfile { .. } => {
                two_signal_params(&self.spec, self.s_init).map_err(|e| semantic(e.to_string()))?;
            }
            InitSpec::Spike { .. } if !matches!(self.bc.s_left, SignalBoundary::Dirichlet(_)) => {
                return Err(semantic(
                    "spike initial data needs a left Dirichlet signal".into(),
                ));
            }
            _ => {}
        }
        self.expected.speed = analytic_speed(&self.spec, self.s_init, self.init.mass())
            .map_err(|e| semantic(e.to_string()))?;
        Ok(self)
    }

    pub fn initial_state(&self) -> Result<FieldState, SolverError> {
        let kind = match self.init {
            InitSpec::Gaussian {
                center,
                width,
                mass,
            } => InitKind::Gaussian {
                center,
                width,
                mass,
            },
            InitSpec::HalfGaussian {
                center,
                width,
                mass,
            } => InitKind::HalfGaussian {
                center,
                width,
                mass,
            },
            InitSpec::Plateau { edge, height } => InitKind::Plateau { edge, height },
            InitSpec::KsProfile { mass, shift } => {
                let z = profile_grid(&self.grid, shift);
                let profile = ks_profile(
                    self.spec.d,
                    self.spec.sensitivity.chi(),
                    self.spec.consumption.k(),
                    mass,
                    self.s_init,
                    &z,
                )
                .map_err(|e| SolverError::Config(e.to_string()))?;
                InitKind::FromProfile { profile, shift }
            }
            InitSpec::TwoSignalProfile { mass, shift } => {
                let params = two_signal_params(&self.spec, self.s_init)
                    .map_err(|e| SolverError::Config(e.to_string()))?;
                let z = profile_grid(&self.grid, shift);
                let profile = two_signal_profile(&params, mass, &z)
                    .map_err(|e| SolverError::Config(e.to_string()))?;
                InitKind::FromProfile { profile, shift }
            }
            InitSpec::Spike { mass, stretch } => {
                let s_boundary = match self.bc.s_left {
                    SignalBoundary::Dirichlet(v) => v,
                    SignalBoundary::NoFlux => {
                        return Err(SolverError::Config(
                            "spike initial data needs a left Dirichlet signal".into(),
                        ))
                    }
                };
                InitKind::Spike {
                    mass,
                    s_boundary,
                    stretch,
                }
            }
        };
        initial_condition(&kind, &self.grid, self.s_init, &self.spec)
    }

    /// Configuration text; parsing it gives back this preset.
    pub fn to_config_string(&self) -> String {
        config::serialize(self)
    }

    pub fn from_config_str(text: &str) -> Result<Self, ConfigError> {
        ConfigDoc::parse(text)?.to_preset()
    }
}

/// Moving-frame samples covering the grid at a resolution finer than it.
fn profile_grid(grid: &Grid1D, shift: f64) -> Vec<f64> {
    let dz = (grid.dx() / 8.0).min(0.01);
    uniform_grid(grid.x_min - shift - 1.0, grid.x_max - shift + 1.0, dz)
}

fn two_signal_params(spec: &ModelSpec, s_init: f64) -> Result<TwoSignalParams, AnalyticError> {
    match (spec.sensitivity, spec.attractant) {
        (SensitivityKind::BinaryTwoSignal { chi_s, chi_a }, Some(att)) => {
            if spec.signal_diffusivity != 0.0 {
                return Err(AnalyticError::Domain(
                    "the sampled two-signal wave needs signal_diffusivity = 0".into(),
                ));
            }
            Ok(TwoSignalParams {
                chi_s,
                chi_a,
                d: spec.d,
                alpha: att.alpha,
                d_a: att.diffusivity,
                beta: att.beta,
                consumption: spec.consumption,
                s_init,
            })
        }
        _ => Err(AnalyticError::Domain(
            "two-signal waves need the binary two-signal sensitivity and an attractant".into(),
        )),
    }
}

/// Closed-form speed for the model, if one exists.
///
/// * log-gradient, constant uptake, no growth, no signal diffusion, finite mass: `kM/S_init`
/// * binary two-signal with attractant: root of the implicit relation
/// * thresholded sign with threshold growth: pulled/pushed dichotomy
/// * thresholded log-gradient with growth, linear uptake, no signal diffusion
pub fn analytic_speed(
    spec: &ModelSpec,
    s_init: f64,
    mass: Option<f64>,
) -> Result<Option<SpeedResult>, AnalyticError> {
    let no_diffusion = spec.signal_diffusivity == 0.0;
    let r = spec.growth.rate();
    Ok(match (spec.sensitivity, spec.consumption, spec.growth) {
        (
            SensitivityKind::LogGradient { .. },
            ConsumptionKind::Constant { k },
            GrowthKind::None,
        ) if no_diffusion => match mass {
            Some(m) => Some(ks_speed(k, m, s_init)?),
            None => None,
        },
        (SensitivityKind::BinaryTwoSignal { chi_s, chi_a }, _, GrowthKind::None) => {
            match spec.attractant {
                Some(att) => Some(two_signal_speed(chi_s, chi_a, att.alpha, att.diffusivity)?),
                None => None,
            }
        }
        (SensitivityKind::ThresholdedSign { chi, .. }, _, GrowthKind::Threshold { .. }) => {
            Some(gogrow_speed(chi, r, spec.d)?)
        }
        (
            SensitivityKind::ThresholdedLogGradient { chi, s0 },
            ConsumptionKind::Linear { .. },
            GrowthKind::Threshold { .. },
        ) if no_diffusion => Some(logsens_speed(chi, r, spec.d, s_init, s0)?),
        _ => None,
    })
}

fn ks_spec(signal_diffusivity: f64) -> ModelSpec {
    ModelSpec {
        sensitivity: SensitivityKind::LogGradient { chi: 2.0 },
        consumption: ConsumptionKind::Constant { k: 1.0 },
        growth: GrowthKind::None,
        d: 1.0,
        signal_diffusivity,
        attractant: None,
    }
}

fn line(x_max: f64) -> Grid1D {
    Grid1D::with_spacing(0.0, x_max, 0.1, DomainKind::TruncatedLine).expect("valid preset grid")
}

fn run_config(t_end: f64) -> SimConfig {
    SimConfig {
        dt_max: 0.01,
        cfl: 0.9,
        t_end,
        clamp_epsilon: None,
        output_every: 0.25,
        breakdown_policy: BreakdownPolicy::Halt,
    }
}

fn threshold_spec(sensitivity: SensitivityKind, signal_diffusivity: f64) -> ModelSpec {
    ModelSpec {
        sensitivity,
        consumption: ConsumptionKind::Linear { k: 1.0 },
        growth: GrowthKind::Threshold { r: 1.0, s0: 2.0 },
        d: 1.0,
        signal_diffusivity,
        attractant: None,
    }
}

pub fn preset(name: &str) -> Result<ScenarioPreset, ConfigError> {
    let half_line = BoundarySpec {
        s_left: SignalBoundary::Dirichlet(2.0),
        ..BoundarySpec::default()
    };
    let spike_grid =
        Grid1D::with_spacing(0.0, 50.0, 0.1, DomainKind::HalfLine).expect("valid preset grid");
    let (spec, grid, bc, init, s_init, config, outcome) = match name {
        "ks-breakdown" => (
            ks_spec(0.0),
            line(200.0),
            BoundarySpec::default(),
            InitSpec::Gaussian {
                center: 30.0,
                width: 1.0,
                mass: 5.0,
            },
            1.0,
            run_config(5.0),
            Outcome::Breakdown,
        ),
        "ks-aligned" => (
            ks_spec(0.0),
            line(200.0),
            BoundarySpec::default(),
            InitSpec::KsProfile {
                mass: 1.0,
                shift: 40.0,
            },
            1.0,
            run_config(30.0),
            Outcome::Breakdown,
        ),
        "ks-rescued" => (
            ks_spec(0.0),
            line(200.0),
            BoundarySpec::default(),
            InitSpec::KsProfile {
                mass: 1.0,
                shift: 40.0,
            },
            1.0,
            SimConfig {
                clamp_epsilon: Some(1e-12),
                ..run_config(50.0)
            },
            Outcome::Rescued,
        ),
        "spike-stable" => (
            ks_spec(1.0),
            spike_grid,
            half_line,
            InitSpec::Spike {
                mass: 1.0,
                stretch: 1.2,
            },
            2.0,
            run_config(40.0),
            Outcome::StationarySpike,
        ),
        "spike-breakdown" => (
            ks_spec(0.25),
            spike_grid,
            half_line,
            InitSpec::Gaussian {
                center: 10.0,
                width: 1.0,
                mass: 5.0,
            },
            2.0,
            run_config(40.0),
            Outcome::Breakdown,
        ),
        "two-signal" => (
            ModelSpec {
                sensitivity: SensitivityKind::BinaryTwoSignal {
                    chi_s: 2.0,
                    chi_a: 1.0,
                },
                consumption: ConsumptionKind::Linear { k: 1.0 },
                growth: GrowthKind::None,
                d: 1.0,
                signal_diffusivity: 0.0,
                attractant: Some(Attractant {
                    diffusivity: 1.0,
                    alpha: 1.0,
                    beta: 1.0,
                }),
            },
            line(200.0),
            BoundarySpec::default(),
            InitSpec::HalfGaussian {
                center: 10.0,
                width: 2.0,
                mass: 1.0,
            },
            1.0,
            run_config(80.0),
            Outcome::TravelingWave,
        ),
        "gogrow" => (
            threshold_spec(SensitivityKind::ThresholdedSign { chi: 2.0, s0: 2.0 }, 0.0),
            line(200.0),
            BoundarySpec::default(),
            InitSpec::Plateau {
                edge: 10.0,
                height: 1.0,
            },
            8.0,
            run_config(60.0),
            Outcome::TravelingWave,
        ),
        "logsens" | "logsens-D1" => (
            threshold_spec(
                SensitivityKind::ThresholdedLogGradient { chi: 2.0, s0: 2.0 },
                if name == "logsens" { 0.0 } else { 1.0 },
            ),
            line(200.0),
            BoundarySpec::default(),
            InitSpec::Plateau {
                edge: 10.0,
                height: 1.0,
            },
            8.0,
            run_config(40.0),
            Outcome::TravelingWave,
        ),
        other => return Err(ConfigError::UnknownPreset(other.to_string())),
    };
    ScenarioPreset {
        name: name.to_string(),
        spec,
        grid,
        bc,
        init,
        s_init,
        config,
        expected: Expected {
            outcome,
            speed: None,
        },
    }
    .finalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::Branch;

    #[test]
    fn all_presets_build() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            assert_eq!(p.name, name);
            let st = p.initial_state().unwrap();
            assert_eq!(st.len(), p.grid.n_cells);
        }
        assert!(matches!(preset("nope"), Err(ConfigError::UnknownPreset(_))));
    }

    #[test]
    fn preset_expectations() {
        assert_eq!(
            preset("ks-breakdown").unwrap().expected.outcome,
            Outcome::Breakdown
        );
        assert_eq!(
            preset("ks-rescued").unwrap().config.clamp_epsilon,
            Some(1e-12)
        );
        let logsens = preset("logsens").unwrap().expected.speed.unwrap();
        assert_eq!(logsens.branch, Branch::PushedBackConstraint);
        assert!((logsens.c - 2.0 * (2.0 * 4f64.ln()).sqrt()).abs() < 1e-15);
        assert!(preset("logsens-D1").unwrap().expected.speed.is_none());
        let two = preset("two-signal").unwrap().expected.speed.unwrap();
        assert!(two.c > 1.0 && two.c < 2.0);
        assert_eq!(preset("gogrow").unwrap().expected.speed.unwrap().c, 2.5);
        assert_eq!(preset("ks-aligned").unwrap().expected.speed.unwrap().c, 1.0);
    }

    #[test]
    fn two_signal_root_is_interior() {
        let p = preset("two-signal").unwrap();
        let c = p.expected.speed.unwrap().c;
        assert!(1.0 < c && c < 2.0);
    }
}
