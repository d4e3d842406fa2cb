//! INI-style scenario files.
//!
//! ```text
//! # comment
//! [model]
//! sensitivity = log-gradient
//! chi = 2.0
//! ```
//!
//! Sections are `model`, `grid`, `boundary`, `init` and `run`. Every key is
//! checked; keys that are unknown or do not apply to the chosen kinds are
//! rejected with their line number.

use super::{Expected, InitSpec, Outcome, ScenarioPreset};
use crate::model::{Attractant, ConsumptionKind, GrowthKind, ModelSpec, SensitivityKind};
use crate::solver::{
    BoundarySpec, BreakdownPolicy, DensityBoundary, DomainKind, Grid1D, SignalBoundary, SimConfig,
};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Semantic(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

const SECTIONS: [&str; 5] = ["model", "grid", "boundary", "init", "run"];

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: String,
    value: String,
    line: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

/// Parsed but uninterpreted configuration text.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigDoc {
    sections: Vec<Section>,
}

fn parse_err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        line,
        message: message.into(),
    }
}

impl ConfigDoc {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut doc = ConfigDoc::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| parse_err(line, "unterminated section header"))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(parse_err(line, format!("unknown section [{name}]")));
                }
                if doc.sections.iter().any(|s| s.name == name) {
                    return Err(parse_err(line, format!("duplicate section [{name}]")));
                }
                doc.sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                parse_err(line, format!("expected `key = value`, got `{content}`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(parse_err(line, "empty key or value"));
            }
            let section = doc
                .sections
                .last_mut()
                .ok_or_else(|| parse_err(line, "key outside of any section"))?;
            if section.entries.iter().any(|e| e.key == key) {
                return Err(parse_err(
                    line,
                    format!("duplicate key `{key}` in [{}]", section.name),
                ));
            }
            section.entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line,
            });
        }
        Ok(doc)
    }

    /// Sets `section.key`, adding it if absent.
    pub fn set(&mut self, path: &str, value: &str) -> Result<(), ConfigError> {
        let (section, key) = path.split_once('.').ok_or_else(|| {
            ConfigError::Semantic(format!("expected `section.key`, got `{path}`"))
        })?;
        if !SECTIONS.contains(&section) {
            return Err(ConfigError::Semantic(format!(
                "unknown section [{section}]"
            )));
        }
        let pos = match self.sections.iter().position(|s| s.name == section) {
            Some(p) => p,
            None => {
                self.sections.push(Section {
                    name: section.to_string(),
                    line: 0,
                    entries: Vec::new(),
                });
                self.sections.len() - 1
            }
        };
        let sec = &mut self.sections[pos];
        match sec.entries.iter_mut().find(|e| e.key == key) {
            Some(e) => e.value = value.to_string(),
            None => sec.entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line: 0,
            }),
        }
        Ok(())
    }

    pub fn get(&self, path: &str) -> Option<&str> {
        let (section, key) = path.split_once('.')?;
        self.sections
            .iter()
            .find(|s| s.name == section)?
            .entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| e.value.as_str())
    }

    pub fn to_preset(&self) -> Result<ScenarioPreset, ConfigError> {
        let mut model = self.reader("model")?;
        let spec = read_model(&mut model)?;
        let mut grid = self.reader("grid")?;
        let grid_v = read_grid(&mut grid)?;
        let mut boundary = self.reader("boundary")?;
        let bc = read_boundary(&mut boundary)?;
        let mut init = self.reader("init")?;
        let mut run = self.reader("run")?;
        let s_init = init.float("s_init")?;
        let init_v = read_init(&mut init)?;
        let name = run
            .take("name")
            .map(|(v, _)| v)
            .unwrap_or_else(|| "custom".into());
        let outcome = match run.take("expected") {
            Some((v, line)) => Outcome::parse(&v)
                .ok_or_else(|| parse_err(line, format!("unknown expected outcome `{v}`")))?,
            None => Outcome::TravelingWave,
        };
        let config = read_run(&mut run)?;

        for r in [&model, &grid, &boundary, &init, &run] {
            r.finish()?;
        }
        ScenarioPreset {
            name,
            spec,
            grid: grid_v,
            bc,
            init: init_v,
            s_init,
            config,
            expected: Expected {
                outcome,
                speed: None,
            },
        }
        .finalize()
    }

    fn reader(&self, name: &str) -> Result<Reader, ConfigError> {
        let section = self
            .sections
            .iter()
            .find(|s| s.name == name)
            .cloned()
            .ok_or_else(|| ConfigError::Semantic(format!("missing section [{name}]")))?;
        Ok(Reader {
            used: vec![false; section.entries.len()],
            section,
        })
    }
}

struct Reader {
    section: Section,
    used: Vec<bool>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        let i = self.section.entries.iter().position(|e| e.key == key)?;
        self.used[i] = true;
        let e = &self.section.entries[i];
        Some((e.value.clone(), e.line))
    }

    fn missing(&self, key: &str) -> ConfigError {
        let msg = format!("[{}] is missing `{key}`", self.section.name);
        if self.section.line > 0 {
            parse_err(self.section.line, msg)
        } else {
            ConfigError::Semantic(msg)
        }
    }

    fn string(&mut self, key: &str) -> Result<(String, usize), ConfigError> {
        self.take(key).ok_or_else(|| self.missing(key))
    }

    fn float_opt(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| {
                    parse_err(line, format!("`{key}` must be a finite number, got `{v}`"))
                }),
        }
    }

    fn float(&mut self, key: &str) -> Result<f64, ConfigError> {
        self.float_opt(key)?.ok_or_else(|| self.missing(key))
    }

    fn float_or(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.float_opt(key)?.unwrap_or(default))
    }

    /// Rejects keys that were never read.
    fn finish(&self) -> Result<(), ConfigError> {
        for (e, used) in self.section.entries.iter().zip(&self.used) {
            if !used {
                let msg = format!(
                    "unknown or inapplicable key `{}` in [{}]",
                    e.key, self.section.name
                );
                return Err(if e.line > 0 {
                    parse_err(e.line, msg)
                } else {
                    ConfigError::Semantic(msg)
                });
            }
        }
        Ok(())
    }
}

fn unknown_kind(line: usize, what: &str, v: &str) -> ConfigError {
    parse_err(line, format!("unknown {what} `{v}`"))
}

fn read_model(r: &mut Reader) -> Result<ModelSpec, ConfigError> {
    let (kind, line) = r.string("sensitivity")?;
    let sensitivity = match kind.as_str() {
        "log-gradient" => SensitivityKind::LogGradient {
            chi: r.float("chi")?,
        },
        "binary-two-signal" => SensitivityKind::BinaryTwoSignal {
            chi_s: r.float("chi_s")?,
            chi_a: r.float("chi_a")?,
        },
        "tanh" => SensitivityKind::Tanh {
            chi: r.float("chi")?,
            f_scale: r.float("f_scale")?,
        },
        "thresholded-sign" | "thresholded-log-gradient" => {
            let chi = r.float("chi")?;
            let s0 = r.float_opt("s0")?.ok_or_else(|| {
                parse_err(line, format!("sensitivity `{kind}` needs a threshold `s0`"))
            })?;
            if kind == "thresholded-sign" {
                SensitivityKind::ThresholdedSign { chi, s0 }
            } else {
                SensitivityKind::ThresholdedLogGradient { chi, s0 }
            }
        }
        other => return Err(unknown_kind(line, "sensitivity", other)),
    };
    let (kind, line) = r.string("consumption")?;
    let consumption = match kind.as_str() {
        "constant" => ConsumptionKind::Constant { k: r.float("k")? },
        "linear" => ConsumptionKind::Linear { k: r.float("k")? },
        "power" => ConsumptionKind::Power {
            k: r.float("k")?,
            m: r.float("m")?,
        },
        other => return Err(unknown_kind(line, "consumption", other)),
    };
    let (kind, line) = r.take("growth").unwrap_or(("none".into(), 0));
    let growth = match kind.as_str() {
        "none" => GrowthKind::None,
        "threshold" => GrowthKind::Threshold {
            r: r.float("r")?,
            s0: match r.float_opt("growth_s0")? {
                Some(v) => v,
                None => sensitivity
                    .threshold()
                    .ok_or_else(|| parse_err(line, "threshold growth needs `growth_s0`"))?,
            },
        },
        other => return Err(unknown_kind(line, "growth", other)),
    };
    let d = r.float("d")?;
    let signal_diffusivity = r.float_or("signal_diffusivity", 0.0)?;
    let attractant = match r.float_opt("attractant_diffusivity")? {
        Some(diffusivity) => Some(Attractant {
            diffusivity,
            alpha: r.float("alpha")?,
            beta: r.float("beta")?,
        }),
        None => None,
    };
    Ok(ModelSpec {
        sensitivity,
        consumption,
        growth,
        d,
        signal_diffusivity,
        attractant,
    })
}

fn read_grid(r: &mut Reader) -> Result<Grid1D, ConfigError> {
    let (kind, line) = r.take("domain").unwrap_or(("truncated-line".into(), 0));
    let domain = match kind.as_str() {
        "truncated-line" => DomainKind::TruncatedLine,
        "half-line" => DomainKind::HalfLine,
        other => return Err(unknown_kind(line, "domain", other)),
    };
    let x_min = r.float_or("x_min", 0.0)?;
    let x_max = r.float_or("x_max", 200.0)?;
    let cells = r.take("cells");
    let dx = r.float_opt("dx")?;
    let sem = |e: crate::solver::SolverError| ConfigError::Semantic(e.to_string());
    match (cells, dx) {
        (Some(_), Some(_)) => Err(ConfigError::Semantic(
            "[grid] takes either `cells` or `dx`, not both".into(),
        )),
        (Some((v, line)), None) => {
            let n: usize = v
                .parse()
                .map_err(|_| parse_err(line, format!("`cells` must be an integer, got `{v}`")))?;
            Grid1D::new(x_min, x_max, n, domain).map_err(sem)
        }
        (None, Some(dx)) => Grid1D::with_spacing(x_min, x_max, dx, domain).map_err(sem),
        (None, None) => Grid1D::with_spacing(x_min, x_max, 0.1, domain).map_err(sem),
    }
}

fn read_signal_boundary(r: &mut Reader, key: &str) -> Result<SignalBoundary, ConfigError> {
    let Some((v, line)) = r.take(key) else {
        return Ok(SignalBoundary::NoFlux);
    };
    if v == "no-flux" {
        return Ok(SignalBoundary::NoFlux);
    }
    v.strip_prefix("dirichlet")
        .and_then(|rest| rest.trim().parse::<f64>().ok())
        .map(SignalBoundary::Dirichlet)
        .ok_or_else(|| {
            parse_err(
                line,
                format!("`{key}` must be `no-flux` or `dirichlet <value>`, got `{v}`"),
            )
        })
}

fn read_density_boundary(r: &mut Reader, key: &str) -> Result<DensityBoundary, ConfigError> {
    match r.take(key) {
        None => Ok(DensityBoundary::NoFlux),
        Some((v, _)) if v == "no-flux" => Ok(DensityBoundary::NoFlux),
        Some((v, line)) => Err(parse_err(
            line,
            format!("`{key}` must be `no-flux`, got `{v}`"),
        )),
    }
}

fn read_boundary(r: &mut Reader) -> Result<BoundarySpec, ConfigError> {
    Ok(BoundarySpec {
        rho_left: read_density_boundary(r, "rho_left")?,
        rho_right: read_density_boundary(r, "rho_right")?,
        s_left: read_signal_boundary(r, "s_left")?,
        s_right: read_signal_boundary(r, "s_right")?,
    })
}

fn read_init(r: &mut Reader) -> Result<InitSpec, ConfigError> {
    let (kind, line) = r.string("kind")?;
    Ok(match kind.as_str() {
        "gaussian" => InitSpec::Gaussian {
            center: r.float("center")?,
            width: r.float("width")?,
            mass: r.float("mass")?,
        },
        "half-gaussian" => InitSpec::HalfGaussian {
            center: r.float("center")?,
            width: r.float("width")?,
            mass: r.float("mass")?,
        },
        "plateau" => InitSpec::Plateau {
            edge: r.float("edge")?,
            height: r.float("height")?,
        },
        "ks-profile" => InitSpec::KsProfile {
            mass: r.float("mass")?,
            shift: r.float("shift")?,
        },
        "two-signal-profile" => InitSpec::TwoSignalProfile {
            mass: r.float("mass")?,
            shift: r.float("shift")?,
        },
        "spike" => InitSpec::Spike {
            mass: r.float("mass")?,
            stretch: r.float_or("stretch", 1.0)?,
        },
        other => return Err(unknown_kind(line, "initial data kind", other)),
    })
}

fn read_run(r: &mut Reader) -> Result<SimConfig, ConfigError> {
    let defaults = SimConfig::default();
    let clamp_epsilon = match r.take("clamp") {
        None => None,
        Some((v, _)) if v == "off" => None,
        Some((v, line)) => Some(v.parse::<f64>().map_err(|_| {
            parse_err(
                line,
                format!("`clamp` must be `off` or a number, got `{v}`"),
            )
        })?),
    };
    let breakdown_policy = match r.take("policy") {
        None => defaults.breakdown_policy,
        Some((v, line)) => match v.as_str() {
            "halt" => BreakdownPolicy::Halt,
            "clamp-and-continue" => BreakdownPolicy::ClampAndContinue,
            other => return Err(unknown_kind(line, "breakdown policy", other)),
        },
    };
    Ok(SimConfig {
        dt_max: r.float_or("dt_max", defaults.dt_max)?,
        cfl: r.float_or("cfl", defaults.cfl)?,
        t_end: r.float_or("t_end", defaults.t_end)?,
        clamp_epsilon,
        output_every: r.float_or("output_every", defaults.output_every)?,
        breakdown_policy,
    })
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn signal_boundary(b: SignalBoundary) -> String {
    match b {
        SignalBoundary::NoFlux => "no-flux".into(),
        SignalBoundary::Dirichlet(v) => format!("dirichlet {}", num(v)),
    }
}

pub(super) fn serialize(p: &ScenarioPreset) -> String {
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        if k.is_empty() {
            out.push('\n');
        } else if k.starts_with('[') {
            let _ = writeln!(out, "{k}");
        } else {
            let _ = writeln!(out, "{k} = {v}");
        }
    };
    let spec = &p.spec;

    kv("[model]", String::new());
    match spec.sensitivity {
        SensitivityKind::LogGradient { chi } => {
            kv("sensitivity", "log-gradient".into());
            kv("chi", num(chi));
        }
        SensitivityKind::BinaryTwoSignal { chi_s, chi_a } => {
            kv("sensitivity", "binary-two-signal".into());
            kv("chi_s", num(chi_s));
            kv("chi_a", num(chi_a));
        }
        SensitivityKind::Tanh { chi, f_scale } => {
            kv("sensitivity", "tanh".into());
            kv("chi", num(chi));
            kv("f_scale", num(f_scale));
        }
        SensitivityKind::ThresholdedSign { chi, s0 } => {
            kv("sensitivity", "thresholded-sign".into());
            kv("chi", num(chi));
            kv("s0", num(s0));
        }
        SensitivityKind::ThresholdedLogGradient { chi, s0 } => {
            kv("sensitivity", "thresholded-log-gradient".into());
            kv("chi", num(chi));
            kv("s0", num(s0));
        }
    }
    match spec.consumption {
        ConsumptionKind::Constant { k } => {
            kv("consumption", "constant".into());
            kv("k", num(k));
        }
        ConsumptionKind::Linear { k } => {
            kv("consumption", "linear".into());
            kv("k", num(k));
        }
        ConsumptionKind::Power { k, m } => {
            kv("consumption", "power".into());
            kv("k", num(k));
            kv("m", num(m));
        }
    }
    match spec.growth {
        GrowthKind::None => kv("growth", "none".into()),
        GrowthKind::Threshold { r, s0 } => {
            kv("growth", "threshold".into());
            kv("r", num(r));
            kv("growth_s0", num(s0));
        }
    }
    kv("d", num(spec.d));
    kv("signal_diffusivity", num(spec.signal_diffusivity));
    if let Some(att) = spec.attractant {
        kv("attractant_diffusivity", num(att.diffusivity));
        kv("alpha", num(att.alpha));
        kv("beta", num(att.beta));
    }

    kv("", String::new());
    kv("[grid]", String::new());
    kv(
        "domain",
        match p.grid.domain_kind {
            DomainKind::TruncatedLine => "truncated-line",
            DomainKind::HalfLine => "half-line",
        }
        .into(),
    );
    kv("x_min", num(p.grid.x_min));
    kv("x_max", num(p.grid.x_max));
    kv("cells", p.grid.n_cells.to_string());

    kv("", String::new());
    kv("[boundary]", String::new());
    kv("rho_left", "no-flux".into());
    kv("rho_right", "no-flux".into());
    kv("s_left", signal_boundary(p.bc.s_left));
    kv("s_right", signal_boundary(p.bc.s_right));

    kv("", String::new());
    kv("[init]", String::new());
    match p.init {
        InitSpec::Gaussian {
            center,
            width,
            mass,
        }
        | InitSpec::HalfGaussian {
            center,
            width,
            mass,
        } => {
            let kind = if matches!(p.init, InitSpec::Gaussian { .. }) {
                "gaussian"
            } else {
                "half-gaussian"
            };
            kv("kind", kind.into());
            kv("center", num(center));
            kv("width", num(width));
            kv("mass", num(mass));
        }
        InitSpec::Plateau { edge, height } => {
            kv("kind", "plateau".into());
            kv("edge", num(edge));
            kv("height", num(height));
        }
        InitSpec::KsProfile { mass, shift } | InitSpec::TwoSignalProfile { mass, shift } => {
            let kind = if matches!(p.init, InitSpec::KsProfile { .. }) {
                "ks-profile"
            } else {
                "two-signal-profile"
            };
            kv("kind", kind.into());
            kv("mass", num(mass));
            kv("shift", num(shift));
        }
        InitSpec::Spike { mass, stretch } => {
            kv("kind", "spike".into());
            kv("mass", num(mass));
            kv("stretch", num(stretch));
        }
    }
    kv("s_init", num(p.s_init));

    let c = &p.config;
    kv("", String::new());
    kv("[run]", String::new());
    kv("name", p.name.clone());
    kv("expected", p.expected.outcome.as_str().into());
    kv("t_end", num(c.t_end));
    kv("dt_max", num(c.dt_max));
    kv("cfl", num(c.cfl));
    kv("output_every", num(c.output_every));
    kv("clamp", c.clamp_epsilon.map_or_else(|| "off".into(), num));
    kv(
        "policy",
        match c.breakdown_policy {
            BreakdownPolicy::Halt => "halt",
            BreakdownPolicy::ClampAndContinue => "clamp-and-continue",
        }
        .into(),
    );
    out
}
