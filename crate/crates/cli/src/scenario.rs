use anyhow::{bail, Context, Result};
use clap::Args as ClapArgs;
use sgg_core::scenarios::{preset, ConfigDoc, ScenarioPreset};
use sgg_core::solver::{run, FieldState, Grid1D};
use sgg_core::RunReport;
use std::path::PathBuf;

/// Scenario selection plus the overrides every running command accepts.
#[derive(ClapArgs, Clone)]
pub struct ScenarioArgs {
    /// Named preset.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub preset: Option<String>,
    /// Scenario file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the final time.
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Override the cell width, keeping the domain.
    #[arg(long)]
    pub dx: Option<f64>,
    /// Signal floor after each step: a positive number or `off`.
    #[arg(long, value_name = "EPS|off")]
    pub clamp: Option<String>,
}

impl ScenarioArgs {
    pub fn document(&self) -> Result<ConfigDoc> {
        match (&self.preset, &self.config) {
            (Some(name), _) => Ok(ConfigDoc::parse(&preset(name)?.to_config_string())?),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                ConfigDoc::parse(&text).with_context(|| format!("in {}", path.display()))
            }
            (None, None) => bail!("pass --preset or --config"),
        }
    }

    pub fn apply(&self, mut p: ScenarioPreset) -> Result<ScenarioPreset> {
        if let Some(t_end) = self.t_end {
            p.config.t_end = t_end;
        }
        if let Some(dx) = self.dx {
            p.grid = Grid1D::with_spacing(p.grid.x_min, p.grid.x_max, dx, p.grid.domain_kind)?;
        }
        if let Some(clamp) = &self.clamp {
            p.config.clamp_epsilon = match clamp.as_str() {
                "off" => None,
                v => Some(
                    v.parse::<f64>()
                        .with_context(|| format!("--clamp expects a number or `off`, got `{v}`"))?,
                ),
            };
        }
        Ok(p.finalize()?)
    }

    pub fn load(&self) -> Result<ScenarioPreset> {
        let preset = self.document()?.to_preset();
        let preset = match (&self.config, &self.preset) {
            (Some(path), None) => preset.with_context(|| format!("in {}", path.display()))?,
            _ => preset?,
        };
        self.apply(preset)
    }
}

pub fn simulate(
    p: &ScenarioPreset,
    observer: impl FnMut(&FieldState),
) -> Result<(FieldState, RunReport)> {
    let init = p.initial_state()?;
    Ok(run(&init, &p.spec, &p.grid, &p.bc, &p.config, observer)?)
}

/// `--out`, then `SGG_OUT_DIR`, else nothing.
#[derive(ClapArgs, Clone)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, env = "SGG_OUT_DIR")]
    pub out: Option<PathBuf>,
}

impl OutArgs {
    pub fn write(&self, file: &str, contents: &str) -> Result<Option<PathBuf>> {
        let Some(dir) = &self.out else {
            return Ok(None);
        };
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join(file);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        Ok(Some(path))
    }
}
