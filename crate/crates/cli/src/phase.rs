use crate::scenario::{simulate, OutArgs, ScenarioArgs};
use crate::Outcome;
use anyhow::{bail, ensure, Context, Result};
use clap::Args as ClapArgs;
use sgg_core::analytic::{logsens_phase_curves, logsens_speed, PhaseCurves};
use sgg_core::diagnostics::{phase_portrait, PortraitOptions};
use sgg_core::model::{ConsumptionKind, GrowthKind, SensitivityKind};

#[derive(ClapArgs)]
pub struct Args {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Cells flagged on each side of the interface.
    #[arg(long, default_value_t = 3)]
    exclude_cells: usize,
    /// Window `LO,HI` around the interface.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true, default_values_t = [-10.0, 20.0])]
    window: Vec<f64>,
    #[command(flatten)]
    out: OutArgs,
}

pub fn run(args: Args) -> Result<Outcome> {
    ensure!(args.window.len() == 2, "--window expects LO,HI");
    let p = args.scenario.load()?;
    let (chi, s0, k, r) = match (p.spec.sensitivity, p.spec.consumption, p.spec.growth) {
        (
            SensitivityKind::ThresholdedLogGradient { chi, s0 },
            ConsumptionKind::Linear { k },
            GrowthKind::Threshold { r, .. },
        ) => (chi, s0, k, r),
        _ => bail!("phase-plane needs thresholded log-gradient sensitivity, linear uptake and threshold growth"),
    };
    let d = p.spec.d;
    let (state, report) = simulate(&p, |_| {})?;
    if report.breakdown.occurred {
        bail!("the run broke down at t = {:?}", report.breakdown.t_break);
    }
    let c_fit = report
        .speed_fit
        .as_ref()
        .map(|f| f.c_fit)
        .context("no speed fit for this run")?;
    // the closed form ignores signal diffusion
    let c_formula = logsens_speed(chi, r, d, p.s_init, s0)?.c;
    let curves_at = |c: f64| -> Result<PhaseCurves> {
        Ok(logsens_phase_curves(
            c,
            d,
            k,
            chi,
            PhaseCurves::critical_flux(c, k, chi),
            r,
        )?)
    };
    let formula = curves_at(c_formula)?;
    let fitted = if p.spec.signal_diffusivity > 0.0 {
        Some(curves_at(c_fit)?)
    } else {
        None
    };

    let opts = PortraitOptions {
        threshold: Some(s0),
        exclude_cells: args.exclude_cells,
        window: Some((args.window[0], args.window[1])),
    };
    let portrait = phase_portrait(&state, &p.grid, c_formula, &opts);
    let front = |x: f64| formula.front(x);
    let back = |x: f64| formula.back(x);
    let mut named: Vec<(&str, &dyn Fn(f64) -> f64)> =
        vec![("curve_front", &front), ("curve_back", &back)];
    let (front_fit, back_fit);
    if let Some(f) = &fitted {
        front_fit = move |x: f64| f.front(x);
        back_fit = move |x: f64| f.back(x);
        named.push(("curve_front_fit", &front_fit));
        named.push(("curve_back_fit", &back_fit));
    }
    let csv = portrait.to_csv(&named);

    let rho_max = state.rho.iter().cloned().fold(0.0, f64::max);
    let dist = portrait.max_distance_to_curves(&[&front, &back], 1.2 * rho_max);
    eprintln!(
        "c_formula={c_formula} c_fit={c_fit} max_distance={dist} rho_max={rho_max} back_vertex={}",
        portrait
            .back_vertex()
            .map_or_else(|| "none".into(), |v| v.to_string())
    );
    match args.out.write(&format!("{}.phase.csv", p.name), &csv)? {
        Some(path) => eprintln!("wrote {}", path.display()),
        None => print!("{csv}"),
    }
    Ok(Outcome::Expected)
}
