use crate::scenario::{simulate, OutArgs, ScenarioArgs};
use crate::Outcome;
use anyhow::{ensure, Context, Result};
use clap::Args as ClapArgs;
use rayon::prelude::*;
use sgg_core::io::fmt_f64;
use std::fmt::Write as _;

#[derive(ClapArgs)]
pub struct Args {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Parameter to vary, as `section.key` (e.g. `model.chi`).
    #[arg(long)]
    param: String,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    values: Vec<String>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    out: OutArgs,
}

struct Row {
    value: String,
    analytic: Option<f64>,
    fitted: Option<f64>,
    branch: String,
    status: String,
}

fn evaluate(args: &Args, value: &str) -> Result<Row> {
    let mut doc = args.scenario.document()?;
    doc.set(&args.param, value)?;
    let p = args.scenario.apply(doc.to_preset()?)?;
    let (_, report) = simulate(&p, |_| {})?;
    let status = if report.breakdown.occurred && p.config.clamp_epsilon.is_none() {
        "breakdown"
    } else if report.invalid {
        "invalid"
    } else {
        "ok"
    };
    Ok(Row {
        value: value.to_string(),
        analytic: p.expected.speed.as_ref().map(|s| s.c),
        fitted: report.speed_fit.map(|f| f.c_fit),
        branch: p
            .expected
            .speed
            .as_ref()
            .map_or_else(|| "none".into(), |s| format!("{:?}", s.branch)),
        status: status.into(),
    })
}

pub fn run(args: Args) -> Result<Outcome> {
    let values: Vec<String> = args
        .values
        .iter()
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect();
    ensure!(!values.is_empty(), "--values needs at least one value");
    for v in &values {
        v.parse::<f64>()
            .with_context(|| format!("sweep value `{v}` is not a number"))?;
    }
    // surface bad parameter names before spending time on runs
    let mut probe = args.scenario.document()?;
    probe.set(&args.param, &values[0])?;
    args.scenario.apply(probe.to_preset()?)?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        ensure!(jobs > 0, "--jobs must be at least 1");
        pool = pool.num_threads(jobs);
    }
    let rows: Vec<Row> = pool.build()?.install(|| {
        values
            .par_iter()
            .map(|v| {
                evaluate(&args, v).unwrap_or_else(|e| Row {
                    value: v.clone(),
                    analytic: None,
                    fitted: None,
                    branch: "none".into(),
                    status: format!("error: {}", e.to_string().replace(',', ";")),
                })
            })
            .collect()
    });

    let axis = args.param.rsplit('.').next().unwrap_or(&args.param);
    let mut csv = format!("{axis},c_analytic,c_fit,branch,status\n");
    let opt = |v: Option<f64>| v.map_or_else(String::new, fmt_f64);
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            r.value,
            opt(r.analytic),
            opt(r.fitted),
            r.branch,
            r.status
        );
    }
    match args.out.write("sweep.csv", &csv)? {
        Some(path) => eprintln!("wrote {}", path.display()),
        None => print!("{csv}"),
    }
    Ok(Outcome::Expected)
}
