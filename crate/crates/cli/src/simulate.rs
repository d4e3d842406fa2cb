use crate::scenario::{simulate, OutArgs, ScenarioArgs};
use crate::Outcome;
use anyhow::{ensure, Result};
use clap::Args as ClapArgs;
use sgg_core::io::{snapshot_header, write_snapshot_rows};
use sgg_core::FieldState;
use std::path::PathBuf;

#[derive(ClapArgs)]
pub struct Args {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    out: OutArgs,
    /// Time between stored snapshots; the final state is always stored.
    #[arg(long, default_value_t = 1.0)]
    snapshot_every: f64,
    /// One numbered CSV per snapshot instead of a single long-format file.
    #[arg(long)]
    split_snapshots: bool,
}

pub fn run(args: Args) -> Result<Outcome> {
    ensure!(
        args.snapshot_every > 0.0 && args.snapshot_every.is_finite(),
        "--snapshot-every must be > 0"
    );
    let p = args.scenario.load()?;
    let out = OutArgs {
        out: Some(args.out.out.clone().unwrap_or_else(|| PathBuf::from("."))),
    };

    let header = snapshot_header(p.spec.attractant.is_some());
    let mut files: Vec<String> = vec![String::from(header)];
    let mut push = |state: &FieldState| {
        if args.split_snapshots && !files.last().is_some_and(|f| f.len() == header.len()) {
            files.push(String::from(header));
        }
        write_snapshot_rows(files.last_mut().unwrap(), state, &p.grid);
    };
    let mut next = 0.0;
    let mut last_written = f64::NAN;
    let (final_state, report) = simulate(&p, |state| {
        if state.t >= next - 1e-9 {
            push(state);
            last_written = state.t;
            while next <= state.t + 1e-9 {
                next += args.snapshot_every;
            }
        }
    })?;
    if final_state.t != last_written {
        push(&final_state);
    }

    if args.split_snapshots {
        for (k, csv) in files.iter().enumerate() {
            out.write(&format!("{}.snapshot-{k:04}.csv", p.name), csv)?;
        }
    } else {
        out.write(&format!("{}.snapshots.csv", p.name), &files[0])?;
    }
    out.write(&format!("{}.report.json", p.name), &report.to_json())?;
    out.write(&format!("{}.front.csv", p.name), &report.front.to_csv())?;

    let broke_down = report.breakdown.occurred
        && p.config.clamp_epsilon.is_none()
        && p.config.breakdown_policy == sgg_core::solver::BreakdownPolicy::Halt;
    let as_expected = p.expected.outcome.matches_breakdown(broke_down);
    let mut line = format!(
        "{}: t={} expected={} observed={}",
        p.name,
        report.t_final,
        p.expected.outcome.as_str(),
        if broke_down { "breakdown" } else { "completed" }
    );
    if let Some(t) = report.breakdown.t_break {
        line.push_str(&format!(" t_break={t}"));
    }
    if let Some(fit) = &report.speed_fit {
        line.push_str(&format!(" c_fit={} r2={}", fit.c_fit, fit.r_squared));
    }
    if let Some(speed) = &p.expected.speed {
        line.push_str(&format!(" c_analytic={}", speed.c));
    }
    if report.invalid {
        line.push_str(" invalid=front-reached-boundary");
    }
    println!("{line}");
    Ok(if as_expected {
        Outcome::Expected
    } else {
        Outcome::Unexpected
    })
}
