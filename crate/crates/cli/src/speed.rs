use crate::Outcome;
use anyhow::Result;
use clap::{ArgGroup, Args as ClapArgs};
use sgg_core::analytic::{gogrow_speed, ks_speed, logsens_speed, two_signal_speed};

#[derive(ClapArgs)]
#[command(group(ArgGroup::new("model").required(true).args(["ks", "gogrow", "logsens", "two_signal"])))]
pub struct Args {
    /// Keller–Segel wave: needs -k, -M, --s-init.
    #[arg(long)]
    ks: bool,
    /// Threshold growth with sign sensitivity: needs --chi, -r, -d.
    #[arg(long)]
    gogrow: bool,
    /// Threshold growth with log sensitivity: needs --chi, -r, -d, --s-init, --s0.
    #[arg(long)]
    logsens: bool,
    /// Two-signal wave: needs --chi-s, --chi-a, --alpha, --d-a.
    #[arg(long)]
    two_signal: bool,

    #[arg(short = 'k', requires = "ks")]
    k: Option<f64>,
    /// Total cell mass.
    #[arg(short = 'M', requires = "ks")]
    mass: Option<f64>,
    #[arg(long)]
    s_init: Option<f64>,
    #[arg(long)]
    chi: Option<f64>,
    /// Growth rate.
    #[arg(short = 'r')]
    r: Option<f64>,
    /// Cell diffusivity.
    #[arg(short = 'd')]
    d: Option<f64>,
    /// Signal threshold.
    #[arg(long, requires = "logsens")]
    s0: Option<f64>,
    #[arg(long, requires = "two_signal")]
    chi_s: Option<f64>,
    #[arg(long, requires = "two_signal")]
    chi_a: Option<f64>,
    /// Attractant decay rate.
    #[arg(long, requires = "two_signal")]
    alpha: Option<f64>,
    /// Attractant diffusivity.
    #[arg(long, requires = "two_signal")]
    d_a: Option<f64>,
}

fn need(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| anyhow::anyhow!("missing {flag}"))
}

pub fn run(a: Args) -> Result<Outcome> {
    let result = if a.ks {
        ks_speed(
            need(a.k, "-k")?,
            need(a.mass, "-M")?,
            need(a.s_init, "--s-init")?,
        )?
    } else if a.gogrow {
        gogrow_speed(need(a.chi, "--chi")?, need(a.r, "-r")?, need(a.d, "-d")?)?
    } else if a.logsens {
        logsens_speed(
            need(a.chi, "--chi")?,
            need(a.r, "-r")?,
            need(a.d, "-d")?,
            need(a.s_init, "--s-init")?,
            need(a.s0, "--s0")?,
        )?
    } else {
        two_signal_speed(
            need(a.chi_s, "--chi-s")?,
            need(a.chi_a, "--chi-a")?,
            need(a.alpha, "--alpha")?,
            need(a.d_a, "--d-a")?,
        )?
    };
    println!(
        "{}",
        serde_json::json!({ "c": result.c, "branch": result.branch })
    );
    Ok(Outcome::Expected)
}
