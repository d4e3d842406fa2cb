use sgg_core::scenarios::{preset, Outcome, ScenarioPreset, PRESET_NAMES};
use sgg_core::solver::{run, BreakdownCause};
use sgg_core::RunReport;
use std::time::{Duration, Instant};

fn simulate(p: &ScenarioPreset) -> RunReport {
    let st = p.initial_state().unwrap();
    run(&st, &p.spec, &p.grid, &p.bc, &p.config, |_| {})
        .unwrap()
        .1
}

#[test]
fn every_preset_meets_its_expected_outcome() {
    for name in PRESET_NAMES {
        let p = preset(name).unwrap();
        let start = Instant::now();
        let report = simulate(&p);
        let elapsed = start.elapsed();
        assert!(elapsed < Duration::from_secs(60), "{name} took {elapsed:?}");
        assert!(
            p.expected.outcome.matches_breakdown(
                report.breakdown.occurred
                    && report.breakdown.cause == Some(BreakdownCause::NonpositiveSignal)
            ),
            "{name}: {:?}",
            report.breakdown
        );
        assert!(!report.invalid, "{name} reached the right boundary");
        match p.expected.outcome {
            Outcome::Breakdown => assert!(report.t_final < p.config.t_end),
            Outcome::Rescued | Outcome::TravelingWave => {
                let fit = report.speed_fit.unwrap();
                assert!(fit.c_fit > 0.0 && fit.r_squared >= 0.99, "{name}: {fit:?}");
                if let Some(speed) = &p.expected.speed {
                    let rel = (fit.c_fit - speed.c).abs() / speed.c;
                    assert!(rel < 0.1, "{name}: fit {} vs {}", fit.c_fit, speed.c);
                }
            }
            Outcome::StationarySpike => {
                let xs: Vec<f64> = report.front.samples.iter().map(|s| s.1).collect();
                let tail = &xs[xs.len() / 2..];
                let spread = tail.iter().cloned().fold(f64::MIN, f64::max)
                    - tail.iter().cloned().fold(f64::MAX, f64::min);
                assert!(spread < p.grid.dx(), "{name}: front drifted by {spread}");
            }
        }
    }
}

#[test]
fn shipped_config_files_match_builtin_presets() {
    for name in PRESET_NAMES {
        let path = format!("{}/presets/{name}.ini", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed =
            ScenarioPreset::from_config_str(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
        assert_eq!(parsed, preset(name).unwrap(), "{name}");
    }
}
