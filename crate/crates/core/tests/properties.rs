use proptest::prelude::*;
use sgg_core::analytic::{gogrow_speed, ks_speed};
use sgg_core::diagnostics::monitor;
use sgg_core::model::{ConsumptionKind, GrowthKind, ModelSpec, SensitivityKind};
use sgg_core::solver::{
    initial_condition, run, BoundarySpec, DomainKind, Grid1D, InitKind, SimConfig, Stepper,
};

fn spec(sensitivity: SensitivityKind, consumption: ConsumptionKind, sig_d: f64) -> ModelSpec {
    ModelSpec {
        sensitivity,
        consumption,
        growth: GrowthKind::None,
        d: 1.0,
        signal_diffusivity: sig_d,
        attractant: None,
    }
}

fn steps(spec: &ModelSpec, grid: &Grid1D, init: &InitKind, s_init: f64, n: usize) -> Vec<f64> {
    let config = SimConfig {
        t_end: 1e9,
        ..SimConfig::default()
    };
    let bc = BoundarySpec::default();
    let mut stepper = Stepper::new(spec, grid, &bc, &config).unwrap();
    let mut state = initial_condition(init, grid, s_init, spec).unwrap();
    let mut masses = vec![state.mass(grid.dx())];
    for _ in 0..n {
        stepper.step(&mut state, f64::INFINITY).unwrap();
        masses.push(state.mass(grid.dx()));
    }
    masses
}

#[test]
fn mass_conserved_over_ten_thousand_steps() {
    let grid = Grid1D::with_spacing(0.0, 60.0, 0.1, DomainKind::TruncatedLine).unwrap();
    let init = InitKind::Gaussian {
        center: 20.0,
        width: 2.0,
        mass: 1.0,
    };
    for model in [
        spec(
            SensitivityKind::LogGradient { chi: 2.0 },
            ConsumptionKind::Linear { k: 1.0 },
            1.0,
        ),
        spec(
            SensitivityKind::Tanh {
                chi: 1.5,
                f_scale: 50.0,
            },
            ConsumptionKind::Linear { k: 1.0 },
            0.0,
        ),
        spec(
            SensitivityKind::ThresholdedSign { chi: 1.0, s0: 0.5 },
            ConsumptionKind::Power { k: 1.0, m: 0.5 },
            0.5,
        ),
    ] {
        let masses = steps(&model, &grid, &init, 1.0, 10_000);
        let m0 = masses[0];
        let drift = masses
            .iter()
            .map(|m| (m - m0).abs() / m0)
            .fold(0.0, f64::max);
        assert!(drift <= 1e-12, "{model:?}: relative drift {drift:e}");
    }
}

#[test]
fn clamped_wave_speed_bounded_by_total_mass() {
    let grid = Grid1D::with_spacing(0.0, 80.0, 0.1, DomainKind::TruncatedLine).unwrap();
    let model = spec(
        SensitivityKind::LogGradient { chi: 2.0 },
        ConsumptionKind::Constant { k: 1.0 },
        0.0,
    );
    let init = InitKind::Gaussian {
        center: 15.0,
        width: 1.0,
        mass: 2.0,
    };
    let config = SimConfig {
        t_end: 20.0,
        clamp_epsilon: Some(1e-12),
        ..SimConfig::default()
    };
    let st = initial_condition(&init, &grid, 1.0, &model).unwrap();
    let (_, report) = run(
        &st,
        &model,
        &grid,
        &BoundarySpec::default(),
        &config,
        |_| {},
    )
    .unwrap();
    let fit = report.speed_fit.unwrap();
    let c = ks_speed(1.0, 2.0, 1.0).unwrap().c;
    // cells stranded where the signal is flat no longer move with the wave
    assert!(fit.c_fit > 0.0 && fit.c_fit <= c, "c_fit {}", fit.c_fit);
    assert!(fit.r_squared >= 0.99);
}

#[test]
fn refinement_approaches_pushed_speed() {
    let model = ModelSpec {
        growth: GrowthKind::Threshold { r: 1.0, s0: 2.0 },
        ..spec(
            SensitivityKind::ThresholdedSign { chi: 2.0, s0: 2.0 },
            ConsumptionKind::Linear { k: 1.0 },
            0.0,
        )
    };
    let exact = gogrow_speed(2.0, 1.0, 1.0).unwrap().c;
    let fitted: Vec<f64> = [0.2, 0.1]
        .iter()
        .map(|&dx| {
            let grid = Grid1D::with_spacing(0.0, 120.0, dx, DomainKind::TruncatedLine).unwrap();
            let st = initial_condition(
                &InitKind::Plateau {
                    edge: 10.0,
                    height: 1.0,
                },
                &grid,
                8.0,
                &model,
            )
            .unwrap();
            let config = SimConfig {
                t_end: 40.0,
                ..SimConfig::default()
            };
            let (_, report) = run(
                &st,
                &model,
                &grid,
                &BoundarySpec::default(),
                &config,
                |_| {},
            )
            .unwrap();
            assert!(!report.invalid);
            report.speed_fit.unwrap().c_fit
        })
        .collect();
    assert!(
        (fitted[0] - fitted[1]).abs() < (fitted[0] - exact).abs(),
        "{fitted:?} vs {exact}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn signal_bounds_and_density_sign(
        chi in 0.2f64..4.0,
        k in 0.1f64..3.0,
        sig_d in 0.0f64..2.0,
        mass in 0.1f64..5.0,
        center in 10.0f64..30.0,
        s_init in 0.5f64..4.0,
    ) {
        let grid = Grid1D::with_spacing(0.0, 40.0, 0.2, DomainKind::TruncatedLine).unwrap();
        let model = spec(SensitivityKind::LogGradient { chi }, ConsumptionKind::Linear { k }, sig_d);
        let init = InitKind::Gaussian { center, width: 1.5, mass };
        let st = initial_condition(&init, &grid, s_init, &model).unwrap();
        let config = SimConfig { t_end: 5.0, ..SimConfig::default() };
        let mut worst = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
        let (_, report) = run(&st, &model, &grid, &BoundarySpec::default(), &config, |s| {
            let m = monitor(s, &grid);
            worst = (worst.0.min(m.min_s), worst.1.max(m.max_s), worst.2.min(m.min_rho));
        }).unwrap();
        prop_assert!(!report.breakdown.occurred);
        prop_assert!(worst.0 > 0.0);
        prop_assert!(worst.1 <= s_init * (1.0 + 1e-12));
        prop_assert!(worst.2 >= 0.0);
    }
}
