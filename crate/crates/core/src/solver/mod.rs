//! Finite-volume, semi-implicit, upwind integrator.
//!
//! One step advances `ρ` by explicit upwind advection, backward-Euler
//! diffusion and explicit growth, then `S` by explicit uptake and
//! backward-Euler diffusion, then `A` likewise. All source terms read the
//! fields at the start of the step.

mod init;
mod tridiag;

pub use init::{initial_condition, InitKind};
pub use tridiag::solve_tridiagonal;

use crate::diagnostics::{RunRecorder, RunReport};
use crate::model::{
    advection_velocity, reaction_rate, ConsumptionKind, FaceSample, ModelError, ModelSpec,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tridiag::{implicit_diffusion, DiffusionWork};

/// Clamp value used by [`BreakdownPolicy::ClampAndContinue`] when no
/// `clamp_epsilon` is configured.
pub const DEFAULT_RESCUE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("invalid boundary conditions: {0}")]
    Boundary(String),
    #[error("invalid run configuration: {0}")]
    Config(String),
    #[error("state does not match the grid: {0}")]
    Shape(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("numerical breakdown at t = {t}: {cause:?} in cell {location}")]
    Breakdown {
        t: f64,
        cause: BreakdownCause,
        location: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainKind {
    TruncatedLine,
    HalfLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub domain_kind: DomainKind,
}

impl Grid1D {
    pub fn new(
        x_min: f64,
        x_max: f64,
        n_cells: usize,
        domain_kind: DomainKind,
    ) -> Result<Self, SolverError> {
        let g = Grid1D {
            x_min,
            x_max,
            n_cells,
            domain_kind,
        };
        g.validate()?;
        Ok(g)
    }

    /// Grid with spacing as close to `dx` as the interval allows.
    pub fn with_spacing(
        x_min: f64,
        x_max: f64,
        dx: f64,
        domain_kind: DomainKind,
    ) -> Result<Self, SolverError> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(SolverError::Grid(format!("dx must be > 0, got {dx}")));
        }
        let n = ((x_max - x_min) / dx).round();
        if !(1.0..1e9).contains(&n) {
            return Err(SolverError::Grid(format!(
                "cannot fit cells of width {dx} in [{x_min}, {x_max}]"
            )));
        }
        Grid1D::new(x_min, x_max, n as usize, domain_kind)
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            return Err(SolverError::Grid(format!(
                "need x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.n_cells < 16 {
            return Err(SolverError::Grid(format!(
                "need at least 16 cells, got {}",
                self.n_cells
            )));
        }
        if self.domain_kind == DomainKind::HalfLine && self.x_min != 0.0 {
            return Err(SolverError::Grid("a half-line grid starts at x = 0".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityBoundary {
    NoFlux,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SignalBoundary {
    NoFlux,
    Dirichlet(f64),
}

impl SignalBoundary {
    fn value(&self) -> Option<f64> {
        match *self {
            SignalBoundary::NoFlux => None,
            SignalBoundary::Dirichlet(v) => Some(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub rho_left: DensityBoundary,
    pub rho_right: DensityBoundary,
    pub s_left: SignalBoundary,
    pub s_right: SignalBoundary,
}

impl Default for BoundarySpec {
    fn default() -> Self {
        BoundarySpec {
            rho_left: DensityBoundary::NoFlux,
            rho_right: DensityBoundary::NoFlux,
            s_left: SignalBoundary::NoFlux,
            s_right: SignalBoundary::NoFlux,
        }
    }
}

impl BoundarySpec {
    pub fn validate(&self, grid: &Grid1D) -> Result<(), SolverError> {
        for (side, b) in [("left", self.s_left), ("right", self.s_right)] {
            if let SignalBoundary::Dirichlet(v) = b {
                if !(v.is_finite() && v > 0.0) {
                    return Err(SolverError::Boundary(format!(
                        "{side} Dirichlet value must be > 0, got {v}"
                    )));
                }
            }
        }
        if grid.domain_kind == DomainKind::HalfLine
            && !matches!(self.s_left, SignalBoundary::Dirichlet(_))
        {
            return Err(SolverError::Boundary(
                "a half-line domain needs a Dirichlet signal value at x = 0".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub t: f64,
    pub rho: Vec<f64>,
    pub s: Vec<f64>,
    pub a: Option<Vec<f64>>,
}

impl FieldState {
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn mass(&self, dx: f64) -> f64 {
        self.rho.iter().sum::<f64>() * dx
    }

    fn check(&self, grid: &Grid1D, spec: &ModelSpec) -> Result<(), SolverError> {
        let n = grid.n_cells;
        if self.rho.len() != n || self.s.len() != n {
            return Err(SolverError::Shape(format!(
                "expected {n} cells, got rho {} and S {}",
                self.rho.len(),
                self.s.len()
            )));
        }
        match (&self.a, spec.attractant.is_some()) {
            (Some(a), true) if a.len() == n => {}
            (None, false) => {}
            _ => {
                return Err(SolverError::Shape(
                    "attractant field must be present exactly when the model has one".into(),
                ))
            }
        }
        if self.rho.iter().any(|&r| !(r >= 0.0)) {
            return Err(SolverError::Shape("density must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BreakdownPolicy {
    Halt,
    ClampAndContinue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub dt_max: f64,
    pub cfl: f64,
    pub t_end: f64,
    /// `S ← max(S, ε)` after every step.
    pub clamp_epsilon: Option<f64>,
    pub output_every: f64,
    pub breakdown_policy: BreakdownPolicy,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt_max: 0.01,
            cfl: 0.9,
            t_end: 10.0,
            clamp_epsilon: None,
            output_every: 0.25,
            breakdown_policy: BreakdownPolicy::Halt,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let bad = |msg: String| Err(SolverError::Config(msg));
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.dt_max > 0.0 && self.dt_max.is_finite()) {
            return bad(format!("dt_max must be > 0, got {}", self.dt_max));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be >= 0, got {}", self.t_end));
        }
        if !(self.output_every > 0.0 && self.output_every.is_finite()) {
            return bad(format!(
                "output_every must be > 0, got {}",
                self.output_every
            ));
        }
        if let Some(eps) = self.clamp_epsilon {
            if !(eps > 0.0 && eps.is_finite()) {
                return bad(format!("clamp epsilon must be > 0, got {eps}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BreakdownCause {
    NonpositiveSignal,
    NonfiniteValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRecord {
    pub occurred: bool,
    pub t_break: Option<f64>,
    pub cause: Option<BreakdownCause>,
    pub location: Option<usize>,
}

impl BreakdownRecord {
    pub fn none() -> Self {
        BreakdownRecord {
            occurred: false,
            t_break: None,
            cause: None,
            location: None,
        }
    }

    fn at(t: f64, cause: BreakdownCause, location: usize) -> Self {
        BreakdownRecord {
            occurred: true,
            t_break: Some(t),
            cause: Some(cause),
            location: Some(location),
        }
    }
}

/// Result of a single accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub dt: f64,
    /// Set when the signal went non-positive and was clamped under
    /// [`BreakdownPolicy::ClampAndContinue`].
    pub rescued: Option<(BreakdownCause, usize)>,
}

/// Reusable integrator for one model on one grid.
#[derive(Debug, Clone)]
pub struct Stepper {
    spec: ModelSpec,
    grid: Grid1D,
    bc: BoundarySpec,
    config: SimConfig,
    velocity: Vec<f64>,
    rho_new: Vec<f64>,
    s_new: Vec<f64>,
    a_new: Vec<f64>,
    work: DiffusionWork,
}

impl Stepper {
    pub fn new(
        spec: &ModelSpec,
        grid: &Grid1D,
        bc: &BoundarySpec,
        config: &SimConfig,
    ) -> Result<Self, SolverError> {
        spec.validate()?;
        grid.validate()?;
        bc.validate(grid)?;
        config.validate()?;
        let n = grid.n_cells;
        Ok(Stepper {
            spec: *spec,
            grid: *grid,
            bc: *bc,
            config: *config,
            velocity: vec![0.0; n + 1],
            rho_new: vec![0.0; n],
            s_new: vec![0.0; n],
            a_new: vec![0.0; n],
            work: DiffusionWork::default(),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    /// Fills face velocities; faces 0 and n are boundaries and carry none.
    fn face_velocities(&mut self, state: &FieldState) -> Result<(), SolverError> {
        let dx = self.grid.dx();
        let n = self.grid.n_cells;
        self.velocity[0] = 0.0;
        self.velocity[n] = 0.0;
        for j in 1..n {
            let mut face = FaceSample::signal(state.s[j - 1], state.s[j], dx);
            if let Some(a) = &state.a {
                face = face.with_attractant(a[j - 1], a[j]);
            }
            self.velocity[j] = match advection_velocity(&self.spec, &face) {
                Ok(v) => v,
                Err(ModelError::NonPositiveSignal { side, .. }) => {
                    let cell = match side {
                        crate::model::FaceSide::Left => j - 1,
                        crate::model::FaceSide::Right => j,
                    };
                    return Err(SolverError::Breakdown {
                        t: state.t,
                        cause: BreakdownCause::NonpositiveSignal,
                        location: cell,
                    });
                }
                Err(e) => return Err(e.into()),
            };
        }
        Ok(())
    }

    /// Stable step for the current velocities and state.
    fn stable_dt(&self, state: &FieldState) -> f64 {
        let dx = self.grid.dx();
        let cfl = self.config.cfl;
        let mut dt = self.config.dt_max;
        let mut outflow = 0.0f64;
        for i in 0..self.grid.n_cells {
            let o = self.velocity[i + 1].max(0.0) + (-self.velocity[i]).max(0.0);
            outflow = outflow.max(o);
        }
        if outflow > 0.0 {
            dt = dt.min(cfl * dx / outflow);
        }
        dt = dt.min(cfl * dx * dx / (2.0 * self.spec.d));
        if self.spec.consumption.preserves_positivity() {
            let rho_max = state.rho.iter().cloned().fold(0.0, f64::max);
            let k = self.spec.consumption.k();
            if rho_max > 0.0 {
                dt = dt.min(0.9 / (k * rho_max));
            }
        }
        let r = self.spec.growth.rate();
        if r > 0.0 {
            dt = dt.min(0.9 / r);
        }
        if let Some(att) = &self.spec.attractant {
            dt = dt.min(0.9 / att.alpha);
        }
        dt
    }

    /// Advances `state` by one step no longer than `dt_cap`.
    pub fn step(&mut self, state: &mut FieldState, dt_cap: f64) -> Result<StepInfo, SolverError> {
        let n = self.grid.n_cells;
        let dx = self.grid.dx();
        self.face_velocities(state)?;
        let dt = self.stable_dt(state).min(dt_cap);
        if !(dt > 0.0) {
            return Err(SolverError::Config(format!("time step collapsed to {dt}")));
        }
        let lambda = dt / dx;

        // density: upwind advection, implicit diffusion, growth
        let upwind = |v: &[f64], rho: &[f64], j: usize| -> f64 {
            if j == 0 || j == n {
                0.0
            } else {
                v[j].max(0.0) * rho[j - 1] + v[j].min(0.0) * rho[j]
            }
        };
        for i in 0..n {
            let div =
                upwind(&self.velocity, &state.rho, i + 1) - upwind(&self.velocity, &state.rho, i);
            self.rho_new[i] = state.rho[i] - lambda * div;
        }
        let mu_rho = self.spec.d * dt / (dx * dx);
        implicit_diffusion(&mut self.rho_new, mu_rho, None, None, &mut self.work);
        if self.spec.growth.rate() > 0.0 {
            for i in 0..n {
                self.rho_new[i] += dt * reaction_rate(&self.spec, state.s[i]) * state.rho[i];
            }
        }

        // signal: uptake, then implicit diffusion
        for i in 0..n {
            let (s, rho) = (state.s[i], state.rho[i]);
            self.s_new[i] = match self.spec.consumption {
                ConsumptionKind::Constant { k } => s - dt * k * rho,
                ConsumptionKind::Linear { k } => s * (1.0 - dt * k * rho),
                ConsumptionKind::Power { k, m } => {
                    if m == 1.0 {
                        s * (1.0 - dt * k * rho)
                    } else {
                        // exact local decay of S' = −kρS^m, which stops at 0
                        let base = s.max(0.0).powf(1.0 - m) - (1.0 - m) * k * rho * dt;
                        base.max(0.0).powf(1.0 / (1.0 - m))
                    }
                }
            };
        }
        let mut rescued = None;
        if self.config.clamp_epsilon.is_none() {
            if let Some((loc, _)) = argmin(&self.s_new).filter(|&(_, v)| v <= 0.0) {
                match self.config.breakdown_policy {
                    BreakdownPolicy::Halt => {
                        return Err(SolverError::Breakdown {
                            t: state.t + dt,
                            cause: BreakdownCause::NonpositiveSignal,
                            location: loc,
                        })
                    }
                    BreakdownPolicy::ClampAndContinue => {
                        rescued = Some((BreakdownCause::NonpositiveSignal, loc));
                        for v in self.s_new.iter_mut() {
                            *v = v.max(DEFAULT_RESCUE_EPSILON);
                        }
                    }
                }
            }
        }
        let mu_s = self.spec.signal_diffusivity * dt / (dx * dx);
        implicit_diffusion(
            &mut self.s_new,
            mu_s,
            self.bc.s_left.value(),
            self.bc.s_right.value(),
            &mut self.work,
        );
        if let Some(eps) = self.config.clamp_epsilon {
            for v in self.s_new.iter_mut() {
                *v = v.max(eps);
            }
        }

        // attractant: secretion and decay, then implicit diffusion
        if let (Some(a), Some(att)) = (&state.a, &self.spec.attractant) {
            for ((out, &ai), &ri) in self.a_new.iter_mut().zip(a).zip(&state.rho) {
                *out = ai + dt * (att.beta * ri - att.alpha * ai);
            }
            let mu_a = att.diffusivity * dt / (dx * dx);
            implicit_diffusion(&mut self.a_new, mu_a, None, None, &mut self.work);
        }

        let nonfinite = first_nonfinite(&self.rho_new)
            .or_else(|| first_nonfinite(&self.s_new))
            .or_else(|| state.a.as_ref().and_then(|_| first_nonfinite(&self.a_new)));
        if let Some(loc) = nonfinite {
            match self.config.breakdown_policy {
                BreakdownPolicy::Halt | BreakdownPolicy::ClampAndContinue => {
                    return Err(SolverError::Breakdown {
                        t: state.t + dt,
                        cause: BreakdownCause::NonfiniteValue,
                        location: loc,
                    })
                }
            }
        }

        std::mem::swap(&mut state.rho, &mut self.rho_new);
        std::mem::swap(&mut state.s, &mut self.s_new);
        if let Some(a) = state.a.as_mut() {
            std::mem::swap(a, &mut self.a_new);
        }
        state.t += dt;
        Ok(StepInfo { dt, rescued })
    }
}

fn argmin(v: &[f64]) -> Option<(usize, f64)> {
    v.iter()
        .cloned()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

fn first_nonfinite(v: &[f64]) -> Option<usize> {
    v.iter().position(|x| !x.is_finite())
}

/// One step of at most `config.dt_max`.
pub fn step(
    state: &FieldState,
    spec: &ModelSpec,
    grid: &Grid1D,
    bc: &BoundarySpec,
    config: &SimConfig,
) -> Result<(FieldState, StepInfo), SolverError> {
    state.check(grid, spec)?;
    let mut stepper = Stepper::new(spec, grid, bc, config)?;
    let mut next = state.clone();
    let info = stepper.step(&mut next, config.dt_max)?;
    Ok((next, info))
}

/// Integrates to `config.t_end` or to a halting breakdown, handing a copy
/// of the state to `observer` at every output time.
///
/// A halting breakdown is not an error: it ends the run and is recorded in
/// the report, and the returned state is the last one before it.
pub fn run(
    init: &FieldState,
    spec: &ModelSpec,
    grid: &Grid1D,
    bc: &BoundarySpec,
    config: &SimConfig,
    mut observer: impl FnMut(&FieldState),
) -> Result<(FieldState, RunReport), SolverError> {
    init.check(grid, spec)?;
    let mut stepper = Stepper::new(spec, grid, bc, config)?;
    let mut recorder = RunRecorder::new(spec, grid, config);
    let mut state = init.clone();
    let t0 = state.t;
    let t_end = config.t_end;
    let mut next_output = 1usize;
    let output_time = |k: usize| (t0 + k as f64 * config.output_every).min(t_end);

    recorder.observe(&state);
    observer(&state);
    let mut breakdown = BreakdownRecord::none();
    while state.t < t_end {
        let target = output_time(next_output);
        let dt_cap = target - state.t;
        match stepper.step(&mut state, dt_cap) {
            Ok(info) => {
                recorder.count_step(info.dt);
                if let Some((cause, loc)) = info.rescued {
                    if !breakdown.occurred {
                        breakdown = BreakdownRecord::at(state.t, cause, loc);
                    }
                }
            }
            Err(SolverError::Breakdown { t, cause, location }) => {
                breakdown = BreakdownRecord::at(t, cause, location);
                break;
            }
            Err(e) => return Err(e),
        }
        // land exactly on the output grid despite rounding
        if target - state.t <= 1e-12 * target.abs().max(1.0) {
            state.t = target;
            recorder.observe(&state);
            observer(&state);
            next_output += 1;
        }
    }
    if breakdown.occurred && config.breakdown_policy == BreakdownPolicy::Halt {
        // the last snapshot may predate the failing step; record where we stopped
        recorder.observe_final(&state);
    }
    let report = recorder.finish(breakdown, &state);
    Ok((state, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ConsumptionKind, GrowthKind, SensitivityKind};
    use proptest::prelude::*;

    fn ks_spec(consumption: ConsumptionKind) -> ModelSpec {
        ModelSpec {
            sensitivity: SensitivityKind::LogGradient { chi: 2.0 },
            consumption,
            growth: GrowthKind::None,
            d: 1.0,
            signal_diffusivity: 0.0,
            attractant: None,
        }
    }

    fn grid() -> Grid1D {
        Grid1D::new(0.0, 20.0, 100, DomainKind::TruncatedLine).unwrap()
    }

    #[test]
    fn grid_requirements() {
        assert!(Grid1D::new(0.0, 1.0, 15, DomainKind::TruncatedLine).is_err());
        assert!(Grid1D::new(1.0, 0.0, 20, DomainKind::TruncatedLine).is_err());
        assert!(Grid1D::new(1.0, 2.0, 20, DomainKind::HalfLine).is_err());
        let g = Grid1D::with_spacing(0.0, 200.0, 0.1, DomainKind::TruncatedLine).unwrap();
        assert_eq!(g.n_cells, 2000);
        assert!((g.center(0) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn half_line_needs_dirichlet() {
        let g = Grid1D::new(0.0, 10.0, 20, DomainKind::HalfLine).unwrap();
        assert!(BoundarySpec::default().validate(&g).is_err());
        let bc = BoundarySpec {
            s_left: SignalBoundary::Dirichlet(1.0),
            ..BoundarySpec::default()
        };
        assert!(bc.validate(&g).is_ok());
        let bad = BoundarySpec {
            s_left: SignalBoundary::Dirichlet(0.0),
            ..BoundarySpec::default()
        };
        assert!(bad.validate(&g).is_err());
    }

    #[test]
    fn uniform_state_only_consumes() {
        let g = grid();
        let spec = ks_spec(ConsumptionKind::Linear { k: 1.0 });
        let state = FieldState {
            t: 0.0,
            rho: vec![0.5; g.n_cells],
            s: vec![2.0; g.n_cells],
            a: None,
        };
        let config = SimConfig {
            dt_max: 0.01,
            ..SimConfig::default()
        };
        let (next, info) = step(&state, &spec, &g, &BoundarySpec::default(), &config).unwrap();
        assert_eq!(info.dt, 0.01);
        for i in 0..g.n_cells {
            assert!((next.rho[i] - 0.5).abs() < 1e-15);
            assert!((next.s[i] - 2.0 * (1.0 - 0.01 * 0.5)).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_uptake_breaks_down_without_clamp() {
        let g = grid();
        let spec = ks_spec(ConsumptionKind::Constant { k: 1.0 });
        let state = FieldState {
            t: 0.0,
            rho: vec![1.0; g.n_cells],
            s: vec![0.05; g.n_cells],
            a: None,
        };
        let config = SimConfig {
            t_end: 1.0,
            ..SimConfig::default()
        };
        let (end, report) =
            run(&state, &spec, &g, &BoundarySpec::default(), &config, |_| {}).unwrap();
        let b = report.breakdown;
        assert!(b.occurred);
        assert_eq!(b.cause, Some(BreakdownCause::NonpositiveSignal));
        assert!((b.t_break.unwrap() - 0.05).abs() < 0.011);
        assert!(end.s.iter().all(|&s| s > 0.0));

        let clamped = SimConfig {
            clamp_epsilon: Some(1e-12),
            ..config
        };
        let (end, report) = run(
            &state,
            &spec,
            &g,
            &BoundarySpec::default(),
            &clamped,
            |_| {},
        )
        .unwrap();
        assert!(!report.breakdown.occurred);
        assert_eq!(end.t, 1.0);
        assert!(end.s.iter().all(|&s| s == 1e-12));

        let rescue = SimConfig {
            breakdown_policy: BreakdownPolicy::ClampAndContinue,
            ..config
        };
        let (end, report) =
            run(&state, &spec, &g, &BoundarySpec::default(), &rescue, |_| {}).unwrap();
        assert!(report.breakdown.occurred);
        assert_eq!(end.t, 1.0);
    }

    #[test]
    fn outputs_land_on_schedule() {
        let g = grid();
        let spec = ks_spec(ConsumptionKind::Linear { k: 1.0 });
        let state = initial_condition(
            &InitKind::Gaussian {
                center: 10.0,
                width: 1.0,
                mass: 1.0,
            },
            &g,
            1.0,
            &spec,
        )
        .unwrap();
        let config = SimConfig {
            t_end: 1.0,
            output_every: 0.1,
            ..SimConfig::default()
        };
        let mut times = Vec::new();
        run(&state, &spec, &g, &BoundarySpec::default(), &config, |s| {
            times.push(s.t)
        })
        .unwrap();
        assert_eq!(times.len(), 11);
        for (k, t) in times.iter().enumerate() {
            assert!((t - (k as f64 * 0.1).min(1.0)).abs() < 1e-12, "{t}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn step_preserves_mass_and_positivity(
            rho in prop::collection::vec(0.0f64..3.0, 32),
            s in prop::collection::vec(0.1f64..5.0, 32),
            kind in 0usize..4,
        ) {
            let g = Grid1D::new(0.0, 8.0, 32, DomainKind::TruncatedLine).unwrap();
            let sensitivity = match kind {
                0 => SensitivityKind::LogGradient { chi: 2.0 },
                1 => SensitivityKind::Tanh { chi: 1.5, f_scale: 3.0 },
                2 => SensitivityKind::ThresholdedSign { chi: 2.0, s0: 2.0 },
                _ => SensitivityKind::ThresholdedLogGradient { chi: 2.0, s0: 2.0 },
            };
            let spec = ModelSpec {
                sensitivity,
                signal_diffusivity: 0.5,
                ..ks_spec(ConsumptionKind::Linear { k: 1.0 })
            };
            let state = FieldState { t: 0.0, rho, s, a: None };
            let mass = state.mass(g.dx());
            let s_max = state.s.iter().cloned().fold(0.0, f64::max);
            let (next, _) = step(&state, &spec, &g, &BoundarySpec::default(), &SimConfig::default()).unwrap();
            prop_assert!((next.mass(g.dx()) - mass).abs() <= 1e-13 * mass.max(1.0));
            prop_assert!(next.rho.iter().all(|&r| r >= 0.0));
            prop_assert!(next.s.iter().all(|&v| v > 0.0 && v <= s_max + 1e-12));
        }
    }
}
