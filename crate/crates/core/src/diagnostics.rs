//! Front tracking, speed fits, phase portraits and run monitors.

use crate::io::fmt_f64;
use crate::model::ModelSpec;
use crate::solver::{BreakdownRecord, FieldState, Grid1D, SimConfig};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("level {level} is not crossed")]
    NoCrossing { level: f64 },
    #[error("need at least {needed} samples in the fit window, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FrontMode {
    /// `S = S_min + f (S_max − S_min)`; `S_max` stands in for `S_init`.
    SignalLevel(f64),
    /// `ρ = level`.
    DensityLevel(f64),
}

impl Default for FrontMode {
    fn default() -> Self {
        FrontMode::SignalLevel(0.5)
    }
}

/// Rightmost crossing of `level` by `f`, linearly interpolated.
pub fn rightmost_crossing(grid: &Grid1D, f: &[f64], level: f64) -> Option<f64> {
    for i in (0..f.len().saturating_sub(1)).rev() {
        let (a, b) = (f[i] - level, f[i + 1] - level);
        if a == 0.0 && b == 0.0 {
            continue;
        }
        if (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0) {
            let w = a / (a - b);
            return Some(grid.center(i) + w * grid.dx());
        }
    }
    None
}

pub fn front_position(
    state: &FieldState,
    grid: &Grid1D,
    mode: FrontMode,
) -> Result<f64, DiagnosticsError> {
    match mode {
        FrontMode::SignalLevel(frac) => {
            if !(frac > 0.0 && frac < 1.0) {
                return Err(DiagnosticsError::Invalid(format!(
                    "signal fraction must lie in (0, 1), got {frac}"
                )));
            }
            let lo = state.s.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = state.s.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let level = lo + frac * (hi - lo);
            if !(hi - lo > 1e-12 * hi.abs().max(1e-300)) {
                return Err(DiagnosticsError::NoCrossing { level });
            }
            rightmost_crossing(grid, &state.s, level).ok_or(DiagnosticsError::NoCrossing { level })
        }
        FrontMode::DensityLevel(level) => rightmost_crossing(grid, &state.rho, level)
            .ok_or(DiagnosticsError::NoCrossing { level }),
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FrontTrajectory {
    pub samples: Vec<(f64, f64)>,
    pub mode: FrontMode,
}

impl FrontTrajectory {
    pub fn new(mode: FrontMode) -> Self {
        FrontTrajectory {
            samples: Vec::new(),
            mode,
        }
    }

    /// Appends a sample; repeated or earlier times are ignored.
    pub fn push(&mut self, t: f64, x: f64) {
        if self.samples.last().is_none_or(|&(tl, _)| t > tl) {
            self.samples.push((t, x));
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x_front\n");
        for &(t, x) in &self.samples {
            let _ = writeln!(out, "{},{}", fmt_f64(t), fmt_f64(x));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedFit {
    pub c_fit: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

pub const MIN_FIT_SAMPLES: usize = 10;

/// Least-squares slope of the front over the last `window_fraction` of the
/// trajectory's time span.
pub fn fit_speed(
    traj: &FrontTrajectory,
    window_fraction: f64,
) -> Result<SpeedFit, DiagnosticsError> {
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(DiagnosticsError::Invalid(format!(
            "window fraction must lie in (0, 1], got {window_fraction}"
        )));
    }
    let s = &traj.samples;
    if s.len() < MIN_FIT_SAMPLES {
        return Err(DiagnosticsError::InsufficientData {
            needed: MIN_FIT_SAMPLES,
            got: s.len(),
        });
    }
    let (t_first, t_last) = (s[0].0, s[s.len() - 1].0);
    let t_lo = t_last - window_fraction * (t_last - t_first);
    let pts: Vec<(f64, f64)> = s.iter().cloned().filter(|&(t, _)| t >= t_lo).collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(DiagnosticsError::InsufficientData {
            needed: MIN_FIT_SAMPLES,
            got: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let xm = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut stt, mut stx, mut sxx) = (0.0, 0.0, 0.0);
    for &(t, x) in &pts {
        stt += (t - tm) * (t - tm);
        stx += (t - tm) * (x - xm);
        sxx += (x - xm) * (x - xm);
    }
    let slope = stx / stt;
    let ss_res: f64 = pts
        .iter()
        .map(|&(t, x)| {
            let e = x - xm - slope * (t - tm);
            e * e
        })
        .sum();
    let r_squared = if sxx > 0.0 {
        (1.0 - ss_res / sxx).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(SpeedFit {
        c_fit: slope,
        r_squared,
        window: (pts[0].0, t_last),
        samples: pts.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub rho: f64,
    pub drho: f64,
    pub near_interface: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePortrait {
    pub t: f64,
    pub c_used: f64,
    /// Rightmost crossing of the threshold, when one was requested.
    pub interface: Option<f64>,
    pub points: Vec<PhasePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitOptions {
    /// Signal threshold whose crossing marks the interface.
    pub threshold: Option<f64>,
    /// Cells flagged on each side of the interface cell.
    pub exclude_cells: usize,
    /// Keep only `x − interface ∈ [lo, hi]`.
    pub window: Option<(f64, f64)>,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        PortraitOptions {
            threshold: None,
            exclude_cells: 3,
            window: None,
        }
    }
}

/// Central-difference `(ρ, ρ')` pairs on interior cells, ordered by `x`.
pub fn phase_portrait(
    state: &FieldState,
    grid: &Grid1D,
    c_used: f64,
    opts: &PortraitOptions,
) -> PhasePortrait {
    let dx = grid.dx();
    let interface = opts
        .threshold
        .and_then(|s0| rightmost_crossing(grid, &state.s, s0));
    let n = state.rho.len();
    let mut points = Vec::with_capacity(n);
    for i in 1..n.saturating_sub(1) {
        let x = grid.center(i);
        let rho = state.rho[i];
        let drho = (state.rho[i + 1] - state.rho[i - 1]) / (2.0 * dx);
        if !(rho.is_finite() && drho.is_finite()) {
            continue;
        }
        let near_interface =
            interface.is_some_and(|xi| (x - xi).abs() <= (opts.exclude_cells as f64 + 0.5) * dx);
        if let (Some((lo, hi)), Some(xi)) = (opts.window, interface) {
            if x - xi < lo || x - xi > hi {
                continue;
            }
        }
        points.push(PhasePoint {
            x,
            rho,
            drho,
            near_interface,
        });
    }
    PhasePortrait {
        t: state.t,
        c_used,
        interface,
        points,
    }
}

impl PhasePortrait {
    /// Largest Euclidean distance from an unflagged point to the union of
    /// the curves `ρ' = f(ρ)`, each sampled on `ρ ∈ [0, rho_max]`.
    pub fn max_distance_to_curves(&self, curves: &[&dyn Fn(f64) -> f64], rho_max: f64) -> f64 {
        const SAMPLES: usize = 4000;
        let polylines: Vec<Vec<(f64, f64)>> = curves
            .iter()
            .map(|f| {
                (0..=SAMPLES)
                    .map(|j| {
                        let r = rho_max * j as f64 / SAMPLES as f64;
                        (r, f(r))
                    })
                    .collect()
            })
            .collect();
        let mut worst = 0.0f64;
        for p in self.points.iter().filter(|p| !p.near_interface) {
            let mut best = f64::INFINITY;
            for line in &polylines {
                for seg in line.windows(2) {
                    best = best.min(segment_distance(seg[0], seg[1], (p.rho, p.drho)));
                }
            }
            worst = worst.max(best);
        }
        worst
    }

    /// Vertex `−a₁/(2a₂)` of the least-squares quadratic `ρ' ≈ a₀ + a₁ρ + a₂ρ²`
    /// through the unflagged points behind the interface.
    pub fn back_vertex(&self) -> Option<f64> {
        let xi = self.interface?;
        let pts: Vec<(f64, f64)> = self
            .points
            .iter()
            .filter(|p| !p.near_interface && p.x < xi)
            .map(|p| (p.rho, p.drho))
            .collect();
        if pts.len() < 3 {
            return None;
        }
        let coef = quadratic_fit(&pts)?;
        if coef[2] == 0.0 {
            return None;
        }
        Some(-coef[1] / (2.0 * coef[2]))
    }

    /// CSV with columns `x,rho,drho_dz,near_interface` followed by one
    /// column per named curve evaluated at each `rho`.
    pub fn to_csv(&self, curves: &[(&str, &dyn Fn(f64) -> f64)]) -> String {
        let mut out = String::from("x,rho,drho_dz,near_interface");
        for (name, _) in curves {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for p in &self.points {
            let _ = write!(
                out,
                "{},{},{},{}",
                fmt_f64(p.x),
                fmt_f64(p.rho),
                fmt_f64(p.drho),
                u8::from(p.near_interface)
            );
            for (_, f) in curves {
                let _ = write!(out, ",{}", fmt_f64(f(p.rho)));
            }
            out.push('\n');
        }
        out
    }
}

fn segment_distance(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

/// Least-squares `[a₀, a₁, a₂]` via the normal equations, centred for
/// conditioning.
fn quadratic_fit(pts: &[(f64, f64)]) -> Option<[f64; 3]> {
    let n = pts.len() as f64;
    let xm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mut m = [[0.0f64; 4]; 3];
    for &(x, y) in pts {
        let u = x - xm;
        let basis = [1.0, u, u * u];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += basis[r] * basis[c];
            }
            m[r][3] += basis[r] * y;
        }
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let f = m[r][col] / m[col][col];
                let pivot = m[col];
                for (x, p) in m[r].iter_mut().zip(pivot).skip(col) {
                    *x -= f * p;
                }
            }
        }
    }
    let b = [m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]];
    // undo the centring u = x − xm
    Some([
        b[0] - b[1] * xm + b[2] * xm * xm,
        b[1] - 2.0 * b[2] * xm,
        b[2],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monitor {
    pub t: f64,
    pub mass: f64,
    pub min_s: f64,
    pub max_s: f64,
    pub min_rho: f64,
}

pub fn monitor(state: &FieldState, grid: &Grid1D) -> Monitor {
    Monitor {
        t: state.t,
        mass: state.mass(grid.dx()),
        min_s: state.s.iter().cloned().fold(f64::INFINITY, f64::min),
        max_s: state.s.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        min_rho: state.rho.iter().cloned().fold(f64::INFINITY, f64::min),
    }
}

pub fn monitors<'a>(
    states: impl IntoIterator<Item = &'a FieldState>,
    grid: &Grid1D,
) -> Vec<Monitor> {
    states.into_iter().map(|s| monitor(s, grid)).collect()
}

/// Scheme parameters needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeRecord {
    pub spec: ModelSpec,
    pub grid: Grid1D,
    pub dx: f64,
    pub config: SimConfig,
    pub steps: u64,
    pub dt_min: f64,
    pub dt_max_used: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scheme: SchemeRecord,
    pub t_final: f64,
    pub front: FrontTrajectory,
    pub speed_fit: Option<SpeedFit>,
    pub monitors: Vec<Monitor>,
    pub breakdown: BreakdownRecord,
    /// The front came within ten cells of the right boundary.
    pub invalid: bool,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Accumulates a [`RunReport`] while the solver advances.
#[derive(Debug, Clone)]
pub struct RunRecorder {
    grid: Grid1D,
    scheme: SchemeRecord,
    front: FrontTrajectory,
    monitors: Vec<Monitor>,
    invalid: bool,
}

impl RunRecorder {
    pub fn new(spec: &ModelSpec, grid: &Grid1D, config: &SimConfig) -> Self {
        RunRecorder {
            grid: *grid,
            scheme: SchemeRecord {
                spec: *spec,
                grid: *grid,
                dx: grid.dx(),
                config: *config,
                steps: 0,
                dt_min: f64::INFINITY,
                dt_max_used: 0.0,
            },
            front: FrontTrajectory::new(FrontMode::default()),
            monitors: Vec::new(),
            invalid: false,
        }
    }

    pub fn count_step(&mut self, dt: f64) {
        self.scheme.steps += 1;
        self.scheme.dt_min = self.scheme.dt_min.min(dt);
        self.scheme.dt_max_used = self.scheme.dt_max_used.max(dt);
    }

    pub fn observe(&mut self, state: &FieldState) {
        self.monitors.push(monitor(state, &self.grid));
        if let Ok(x) = front_position(state, &self.grid, self.front.mode) {
            self.front.push(state.t, x);
            if x >= self.grid.x_max - 10.0 * self.grid.dx() {
                self.invalid = true;
            }
        }
    }

    /// Records a final state that is off the output schedule.
    pub fn observe_final(&mut self, state: &FieldState) {
        if self.monitors.last().is_none_or(|m| m.t < state.t) {
            self.observe(state);
        }
    }

    pub fn finish(mut self, breakdown: BreakdownRecord, state: &FieldState) -> RunReport {
        if self.scheme.steps == 0 {
            self.scheme.dt_min = 0.0;
        }
        RunReport {
            speed_fit: fit_speed(&self.front, 0.5).ok(),
            scheme: self.scheme,
            t_final: state.t,
            front: self.front,
            monitors: self.monitors,
            breakdown,
            invalid: self.invalid,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::DomainKind;
    use proptest::prelude::*;

    fn grid(n: usize, len: f64) -> Grid1D {
        Grid1D::new(0.0, len, n, DomainKind::TruncatedLine).unwrap()
    }

    fn state(rho: Vec<f64>, s: Vec<f64>) -> FieldState {
        FieldState {
            t: 0.0,
            rho,
            s,
            a: None,
        }
    }

    #[test]
    fn ramp_midpoint() {
        let g = grid(100, 10.0);
        let s: Vec<f64> = g.centers().iter().map(|x| x / 10.0).collect();
        let st = state(vec![0.0; 100], s);
        let x = front_position(&st, &g, FrontMode::SignalLevel(0.5)).unwrap();
        assert!((x - 5.0).abs() <= g.dx());
    }

    #[test]
    fn uniform_signal_has_no_front() {
        let g = grid(20, 1.0);
        let st = state(vec![0.0; 20], vec![3.0; 20]);
        assert!(matches!(
            front_position(&st, &g, FrontMode::SignalLevel(0.5)),
            Err(DiagnosticsError::NoCrossing { .. })
        ));
    }

    #[test]
    fn exact_line_fit() {
        let mut traj = FrontTrajectory::new(FrontMode::default());
        for i in 0..40 {
            let t = i as f64 * 0.5;
            traj.push(t, 3.0 + 2.5 * t);
        }
        let fit = fit_speed(&traj, 0.5).unwrap();
        assert!((fit.c_fit - 2.5).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.samples >= MIN_FIT_SAMPLES);
    }

    #[test]
    fn too_few_samples() {
        let mut traj = FrontTrajectory::new(FrontMode::default());
        for i in 0..12 {
            traj.push(i as f64, i as f64);
        }
        assert!(matches!(
            fit_speed(&traj, 0.5),
            Err(DiagnosticsError::InsufficientData { .. })
        ));
    }

    #[test]
    fn exponential_portrait_on_line() {
        let g = grid(400, 4.0);
        let rho: Vec<f64> = g.centers().iter().map(|x| (-2.0 * x).exp()).collect();
        let st = state(rho, vec![1.0; 400]);
        let p = phase_portrait(&st, &g, 0.0, &PortraitOptions::default());
        for pt in &p.points {
            assert!((pt.drho + 2.0 * pt.rho).abs() < 2.0 * g.dx().powi(2) * 4.0 * pt.rho);
        }
        let line = |r: f64| -2.0 * r;
        assert!(p.max_distance_to_curves(&[&line], 1.0) < 1e-3);
    }

    #[test]
    fn plateau_portrait() {
        let g = grid(50, 5.0);
        let st = state(vec![1.7; 50], vec![1.0; 50]);
        let p = phase_portrait(&st, &g, 0.0, &PortraitOptions::default());
        assert!(p.points.iter().all(|q| q.rho == 1.7 && q.drho == 0.0));
    }

    #[test]
    fn quadratic_vertex_recovered() {
        // points on ρ' = 0.3(ρ − 2.5)² for ρ ∈ [2.6, 4]
        let pts: Vec<PhasePoint> = (0..50)
            .map(|i| {
                let rho = 2.6 + 1.4 * i as f64 / 49.0;
                PhasePoint {
                    x: i as f64,
                    rho,
                    drho: 0.3 * (rho - 2.5).powi(2),
                    near_interface: false,
                }
            })
            .collect();
        let p = PhasePortrait {
            t: 0.0,
            c_used: 1.0,
            interface: Some(100.0),
            points: pts,
        };
        assert!((p.back_vertex().unwrap() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn interface_cells_flagged() {
        let g = grid(100, 10.0);
        let s: Vec<f64> = g.centers().iter().map(|x| x / 10.0).collect();
        let st = state(vec![1.0; 100], s);
        let p = phase_portrait(
            &st,
            &g,
            1.0,
            &PortraitOptions {
                threshold: Some(0.5),
                ..PortraitOptions::default()
            },
        );
        let flagged = p.points.iter().filter(|q| q.near_interface).count();
        assert!((6..=8).contains(&flagged), "{flagged}");
    }

    proptest! {
        #[test]
        fn fit_is_shift_invariant(
            c in -5.0f64..5.0, x0 in -100.0f64..100.0, t0 in 0.0f64..50.0,
            noise in prop::collection::vec(-0.1f64..0.1, 30),
        ) {
            let mut a = FrontTrajectory::new(FrontMode::default());
            let mut b = FrontTrajectory::new(FrontMode::default());
            for (i, e) in noise.iter().enumerate() {
                let t = i as f64 * 0.3;
                a.push(t, c * t + e);
                b.push(t + t0, c * t + e + x0);
            }
            let fa = fit_speed(&a, 0.5).unwrap();
            let fb = fit_speed(&b, 0.5).unwrap();
            prop_assert!((fa.c_fit - fb.c_fit).abs() < 1e-8);
            prop_assert!((fa.r_squared - fb.r_squared).abs() < 1e-8);
        }

        #[test]
        fn front_translates_with_grid(shift in 0usize..40) {
            let g = grid(200, 20.0);
            let dx = g.dx();
            let profile = |x: f64| 1.0 / (1.0 + (-3.0 * (x - 8.0)).exp());
            let s1: Vec<f64> = g.centers().iter().map(|&x| profile(x)).collect();
            let s2: Vec<f64> = g.centers().iter().map(|&x| profile(x - shift as f64 * dx)).collect();
            let x1 = front_position(&state(vec![0.0; 200], s1), &g, FrontMode::SignalLevel(0.5)).unwrap();
            let x2 = front_position(&state(vec![0.0; 200], s2), &g, FrontMode::SignalLevel(0.5)).unwrap();
            prop_assert!((x2 - x1 - shift as f64 * dx).abs() < 1e-3);
        }
    }
}
