use super::{FieldState, Grid1D, SolverError};
use crate::analytic::{half_line_spike, WaveProfile};
use crate::model::ModelSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(clippy::large_enum_variant)]
pub enum InitKind {
    Gaussian {
        center: f64,
        width: f64,
        mass: f64,
    },
    /// Right half of a Gaussian centred at `center`, zero to its left.
    HalfGaussian {
        center: f64,
        width: f64,
        mass: f64,
    },
    /// `ρ = height` on `x < edge`.
    Plateau {
        edge: f64,
        height: f64,
    },
    /// Sampled wave placed with its `z = 0` at `x = shift`.
    FromProfile {
        profile: WaveProfile,
        shift: f64,
    },
    /// Stationary half-line spike of the given mass with the density
    /// stretched by `stretch` along `x` and renormalised.
    Spike {
        mass: f64,
        s_boundary: f64,
        stretch: f64,
    },
    Custom {
        rho: Vec<f64>,
        s: Vec<f64>,
        a: Option<Vec<f64>>,
    },
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), SolverError> {
    if cond {
        Ok(())
    } else {
        Err(SolverError::Config(msg.into()))
    }
}

fn normalise(rho: &mut [f64], mass: f64, dx: f64) -> Result<(), SolverError> {
    let sum = rho.iter().sum::<f64>() * dx;
    require(sum > 0.0, "initial density has no support on the grid")?;
    for r in rho.iter_mut() {
        *r *= mass / sum;
    }
    Ok(())
}

/// Linear interpolation on increasing `z`, constant beyond the ends.
fn interpolate(z: &[f64], f: &[f64], x: f64) -> f64 {
    let n = z.len();
    if x <= z[0] {
        return f[0];
    }
    if x >= z[n - 1] {
        return f[n - 1];
    }
    let j = z.partition_point(|&v| v <= x);
    let (z0, z1) = (z[j - 1], z[j]);
    let w = (x - z0) / (z1 - z0);
    f[j - 1] * (1.0 - w) + f[j] * w
}

/// Builds the state at `t = 0`. Unless the kind carries its own signal,
/// `S` starts uniform at `s_init`; `A` starts at zero when the model has one.
pub fn initial_condition(
    kind: &InitKind,
    grid: &Grid1D,
    s_init: f64,
    spec: &ModelSpec,
) -> Result<FieldState, SolverError> {
    grid.validate()?;
    let n = grid.n_cells;
    let dx = grid.dx();
    let x = grid.centers();
    require(
        s_init > 0.0 && s_init.is_finite(),
        format!("S_init must be > 0, got {s_init}"),
    )?;
    let mut s = vec![s_init; n];
    let mut a = spec.attractant.map(|_| vec![0.0; n]);

    let rho = match kind {
        InitKind::Gaussian {
            center,
            width,
            mass,
        }
        | InitKind::HalfGaussian {
            center,
            width,
            mass,
        } => {
            require(*mass > 0.0, format!("mass must be > 0, got {mass}"))?;
            require(*width > 0.0, format!("width must be > 0, got {width}"))?;
            let half = matches!(kind, InitKind::HalfGaussian { .. });
            let mut rho: Vec<f64> = x
                .iter()
                .map(|&xi| {
                    if half && xi < *center {
                        0.0
                    } else {
                        (-0.5 * ((xi - center) / width).powi(2)).exp()
                    }
                })
                .collect();
            normalise(&mut rho, *mass, dx)?;
            rho
        }
        InitKind::Plateau { edge, height } => {
            require(
                *height > 0.0,
                format!("plateau height must be > 0, got {height}"),
            )?;
            (0..n)
                .map(|i| {
                    let lo = grid.x_min + i as f64 * dx;
                    let covered = ((edge - lo) / dx).clamp(0.0, 1.0);
                    height * covered
                })
                .collect()
        }
        InitKind::FromProfile { profile, shift } => {
            require(profile.len() >= 2, "profile needs at least two samples")?;
            let z: Vec<f64> = x.iter().map(|xi| xi - shift).collect();
            s = z
                .iter()
                .map(|&zi| interpolate(&profile.z, &profile.s, zi))
                .collect();
            if let (Some(a), Some(pa)) = (a.as_mut(), profile.a.as_ref()) {
                for (ai, &zi) in a.iter_mut().zip(&z) {
                    *ai = interpolate(&profile.z, pa, zi);
                }
            }
            z.iter()
                .map(|&zi| interpolate(&profile.z, &profile.rho, zi).max(0.0))
                .collect()
        }
        InitKind::Spike {
            mass,
            s_boundary,
            stretch,
        } => {
            require(
                *stretch > 0.0,
                format!("stretch must be > 0, got {stretch}"),
            )?;
            let chi = spec.sensitivity.chi();
            let spike = half_line_spike(
                spec.d,
                chi,
                spec.signal_diffusivity,
                spec.consumption.k(),
                *mass,
                *s_boundary,
                &x,
            )
            .map_err(|e| SolverError::Config(e.to_string()))?;
            let xs: Vec<f64> = x.iter().map(|xi| xi / stretch).collect();
            let mut rho: Vec<f64> = xs
                .iter()
                .map(|&xi| interpolate(&spike.x, &spike.rho, xi))
                .collect();
            normalise(&mut rho, *mass, dx)?;
            s = spike.s;
            rho
        }
        InitKind::Custom {
            rho,
            s: s_custom,
            a: a_custom,
        } => {
            require(
                rho.len() == n && s_custom.len() == n,
                format!("custom samples must have {n} entries"),
            )?;
            s = s_custom.clone();
            if let Some(ac) = a_custom {
                require(
                    ac.len() == n,
                    format!("custom attractant must have {n} entries"),
                )?;
                if a.is_some() {
                    a = Some(ac.clone());
                }
            }
            rho.clone()
        }
    };
    require(
        rho.iter().all(|r| *r >= 0.0 && r.is_finite()),
        "initial density must be finite and non-negative",
    )?;
    Ok(FieldState { t: 0.0, rho, s, a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{ks_profile, uniform_grid};
    use crate::model::{ConsumptionKind, GrowthKind, SensitivityKind};
    use crate::solver::DomainKind;

    fn spec() -> ModelSpec {
        ModelSpec {
            sensitivity: SensitivityKind::LogGradient { chi: 2.0 },
            consumption: ConsumptionKind::Constant { k: 1.0 },
            growth: GrowthKind::None,
            d: 1.0,
            signal_diffusivity: 1.0,
            attractant: None,
        }
    }

    #[test]
    fn plateau_cells() {
        let g = Grid1D::new(0.0, 100.0, 1000, DomainKind::TruncatedLine).unwrap();
        let st = initial_condition(
            &InitKind::Plateau {
                edge: 10.0,
                height: 1.0,
            },
            &g,
            8.0,
            &spec(),
        )
        .unwrap();
        assert!(st.rho[..100].iter().all(|&r| (r - 1.0).abs() < 1e-12));
        assert!(st.rho[100..].iter().all(|&r| r.abs() < 1e-12));
        assert!(st.s.iter().all(|&s| s == 8.0));
    }

    #[test]
    fn gaussian_mass() {
        let g = Grid1D::new(0.0, 50.0, 500, DomainKind::TruncatedLine).unwrap();
        for kind in [
            InitKind::Gaussian {
                center: 20.0,
                width: 2.0,
                mass: 3.5,
            },
            InitKind::HalfGaussian {
                center: 0.0,
                width: 2.0,
                mass: 3.5,
            },
        ] {
            let st = initial_condition(&kind, &g, 1.0, &spec()).unwrap();
            assert!((st.mass(g.dx()) - 3.5).abs() < 1e-12);
        }
        let bad = InitKind::Gaussian {
            center: 20.0,
            width: 2.0,
            mass: 0.0,
        };
        assert!(initial_condition(&bad, &g, 1.0, &spec()).is_err());
    }

    #[test]
    fn from_profile_shifts() {
        let g = Grid1D::new(0.0, 60.0, 600, DomainKind::TruncatedLine).unwrap();
        let p = ks_profile(1.0, 2.0, 1.0, 1.0, 1.0, &uniform_grid(-30.0, 30.0, 0.01)).unwrap();
        let st = initial_condition(
            &InitKind::FromProfile {
                profile: p,
                shift: 30.0,
            },
            &g,
            1.0,
            &spec(),
        )
        .unwrap();
        // S(30) is half of S_init
        let s_mid = 0.5 * (st.s[299] + st.s[300]);
        assert!((s_mid - 0.5).abs() < 1e-3);
        assert!((st.mass(g.dx()) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn spike_has_requested_mass() {
        let g = Grid1D::new(0.0, 50.0, 500, DomainKind::HalfLine).unwrap();
        let st = initial_condition(
            &InitKind::Spike {
                mass: 1.0,
                s_boundary: 2.0,
                stretch: 1.1,
            },
            &g,
            2.0,
            &spec(),
        )
        .unwrap();
        assert!((st.mass(g.dx()) - 1.0).abs() < 1e-12);
        assert!(st.s[0] < 2.0 && st.s.windows(2).all(|w| w[1] < w[0]));
    }
}
