//! Keller–Segel wave: logarithmic sensitivity, uptake `kρ`, `D = 0`.

use super::{
    check_grid, require_positive, softplus, AnalyticError, Branch, Construction, ProfileMeta,
    SpeedResult, WaveProfile,
};

/// `c = kM / S_init`.
pub fn ks_speed(k: f64, mass: f64, s_init: f64) -> Result<SpeedResult, AnalyticError> {
    require_positive("k", k)?;
    require_positive("M", mass)?;
    require_positive("S_init", s_init)?;
    Ok(SpeedResult {
        c: k * mass / s_init,
        branch: Branch::Direct,
        residual: 0.0,
        constraints: Vec::new(),
    })
}

/// Samples the explicit wave
///
/// ```text
/// S(z) = S_init (1 + e^{−cz/d})^{d/(d−χ)}
/// ρ(z) = a' e^{−cz/d} (1 + e^{−cz/d})^{χ/(d−χ)}
/// ```
///
/// With `u = e^{−cz/d}` the mass integral is `(d/c)∫₀^∞ (1+u)^{χ/(d−χ)} du
/// = (χ − d)/c`, hence `a' = Mc/(χ − d)`.
pub fn ks_profile(
    d: f64,
    chi: f64,
    k: f64,
    mass: f64,
    s_init: f64,
    z_grid: &[f64],
) -> Result<WaveProfile, AnalyticError> {
    require_positive("d", d)?;
    if !(chi > d) {
        return Err(AnalyticError::NoAdmissibleWave(format!(
            "the Keller-Segel wave requires chi > d (chi = {chi}, d = {d})"
        )));
    }
    check_grid(z_grid)?;
    let c = ks_speed(k, mass, s_init)?.c;
    let a_prime = mass * c / (chi - d);
    let s_exp = d / (d - chi);
    let rho_exp = chi / (d - chi);

    let mut rho = Vec::with_capacity(z_grid.len());
    let mut s = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let x = -c * z / d;
        let log1pu = softplus(x);
        s.push(s_init * (s_exp * log1pu).exp());
        rho.push(a_prime * (x + rho_exp * log1pu).exp());
    }

    Ok(WaveProfile {
        z: z_grid.to_vec(),
        rho,
        s,
        a: None,
        speed: c,
        meta: ProfileMeta {
            construction: Some(Construction::KellerSegel),
            branch: Some(Branch::Direct),
            a_prime: Some(a_prime),
            s_minus: Some(0.0),
            s_init: Some(s_init),
            mass: Some(mass),
            ..ProfileMeta::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{residual_of_profile, uniform_grid};
    use crate::model::{ConsumptionKind, GrowthKind, ModelSpec, SensitivityKind};

    /// Composite Simpson rule, independent of the closed-form normalisation.
    fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let h = (hi - lo) / n as f64;
        let mut acc = f(lo) + f(hi);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(lo + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn speed_law() {
        assert_eq!(ks_speed(1.0, 2.0, 1.0).unwrap().c, 2.0);
        assert_eq!(ks_speed(1.0, 1.0, 1.0).unwrap().c, 1.0);
        assert_eq!(ks_speed(3.0, 2.0, 6.0).unwrap().c, 1.0);
        assert!(ks_speed(0.0, 1.0, 1.0).is_err());
        assert!(ks_speed(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn half_signal_at_origin() {
        let p = ks_profile(1.0, 2.0, 1.0, 1.0, 3.0, &[-1.0, 0.0, 1.0]).unwrap();
        assert!((p.s[1] / 3.0 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn limits() {
        let p = ks_profile(1.0, 2.0, 1.0, 1.0, 1.0, &[-60.0, 0.0, 60.0]).unwrap();
        assert!(p.s[0] < 1e-20);
        assert!((p.s[2] - 1.0).abs() < 1e-20);
        assert!(p.rho[0] < 1e-20 && p.rho[2] < 1e-20);
    }

    #[test]
    fn requires_chi_above_d() {
        let err = ks_profile(1.0, 1.0, 1.0, 1.0, 1.0, &[0.0, 1.0]).unwrap_err();
        assert!(matches!(err, AnalyticError::NoAdmissibleWave(_)));
    }

    #[test]
    fn mass_matches_quadrature_oracle() {
        for &(d, chi, k, m, s_init) in &[
            (1.0, 2.0, 1.0, 1.0, 1.0),
            (0.5, 3.0, 2.0, 0.7, 1.5),
            (1.0, 1.3, 1.0, 2.0, 4.0),
        ] {
            let c: f64 = k * m / s_init;
            // raw shape without normalisation; the tails decay like e^{-cz/d}
            // ahead and e^{cz/(chi-d)} behind
            let shape = |z: f64| {
                let u = (-c * z / d).exp();
                u * (1.0 + u).powf(chi / (d - chi))
            };
            let lo = -60.0 * (chi - d) / c;
            let hi = 60.0 * d / c;
            let integral = simpson(shape, lo, hi, 400_000);
            assert!(
                (integral - (chi - d) / c).abs() / integral < 1e-9,
                "closed form mismatch for {d} {chi}"
            );
            let grid = uniform_grid(lo, hi, (hi - lo) / 200_000.0);
            let p = ks_profile(d, chi, k, m, s_init, &grid).unwrap();
            assert!((p.sampled_mass() - m).abs() / m < 1e-6);
        }
    }

    #[test]
    fn shape_and_zero_flux() {
        let (d, chi, k, m, s_init) = (1.0, 2.0, 1.0, 1.0, 1.0);
        let grid = uniform_grid(-20.0, 20.0, 1e-3);
        let p = ks_profile(d, chi, k, m, s_init, &grid).unwrap();
        assert!(p.s.windows(2).all(|w| w[1] > w[0]));
        // unimodal density
        let peak = p
            .rho
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(p.rho[..=peak].windows(2).all(|w| w[1] >= w[0]));
        assert!(p.rho[peak..].windows(2).all(|w| w[1] <= w[0]));
        // -c rho - d rho' + chi rho (log S)' = 0
        let h = 1e-3;
        let scale = p.rho.iter().cloned().fold(0.0, f64::max) * p.speed;
        for i in 1..grid.len() - 1 {
            let drho = (p.rho[i + 1] - p.rho[i - 1]) / (2.0 * h);
            let dlogs = (p.s[i + 1].ln() - p.s[i - 1].ln()) / (2.0 * h);
            let flux = -p.speed * p.rho[i] - d * drho + chi * p.rho[i] * dlogs;
            assert!(flux.abs() < 1e-5 * scale);
        }
    }

    #[test]
    fn residual_small() {
        let p = ks_profile(1.0, 2.0, 1.0, 1.0, 1.0, &uniform_grid(-25.0, 25.0, 1e-3)).unwrap();
        let spec = ModelSpec {
            sensitivity: SensitivityKind::LogGradient { chi: 2.0 },
            consumption: ConsumptionKind::Constant { k: 1.0 },
            growth: GrowthKind::None,
            d: 1.0,
            signal_diffusivity: 0.0,
            attractant: None,
        };
        let res = residual_of_profile(&p, &spec).unwrap();
        assert!(res <= 1e-4, "residual {res}");
    }
}
