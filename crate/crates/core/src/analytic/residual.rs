use super::{AnalyticError, WaveProfile};
use crate::model::{pointwise_velocity, reaction_rate, ModelSpec};

/// Largest normalised residual of the moving-frame equations
///
/// ```text
/// cρ' + dρ'' − (vρ)' + r(S)ρ = 0
/// cS' + D S''  − k(S, ρ)     = 0
/// cA' + D_A A'' + βρ − αA    = 0
/// ```
///
/// by central differences on a uniform grid. Each equation is scaled by the
/// largest magnitude any of its terms reaches on the grid. Stencils touching
/// `meta.interface` are skipped.
pub fn residual_of_profile(profile: &WaveProfile, spec: &ModelSpec) -> Result<f64, AnalyticError> {
    let z = &profile.z;
    let n = z.len();
    if n < 5 || profile.rho.len() != n || profile.s.len() != n {
        return Err(AnalyticError::BadGrid);
    }
    let h = (z[n - 1] - z[0]) / (n - 1) as f64;
    if !(h > 0.0) || z.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-6 * h) {
        return Err(AnalyticError::BadGrid);
    }
    let c = profile.speed;
    let rho = &profile.rho;
    let s = &profile.s;
    let a = profile.a.as_deref();
    let d1 = |f: &[f64], i: usize| (f[i + 1] - f[i - 1]) / (2.0 * h);
    let d2 = |f: &[f64], i: usize| (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);

    let mut flux = vec![0.0; n];
    for i in 1..n - 1 {
        let da = a.map(|a| d1(a, i));
        let v = pointwise_velocity(spec, s[i], d1(s, i), da)
            .map_err(|e| AnalyticError::Domain(e.to_string()))?;
        flux[i] = v * rho[i];
    }

    let skip = |i: usize| match profile.meta.interface {
        Some(z0) => (z[i] - z0).abs() < 2.5 * h,
        None => false,
    };

    let mut eqs: Vec<Vec<[f64; 4]>> = vec![Vec::new(), Vec::new(), Vec::new()];
    for i in 2..n - 2 {
        if skip(i) {
            continue;
        }
        eqs[0].push([
            c * d1(rho, i),
            spec.d * d2(rho, i),
            -d1(&flux, i),
            reaction_rate(spec, s[i]) * rho[i],
        ]);
        eqs[1].push([
            c * d1(s, i),
            spec.signal_diffusivity * d2(s, i),
            -crate::model::consumption_rate(spec, s[i], rho[i]),
            0.0,
        ]);
        if let (Some(a), Some(att)) = (a, spec.attractant.as_ref()) {
            eqs[2].push([
                c * d1(a, i),
                att.diffusivity * d2(a, i),
                att.beta * rho[i],
                -att.alpha * a[i],
            ]);
        }
    }

    let mut worst = 0.0f64;
    for terms in &eqs {
        let scale = terms
            .iter()
            .flat_map(|t| t.iter())
            .fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            continue;
        }
        for t in terms {
            let r = (t[0] + t[1] + t[2] + t[3]).abs() / scale;
            worst = worst.max(r);
        }
    }
    Ok(worst)
}
