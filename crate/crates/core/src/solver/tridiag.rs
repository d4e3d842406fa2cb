//! Thomas algorithm for tridiagonal systems.

/// Solves `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]` in
/// place; `rhs` holds the solution on return. `lower[0]` and
/// `upper[n-1]` are ignored. `scratch` must have the same length as `rhs`.
///
/// No pivoting: intended for diagonally dominant systems.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &mut [f64],
    scratch: &mut [f64],
) {
    let n = rhs.len();
    assert!(
        lower.len() == n && diag.len() == n && upper.len() == n && scratch.len() == n,
        "tridiagonal bands must match the right-hand side"
    );
    if n == 0 {
        return;
    }
    let mut beta = diag[0];
    rhs[0] /= beta;
    for i in 1..n {
        scratch[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * scratch[i];
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= scratch[i + 1] * rhs[i + 1];
    }
}

/// Backward-Euler step of `u_t = κ u_xx` on a cell-centred grid with
/// `mu = κ dt / dx²`. A `Some(g)` boundary is a Dirichlet value imposed at
/// the outer face; `None` is no-flux.
pub(crate) fn implicit_diffusion(
    u: &mut [f64],
    mu: f64,
    left: Option<f64>,
    right: Option<f64>,
    work: &mut DiffusionWork,
) {
    let n = u.len();
    if mu == 0.0 || n == 0 {
        return;
    }
    work.resize(n);
    for i in 0..n {
        work.lower[i] = -mu;
        work.upper[i] = -mu;
        work.diag[i] = 1.0 + 2.0 * mu;
    }
    match left {
        None => work.diag[0] = 1.0 + mu,
        Some(g) => {
            work.diag[0] = 1.0 + 3.0 * mu;
            u[0] += 2.0 * mu * g;
        }
    }
    match right {
        None => work.diag[n - 1] = 1.0 + mu,
        Some(g) => {
            work.diag[n - 1] = 1.0 + 3.0 * mu;
            u[n - 1] += 2.0 * mu * g;
        }
    }
    solve_tridiagonal(&work.lower, &work.diag, &work.upper, u, &mut work.scratch);
}

#[derive(Debug, Default, Clone)]
pub(crate) struct DiffusionWork {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    scratch: Vec<f64>,
}

impl DiffusionWork {
    fn resize(&mut self, n: usize) {
        self.lower.resize(n, 0.0);
        self.diag.resize(n, 0.0);
        self.upper.resize(n, 0.0);
        self.scratch.resize(n, 0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn multiply(lower: &[f64], diag: &[f64], upper: &[f64], x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = diag[i] * x[i];
                if i > 0 {
                    v += lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    #[test]
    fn small_system() {
        // [2 1 0; 1 2 1; 0 1 2] x = [4 8 8] → x = [1 2 3]
        let mut rhs = vec![4.0, 8.0, 8.0];
        let mut scratch = vec![0.0; 3];
        solve_tridiagonal(
            &[0.0, 1.0, 1.0],
            &[2.0, 2.0, 2.0],
            &[1.0, 1.0, 0.0],
            &mut rhs,
            &mut scratch,
        );
        for (x, e) in rhs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-14);
        }
    }

    #[test]
    fn no_flux_diffusion_conserves_sum() {
        let mut u: Vec<f64> = (0..50).map(|i| ((i as f64) * 0.3).sin() + 2.0).collect();
        let before: f64 = u.iter().sum();
        let mut work = DiffusionWork::default();
        implicit_diffusion(&mut u, 3.7, None, None, &mut work);
        let after: f64 = u.iter().sum();
        assert!((before - after).abs() < 1e-12 * before);
    }

    #[test]
    fn dirichlet_fixed_point() {
        let mut u = vec![1.5; 20];
        let mut work = DiffusionWork::default();
        implicit_diffusion(&mut u, 10.0, Some(1.5), None, &mut work);
        assert!(u.iter().all(|v| (v - 1.5).abs() < 1e-13));
    }

    proptest! {
        #[test]
        fn solves_dominant_systems(
            x in prop::collection::vec(-10.0f64..10.0, 1..60),
            off in prop::collection::vec(-1.0f64..1.0, 120),
        ) {
            let n = x.len();
            let lower: Vec<f64> = off[..n].to_vec();
            let upper: Vec<f64> = off[60..60 + n].to_vec();
            let diag: Vec<f64> = (0..n).map(|i| 2.5 + lower[i].abs() + upper[i].abs()).collect();
            let mut rhs = multiply(&lower, &diag, &upper, &x);
            let mut scratch = vec![0.0; n];
            solve_tridiagonal(&lower, &diag, &upper, &mut rhs, &mut scratch);
            for (a, b) in rhs.iter().zip(&x) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn diffusion_keeps_bounds(u0 in prop::collection::vec(0.0f64..5.0, 2..40), mu in 0.0f64..50.0) {
            let lo = u0.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = u0.iter().cloned().fold(0.0, f64::max);
            let mut u = u0.clone();
            let mut work = DiffusionWork::default();
            implicit_diffusion(&mut u, mu, None, None, &mut work);
            for v in &u {
                prop_assert!(*v >= lo - 1e-12 && *v <= hi + 1e-12);
            }
        }
    }
}
