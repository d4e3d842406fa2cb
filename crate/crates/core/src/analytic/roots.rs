//! Bracketed bisection for scalar equations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("f({lo}) = {f_lo} and f({hi}) = {f_hi} do not bracket a root")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("bisection stalled after {iterations} iterations with |f| = {residual:e}")]
    NotConverged { iterations: usize, residual: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Finds `x ∈ [lo, hi]` with `|f(x)| ≤ f_tol`, given a sign change on the
/// bracket. Stops early when the bracket collapses to adjacent floats.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, f_tol: f64) -> Result<Root, RootError>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(Root {
            x: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Root {
            x: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(RootError::NoBracket { lo, hi, f_lo, f_hi });
    }
    let mut best = if f_lo.abs() < f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    for it in 1..=200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid.abs() <= f_tol {
            return Ok(Root {
                x: mid,
                residual: f_mid.abs(),
                iterations: it,
            });
        }
        if mid <= lo || mid >= hi {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if best.1.abs() <= f_tol {
        Ok(Root {
            x: best.0,
            residual: best.1.abs(),
            iterations: 200,
        })
    } else {
        Err(RootError::NotConverged {
            iterations: 200,
            residual: best.1.abs(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_of_two() {
        let root = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((root.x - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn decreasing_function() {
        let root = bisect(|x| 1.0 - x, 0.0, 3.0, 1e-15).unwrap();
        assert!((root.x - 1.0).abs() < 1e-15);
    }

    #[test]
    fn no_bracket() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(RootError::NoBracket { .. })
        ));
    }

    #[test]
    fn endpoint_root() {
        let root = bisect(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(root.x, 0.0);
        assert_eq!(root.iterations, 0);
    }
}
