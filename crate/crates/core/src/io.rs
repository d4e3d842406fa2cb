//! CSV snapshot output.

use crate::solver::{FieldState, Grid1D};
use std::fmt::Write as _;

/// Scientific notation with 17 significant digits, enough to round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn snapshot_header(with_attractant: bool) -> &'static str {
    if with_attractant {
        "t,x,rho,S,A\n"
    } else {
        "t,x,rho,S\n"
    }
}

/// Appends one row per cell in long format.
pub fn write_snapshot_rows(out: &mut String, state: &FieldState, grid: &Grid1D) {
    let t = fmt_f64(state.t);
    for i in 0..state.rho.len() {
        let _ = write!(
            out,
            "{t},{},{},{}",
            fmt_f64(grid.center(i)),
            fmt_f64(state.rho[i]),
            fmt_f64(state.s[i])
        );
        if let Some(a) = &state.a {
            let _ = write!(out, ",{}", fmt_f64(a[i]));
        }
        out.push('\n');
    }
}

pub fn snapshot_csv(state: &FieldState, grid: &Grid1D) -> String {
    let mut out = String::from(snapshot_header(state.a.is_some()));
    write_snapshot_rows(&mut out, state, grid);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::DomainKind;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(2.0), "2.0000000000000000e0");
    }

    #[test]
    fn csv_layout() {
        let g = Grid1D::new(0.0, 16.0, 16, DomainKind::TruncatedLine).unwrap();
        let st = FieldState {
            t: 0.5,
            rho: vec![1.0; 16],
            s: vec![2.0; 16],
            a: Some(vec![0.0; 16]),
        };
        let csv = snapshot_csv(&st, &g);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,x,rho,S,A"));
        assert_eq!(csv.lines().count(), 17);
        assert_eq!(lines.next().unwrap().split(',').count(), 5);
    }
}
