use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hj::saddle::{eval_saddle, saddle_jet, Sheet};
use crate::potential::BarrierParams;

/// Width a0 at which the two folds of x(v) at y = 0 coalesce, with the cusp (x0, v0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalWidth {
    pub a0: f64,
    pub x0: f64,
    pub v0: f64,
    /// max(|∂x/∂v|, |∂²x/∂v²|) at the returned point.
    pub residual: f64,
}

const A_LO: f64 = 0.1;
const A_HI: f64 = 20.0;
const A_GRID: usize = 80;
const V_GRID: usize = 400;

fn dx_dv(p: &BarrierParams, v: f64) -> Result<f64> {
    Ok(eval_saddle(p, Complex64::new(v, 0.0), Complex64::new(0.0, 0.0), Sheet::PRINCIPAL)?.dx_dv.re)
}

/// Grid minimum of ∂x/∂v over real v; negative exactly when a fold pair exists.
fn min_slope(p: &BarrierParams) -> Result<(f64, f64)> {
    let hi = super::v_scan_max(p);
    let mut best = (0.0, f64::INFINITY);
    for k in 1..=V_GRID {
        let v = hi * k as f64 / V_GRID as f64;
        let g = dx_dv(p, v)?;
        if g < best.1 {
            best = (v, g);
        }
    }
    Ok(best)
}

pub fn find_critical_width(p: &BarrierParams) -> Result<CriticalWidth> {
    let no_conv = |iterations: usize, residual: f64| Error::NoConvergence {
        iterations,
        last: Complex64::new(0.0, 0.0),
        residual,
    };
    if p.alpha0 == 0.0 {
        return Err(no_conv(0, f64::INFINITY));
    }
    let ratio = (A_HI / A_LO).powf(1.0 / (A_GRID - 1) as f64);
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    let mut last_g = f64::NAN;
    for k in 0..A_GRID {
        let a = A_LO * ratio.powi(k as i32);
        let (_, g) = min_slope(&p.with_a(a))?;
        last_g = g;
        if let Some((a_prev, g_prev)) = prev {
            if g_prev > 0.0 && g <= 0.0 {
                bracket = Some((a_prev, a));
                break;
            }
        }
        prev = Some((a, g));
    }
    let (mut lo, mut hi) = bracket.ok_or_else(|| no_conv(A_GRID, last_g.abs()))?;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if min_slope(&p.with_a(mid))?.1 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    let (v, _) = min_slope(&p.with_a(a))?;
    find_critical_width_from(p, a, v)
}

/// Joint Newton on ∂x/∂v = ∂²x/∂v² = 0 in (v, a) from an explicit seed.
pub fn find_critical_width_from(p: &BarrierParams, a_seed: f64, v_seed: f64) -> Result<CriticalWidth> {
    let (mut a, mut v) = (a_seed, v_seed);
    let mut residual = f64::INFINITY;
    for it in 0..60 {
        let j = saddle_jet(p, Complex64::new(v, 0.0), a, Complex64::new(0.0, 0.0));
        let f = Vector2::new(j.deriv(1, 0, 0).re, j.deriv(2, 0, 0).re);
        residual = f.amax();
        if residual < 1e-13 {
            let x0 = j.value().re;
            return Ok(CriticalWidth { a0: a, x0, v0: v, residual });
        }
        let jac = Matrix2::new(
            j.deriv(2, 0, 0).re,
            j.deriv(1, 1, 0).re,
            j.deriv(3, 0, 0).re,
            j.deriv(2, 1, 0).re,
        );
        let step = jac.lu().solve(&f).ok_or(Error::NoConvergence {
            iterations: it,
            last: Complex64::new(v, a),
            residual,
        })?;
        let scale = (step.amax() / 0.1).max(1.0);
        v -= step[0] / scale;
        a -= step[1] / scale;
        if a <= 0.0 || !v.is_finite() || !a.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence { iterations: 60, last: Complex64::new(v, a), residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::find_extrema;

    fn nominal() -> BarrierParams {
        BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, 2.0).unwrap()
    }

    #[test]
    fn cusp_at_nominal_parameters() {
        let c = find_critical_width(&nominal()).unwrap();
        assert!((c.a0 - 1.72).abs() < 0.02, "{c:?}");
        assert!((c.x0 - 1.07).abs() < 0.02, "{c:?}");
        assert!((c.v0 - 1.25).abs() < 0.02, "{c:?}");
        // frozen from an independent scipy solve of the same two equations
        assert!((c.a0 - 1.723_49).abs() < 1e-5);
        assert!((c.v0 - 1.249_87).abs() < 1e-5);
        assert!((c.x0 - 1.069_82).abs() < 1e-5);
    }

    #[test]
    fn extrema_bracket_the_cusp() {
        let c = find_critical_width(&nominal()).unwrap();
        let e = find_extrema(&nominal().with_a(c.a0)).unwrap();
        assert!(e.x_a < c.x0 && c.x0 < e.x_b);
        assert!(e.v_b - e.v_a > 0.5);
    }

    #[test]
    fn seed_path_independence() {
        let c = find_critical_width(&nominal()).unwrap();
        for (a, v) in [(1.6, 1.1), (1.9, 1.4), (1.75, 1.2)] {
            let d = find_critical_width_from(&nominal(), a, v).unwrap();
            assert!((d.a0 - c.a0).abs() < 1e-10);
            assert!((d.v0 - c.v0).abs() < 1e-10);
            assert!((d.x0 - c.x0).abs() < 1e-10);
        }
    }

    #[test]
    fn homogeneous_has_no_cusp() {
        let p = BarrierParams::new(30.0, 0.2, 0.0, 2.0).unwrap();
        assert!(matches!(find_critical_width(&p), Err(Error::NoConvergence { .. })));
    }
}
