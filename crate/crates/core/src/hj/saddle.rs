//! x = (v + iy) √((1 + α²(iv)) / (γ + α²(iv))) − (v + iy)² / (4 (γ + α²(iv)))

use num_complex::Complex64;
use serde::Serialize;

use crate::cmath;
use crate::error::{Error, Result};
use crate::jet::{Axis, Jet};
use crate::potential::BarrierParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Signs applied to the principal square roots P = √(1 + α²) and S = √(γ + α²).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sheet {
    pub p: i8,
    pub s: i8,
}

impl Sheet {
    pub const PRINCIPAL: Sheet = Sheet { p: 1, s: 1 };

    /// Sheet whose roots at `v` lie closest to the roots of `prev`.
    pub fn follow(params: &BarrierParams, v: Complex64, prev: &SaddleEval) -> Result<Sheet> {
        let a2 = params.alpha_sq_iv(v)?;
        let p0 = cmath::sqrt(1.0 + a2);
        let s0 = cmath::sqrt(params.gamma + a2);
        let p = if (p0 - prev.root_p).norm() <= (-p0 - prev.root_p).norm() { 1 } else { -1 };
        let s = if (s0 - prev.root_s).norm() <= (-s0 - prev.root_s).norm() { 1 } else { -1 };
        Ok(Sheet { p, s })
    }

    pub fn tag(&self) -> &'static str {
        match (self.p, self.s) {
            (1, 1) => "++",
            (1, _) => "+-",
            (_, 1) => "-+",
            _ => "--",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SaddleEval {
    pub x: Complex64,
    pub dx_dv: Complex64,
    pub alpha_sq: Complex64,
    pub root_p: Complex64,
    pub root_s: Complex64,
    /// √(α² + 1 − x) on the branch continuous with P at x = 0.
    pub r: Complex64,
}

pub fn eval_saddle(params: &BarrierParams, v: Complex64, y: Complex64, sheet: Sheet) -> Result<SaddleEval> {
    let a2 = params.alpha_sq_iv(v)?;
    let da2 = 4.0 * v / (params.a * params.a) * a2;
    let p = cmath::sqrt(1.0 + a2) * f64::from(sheet.p);
    let s = cmath::sqrt(params.gamma + a2) * f64::from(sheet.s);
    let dp = da2 / (2.0 * p);
    let ds = da2 / (2.0 * s);
    let z = v + I * y;
    let x = z * p / s - z * z / (4.0 * s * s);
    let dx_dv = p / s + z * (dp * s - p * ds) / (s * s) - z / (2.0 * s * s) + z * z * ds / (2.0 * s * s * s);
    Ok(SaddleEval {
        x,
        dx_dv,
        alpha_sq: a2,
        root_p: p,
        root_s: s,
        r: p - z / (2.0 * s),
    })
}

/// The saddle equation as a jet in (v, a, y) around the given point, principal sheet.
pub fn saddle_jet(params: &BarrierParams, v: Complex64, a: f64, y: Complex64) -> Jet {
    let jv = Jet::var(v, Axis::V);
    let ja = Jet::var(Complex64::new(a, 0.0), Axis::A);
    let jy = Jet::var(y, Axis::Y);
    let a2 = (jv * jv * 2.0 / (ja * ja)).exp() * params.alpha0_sq();
    let p = (a2 + Complex64::new(1.0, 0.0)).sqrt();
    let s_sq = a2 + Complex64::new(params.gamma, 0.0);
    let s = s_sq.sqrt();
    let z = jv + jy * I;
    z * p / s - z * z / (s_sq * 4.0)
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub fold_threshold: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iter: 50,
            fold_threshold: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SaddlePoint {
    pub x: f64,
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub y: Complex64,
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub v: Complex64,
    pub sheet: Sheet,
    pub residual: f64,
}

/// Complex Newton on the saddle equation at fixed (x, y).
pub fn solve_saddle(
    x: f64,
    y: Complex64,
    params: &BarrierParams,
    v_guess: Complex64,
    sheet: Sheet,
    opts: &NewtonOptions,
) -> Result<SaddlePoint> {
    let mut v = v_guess;
    let mut residual = f64::INFINITY;
    for _ in 0..opts.max_iter {
        let e = eval_saddle(params, v, y, sheet)?;
        let f = e.x - x;
        residual = f.norm();
        if residual < opts.tol {
            return Ok(SaddlePoint { x, y, v, sheet, residual });
        }
        if e.dx_dv.norm() < opts.fold_threshold {
            return Err(Error::NearFold { v, jacobian: e.dx_dv.norm() });
        }
        let mut dv = f / e.dx_dv;
        if dv.norm() > 1.0 {
            dv /= dv.norm();
        }
        v -= dv;
        if !(v.re.is_finite() && v.im.is_finite()) {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        last: v,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nominal(a: f64) -> BarrierParams {
        BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, a).unwrap()
    }

    #[test]
    fn homogeneous_closed_form() {
        let p = BarrierParams::new(30.0, 0.2, 0.0, 2.0).unwrap();
        let g = 0.2_f64.sqrt();
        for v in [0.1, 0.5, 0.8] {
            let e = eval_saddle(&p, c(v, 0.0), c(0.0, 0.0), Sheet::PRINCIPAL).unwrap();
            assert_relative_eq!(e.x.re, v / g - v * v / 0.8, max_relative = 1e-15);
            assert_relative_eq!(e.dx_dv.re, 1.0 / g - v / 0.4, max_relative = 1e-14);
        }
    }

    #[test]
    fn homogeneous_turning_point() {
        let p = BarrierParams::new(30.0, 0.2, 0.0, 2.0).unwrap();
        let sp = solve_saddle(1.0, c(0.0, 0.0), &p, c(0.7, 0.0), Sheet::PRINCIPAL, &NewtonOptions::default()).unwrap();
        assert!((sp.v.re - 0.894_427_190_999_916).abs() < 1e-5);
    }

    #[test]
    fn derivative_matches_jet() {
        let p = nominal(2.0);
        for v in [c(0.3, 0.1), c(1.25, 0.0), c(2.0, -0.4)] {
            let y = c(0.7, 0.0);
            let e = eval_saddle(&p, v, y, Sheet::PRINCIPAL).unwrap();
            let j = saddle_jet(&p, v, p.a, y);
            assert!((j.value() - e.x).norm() < 1e-13 * e.x.norm().max(1.0));
            assert!((j.deriv(1, 0, 0) - e.dx_dv).norm() < 1e-12 * e.dx_dv.norm().max(1.0));
        }
    }

    #[test]
    fn near_fold_is_reported() {
        // c1 fold at a = 2 lies near v ≈ 1.1, x ≈ 1.051; locate it by bisection on x'.
        let p = nominal(2.0);
        let d = |v: f64| eval_saddle(&p, c(v, 0.0), c(0.0, 0.0), Sheet::PRINCIPAL).unwrap().dx_dv.re;
        let (mut lo, mut hi) = (0.9, 1.4);
        for _ in 0..80 {
            let m = 0.5 * (lo + hi);
            if d(m) > 0.0 { lo = m } else { hi = m }
        }
        let vc = 0.5 * (lo + hi);
        let xc = eval_saddle(&p, c(vc, 0.0), c(0.0, 0.0), Sheet::PRINCIPAL).unwrap().x.re;
        let r = solve_saddle(xc + 1e-3, c(0.0, 0.0), &p, c(vc, 0.0), Sheet::PRINCIPAL, &NewtonOptions::default());
        assert!(matches!(r, Err(Error::NearFold { .. })), "{r:?}");
    }

    #[test]
    fn sheet_follow_keeps_continuity() {
        let p = nominal(2.0);
        let prev = eval_saddle(&p, c(1.0, 0.0), c(0.0, 0.0), Sheet { p: -1, s: 1 }).unwrap();
        let sh = Sheet::follow(&p, c(1.01, 0.0), &prev).unwrap();
        assert_eq!(sh, Sheet { p: -1, s: 1 });
    }

    proptest! {
        #[test]
        fn x_zero_seed_law(y in -3.0..3.0f64) {
            let p = nominal(2.0);
            let guess = c(0.05, -y + 0.05);
            let sp = solve_saddle(0.0, c(y, 0.0), &p, guess, Sheet::PRINCIPAL, &NewtonOptions::default()).unwrap();
            prop_assert!((sp.v + c(0.0, y)).norm() < 1e-10);
        }
    }
}
