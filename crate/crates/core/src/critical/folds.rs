use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use roots::{find_root_brent, SimpleConvergency};
use serde::Serialize;

use super::unfolding::expansion_at;
use super::v_scan_max;
use super::width::find_critical_width;
use crate::error::{Error, Result};
use crate::hj::saddle::{eval_saddle, saddle_jet, Sheet};
use crate::potential::BarrierParams;

/// Separation in v below which the fold pair is reported as merged.
pub const MERGE_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoldPoint {
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub v: Complex64,
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub x: Complex64,
    pub y: f64,
}


fn slope(p: &BarrierParams, v: f64, y: f64) -> f64 {
    eval_saddle(p, Complex64::new(v, 0.0), Complex64::new(y, 0.0), Sheet::PRINCIPAL)
        .map(|e| e.dx_dv.re)
        .unwrap_or(f64::NAN)
}

fn fold_at(p: &BarrierParams, v: Complex64, y: f64) -> Result<FoldPoint> {
    let x = eval_saddle(p, v, Complex64::new(y, 0.0), Sheet::PRINCIPAL)?.x;
    Ok(FoldPoint { v, x, y })
}

fn real_fold_roots(p: &BarrierParams) -> Result<Vec<f64>> {
    const N: usize = 4000;
    let hi = v_scan_max(p);
    let f = |v: f64| slope(p, v, 0.0);
    let mut out = Vec::new();
    let mut prev = (hi / N as f64, f(hi / N as f64));
    for k in 2..=N {
        let v = hi * k as f64 / N as f64;
        let g = f(v);
        if prev.1 * g <= 0.0 && prev.1 != 0.0 {
            let mut conv = SimpleConvergency { eps: 1e-15, max_iter: 200 };
            let r = find_root_brent(prev.0, v, &f, &mut conv)
                .map_err(|e| Error::SolverFailure(format!("fold polish: {e:?}")))?;
            out.push(r);
        }
        prev = (v, g);
    }
    Ok(out)
}

/// Newton on ∂x/∂v = 0 in complex v at fixed real y.
fn polish_fold(p: &BarrierParams, mut v: Complex64, y: f64) -> Result<Complex64> {
    let yc = Complex64::new(y, 0.0);
    let mut res = f64::INFINITY;
    for _ in 0..60 {
        let j = saddle_jet(p, v, p.a, yc);
        let g = j.deriv(1, 0, 0);
        res = g.norm();
        if res < 1e-13 {
            return Ok(v);
        }
        let h = j.deriv(2, 0, 0);
        if h.norm() < 1e-300 {
            break;
        }
        let mut dv = g / h;
        if dv.norm() > 0.1 {
            dv *= 0.1 / dv.norm();
        }
        v -= dv;
    }
    Err(Error::NoConvergence { iterations: 60, last: v, residual: res })
}

/// Fold pair at y = 0: real for a > a0, a complex-conjugate pair for a < a0.
fn folds_on_axis(p: &BarrierParams) -> Result<(Complex64, Complex64)> {
    let roots = real_fold_roots(p)?;
    if roots.len() >= 2 {
        if roots[1] - roots[0] < MERGE_TOLERANCE {
            return Err(Error::FoldsMerged { separation: roots[1] - roots[0] });
        }
        return Ok((Complex64::new(roots[0], 0.0), Complex64::new(roots[1], 0.0)));
    }
    if p.alpha0 == 0.0 || !roots.is_empty() {
        return Err(Error::NoRealRoot { lo: 0.0, hi: v_scan_max(p) });
    }
    let w = find_critical_width(p)?;
    let e = expansion_at(p, &w)?;
    let half = e.delta(p.a);
    if 2.0 * half < MERGE_TOLERANCE {
        return Err(Error::FoldsMerged { separation: 2.0 * half });
    }
    let (re, im) = if p.a > w.a0 { (half, 0.0) } else { (0.0, half) };
    let up = polish_fold(p, Complex64::new(w.v0 + re, im), 0.0)?;
    let down = polish_fold(p, Complex64::new(w.v0 - re, -im), 0.0)?;
    if (up - down).norm() < MERGE_TOLERANCE {
        return Err(Error::FoldsMerged { separation: (up - down).norm() });
    }
    Ok((up, down))
}

/// Fold points c1, c2 where ∂x/∂v = 0 at fixed y.
///
/// At y = 0 and a > a0 both are real and c1 is the local maximum of x(v)
/// (x_c1 > x_c2). Below a0, or off the axis, they are complex and c1 is the
/// member continued from Im v > 0.
pub fn find_folds(p: &BarrierParams, y: f64) -> Result<(FoldPoint, FoldPoint)> {
    let (mut c1, mut c2) = folds_on_axis(p)?;
    if y != 0.0 {
        let steps = ((y.abs() / 0.05).ceil() as usize).max(20);
        for k in 1..=steps {
            let yk = y * k as f64 / steps as f64;
            c1 = polish_fold(p, c1, yk)?;
            c2 = polish_fold(p, c2, yk)?;
        }
        if (c1 - c2).norm() < MERGE_TOLERANCE {
            return Err(Error::FoldsMerged { separation: (c1 - c2).norm() });
        }
    }
    Ok((fold_at(p, c1, y)?, fold_at(p, c2, y)?))
}

/// Points in the real (x, y) plane where a fold of the saddle equation sits.
///
/// Above a0 these are the real folds at y = 0. Below a0 the fold pair is
/// tracked off the axis until x(v_fold, y) is real, solving ∂x/∂v = 0 and
/// Im x = 0 jointly for (v, y).
pub fn fold_pierce_points(p: &BarrierParams) -> Result<Vec<FoldPoint>> {
    let w = find_critical_width(p)?;
    if p.a > w.a0 {
        let (c1, c2) = find_folds(p, 0.0)?;
        return Ok(vec![c1, c2]);
    }
    let e = expansion_at(p, &w)?;
    let half = e.delta(p.a);
    let big = e.big_delta(p.a);
    if big < 1e-14 {
        return Err(Error::FoldsMerged { separation: 2.0 * half });
    }
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        let mut v = Complex64::new(w.v0, sign * half);
        let mut y = sign * big;
        let mut res = f64::INFINITY;
        let mut ok = false;
        for _ in 0..60 {
            let j = saddle_jet(p, v, p.a, Complex64::new(y, 0.0));
            let xv = j.deriv(1, 0, 0);
            let xvv = j.deriv(2, 0, 0);
            let xvy = j.deriv(1, 0, 1);
            let xy = j.deriv(0, 0, 1);
            let f = Vector3::new(xv.re, xv.im, j.value().im);
            res = f.amax();
            if res < 1e-14 {
                ok = true;
                break;
            }
            let jac = Matrix3::new(
                xvv.re, -xvv.im, xvy.re,
                xvv.im, xvv.re, xvy.im,
                xv.im, xv.re, xy.im,
            );
            let d = jac.lu().solve(&f).ok_or(Error::NearFold { v, jacobian: 0.0 })?;
            v -= Complex64::new(d[0], d[1]);
            y -= d[2];
        }
        if !ok {
            return Err(Error::NoConvergence { iterations: 60, last: v, residual: res });
        }
        out.push(fold_at(p, v, y)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::critical::unfold_cubic;

    fn nominal(a: f64) -> BarrierParams {
        BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, a).unwrap()
    }

    #[test]
    fn two_real_folds_above_a0() {
        let (c1, c2) = find_folds(&nominal(2.0), 0.0).unwrap();
        assert!(c1.v.im == 0.0 && c2.v.im == 0.0);
        assert!(c1.x.re > c2.x.re);
        assert!((c1.x.re - 1.051).abs() < 2e-3, "{c1:?}");
        assert!((c2.x.re - 0.947).abs() < 2e-3, "{c2:?}");
    }

    #[test]
    fn merged_at_a0() {
        let w = find_critical_width(&nominal(2.0)).unwrap();
        assert!(matches!(find_folds(&nominal(w.a0), 0.0), Err(Error::FoldsMerged { .. })));
    }

    #[test]
    fn homogeneous_has_no_fold_pair() {
        let p = BarrierParams::new(30.0, 0.2, 0.0, 2.0).unwrap();
        assert!(matches!(find_folds(&p, 0.0), Err(Error::NoRealRoot { .. })));
    }

    #[test]
    fn complex_pair_below_a0() {
        let (c1, c2) = find_folds(&nominal(1.6), 0.0).unwrap();
        assert!(c1.v.im > 0.0);
        assert!((c1.v - c2.v.conj()).norm() < 1e-10);
    }

    #[test]
    fn off_axis_folds_are_stationary() {
        let p = nominal(2.0);
        let (c1, _) = find_folds(&p, 0.3).unwrap();
        let j = saddle_jet(&p, c1.v, p.a, Complex64::new(0.3, 0.0));
        assert!(j.deriv(1, 0, 0).norm() < 1e-12);
    }

    fn order(errs: &[(f64, f64)]) -> f64 {
        let n = errs.len() as f64;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for &(e, err) in errs {
            let (lx, ly) = (e.ln(), err.ln());
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn fold_positions_converge_to_cubic_prediction() {
        let w = find_critical_width(&nominal(2.0)).unwrap();
        let e = unfold_cubic(&nominal(w.a0)).unwrap();
        let mut above = Vec::new();
        let mut below = Vec::new();
        for k in 0..6 {
            let eps = 0.04 / 2f64.powi(k);
            let pa = nominal(w.a0 + eps);
            let (c1, c2) = find_folds(&pa, 0.0).unwrap();
            let xc = e.x0 + e.x_shift * eps;
            let half = 2.0 * e.c_cubic * e.delta(pa.a).powi(3);
            let err = (c1.x.re - xc - half).abs().max((c2.x.re - xc + half).abs());
            above.push((eps, err));
            let pb = nominal(w.a0 - eps);
            let pts = fold_pierce_points(&pb).unwrap();
            let big = e.big_delta(pb.a);
            let xb = e.x0 - e.x_shift * eps;
            let err = pts
                .iter()
                .map(|f| (f.x.re - xb).abs().max((f.y.abs() - big).abs()))
                .fold(0.0, f64::max);
            below.push((eps, err));
            for f in &pts {
                assert!(f.x.im.abs() < 1e-12);
            }
        }
        assert!(order(&above) >= 1.8, "above: {above:?}");
        assert!(order(&below) >= 1.8, "below: {below:?}");
    }
}
