//! Pseudo-arclength continuation of saddle roots in (x, Re v, Im v) and the
//! assembly of labelled wave-function branches.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::action::{action_continued, action_with_state, BoundaryState, ComplexAction};
use super::saddle::{eval_saddle, solve_saddle, NewtonOptions, SaddleEval, SaddlePoint, Sheet};
use crate::critical;
use crate::cmath;
use crate::error::{Error, Result};
use crate::potential::BarrierParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BranchLabel {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    #[serde(rename = "1-3")]
    OneThree,
    #[serde(rename = "3-1")]
    ThreeOne,
    #[serde(rename = "2-2")]
    TwoTwo,
}

impl BranchLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            BranchLabel::One => "1",
            BranchLabel::Two => "2",
            BranchLabel::Three => "3",
            BranchLabel::OneThree => "1-3",
            BranchLabel::ThreeOne => "3-1",
            BranchLabel::TwoTwo => "2-2",
        }
    }

    fn ordinal(k: usize) -> BranchLabel {
        match k {
            0 => BranchLabel::One,
            1 => BranchLabel::Two,
            _ => BranchLabel::Three,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSample {
    pub x: f64,
    pub v: Complex64,
    pub sigma: Complex64,
    pub log_psi_mag: f64,
    pub sheet: Sheet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchCurve {
    pub y: f64,
    pub label: BranchLabel,
    pub samples: Vec<BranchSample>,
}

#[derive(Debug, Clone, Copy)]
pub struct ContinuationOptions {
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    pub v_max: f64,
    pub newton: NewtonOptions,
    /// How far in x the complex extensions beyond a fold are carried.
    pub extension: f64,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions {
            h_init: 1e-3,
            h_min: 1e-11,
            h_max: 0.02,
            max_steps: 100_000,
            v_max: 12.0,
            newton: NewtonOptions::default(),
            extension: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub x: f64,
    pub v: Complex64,
    pub sheet: Sheet,
}

fn tangent(e: &SaddleEval) -> Vector3<f64> {
    let d = e.dx_dv;
    let t = Vector3::new(d.norm_sqr(), d.re, -d.im);
    let n = t.norm();
    if n == 0.0 {
        t
    } else {
        t / n
    }
}

/// Why a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEnd {
    Window,
    VBound,
    StepBudget,
}

/// Follow the solution curve of the saddle equation at fixed real y from
/// `start`, initially moving along `hint`, until `keep(x, v)` is false.
pub fn trace_curve<K>(
    params: &BarrierParams,
    y: f64,
    start: TracePoint,
    hint: Vector3<f64>,
    keep: K,
    opts: &ContinuationOptions,
) -> Result<(Vec<TracePoint>, TraceEnd)>
where
    K: Fn(f64, Complex64) -> bool,
{
    let yc = Complex64::new(y, 0.0);
    let mut pts = vec![start];
    let mut cur = start;
    let mut e = eval_saddle(params, cur.v, yc, cur.sheet)?;
    let mut t = tangent(&e);
    if t.dot(&hint) < 0.0 {
        t = -t;
    }
    let mut h = opts.h_init;
    for _ in 0..opts.max_steps {
        let z0 = Vector3::new(cur.x, cur.v.re, cur.v.im);
        let zp = z0 + t * h;
        let mut z = zp;
        let mut ok = false;
        let mut iters = 0;
        let mut ez = e;
        for it in 0..12 {
            iters = it + 1;
            let v = Complex64::new(z[1], z[2]);
            ez = match eval_saddle(params, v, yc, cur.sheet) {
                Ok(ev) => ev,
                Err(_) => break,
            };
            let f = ez.x - z[0];
            let d = ez.dx_dv;
            let rhs = Vector3::new(-f.re, -f.im, -t.dot(&(z - zp)));
            let j = Matrix3::new(-1.0, d.re, -d.im, 0.0, d.im, d.re, t[0], t[1], t[2]);
            let dz = match j.lu().solve(&rhs) {
                Some(s) => s,
                None => break,
            };
            z += dz;
            if !(z[0].is_finite() && z[1].is_finite() && z[2].is_finite()) {
                break;
            }
            if dz.norm() < 1e-13 * (1.0 + z.norm()) || f.norm() < opts.newton.tol * 1e-2 {
                let v = Complex64::new(z[1], z[2]);
                if let Ok(ev) = eval_saddle(params, v, yc, cur.sheet) {
                    ez = ev;
                    if (ez.x - z[0]).norm() < opts.newton.tol {
                        ok = true;
                    }
                }
                break;
            }
        }
        let mut t_new = tangent(&ez);
        if ok {
            if t_new.dot(&t) < 0.0 {
                t_new = -t_new;
            }
            // reject steps that turn sharply or move much farther than requested
            if (t_new.dot(&t) < 0.8 || (z - z0).norm() > 2.0 * h) && h > 1e4 * opts.h_min {
                ok = false;
            }
            // off the axis folds are complex, so x is monotone on each sheet and a
            // reversal means the corrector hopped to the neighbouring sheet
            if y != 0.0 && t_new[0] * t[0] < 0.0 {
                ok = false;
            }
        }
        if !ok {
            h *= 0.5;
            if h < opts.h_min {
                return Err(Error::StepCollapse { step: h, x: cur.x });
            }
            continue;
        }
        let v = Complex64::new(z[1], z[2]);
        let sheet = Sheet::follow(params, v, &e)?;
        let next = TracePoint { x: z[0], v, sheet };
        e = if sheet == cur.sheet { ez } else { eval_saddle(params, v, yc, sheet)? };
        t = t_new;
        if v.norm() > opts.v_max {
            return Ok((pts, TraceEnd::VBound));
        }
        if !keep(next.x, next.v) {
            return Ok((pts, TraceEnd::Window));
        }
        pts.push(next);
        cur = next;
        if iters <= 3 {
            h = (h * 1.5).min(opts.h_max);
        }
    }
    Ok((pts, TraceEnd::StepBudget))
}

fn to_samples(params: &BarrierParams, y: f64, pts: &[TracePoint]) -> Result<Vec<BranchSample>> {
    let yc = Complex64::new(y, 0.0);
    let straight = |p: &TracePoint| action_with_state(p.x, yc, params, p.v, p.sheet);
    let Some(anchor) = pts.iter().position(|p| straight(p).is_ok()) else {
        return match pts.first() {
            Some(p) => Err(straight(p).unwrap_err()),
            None => Ok(Vec::new()),
        };
    };
    // σ is continued along the branch; the straight contour [0, iv] is kept only
    // where it agrees, since it may pass a branch point of the root on the other side
    let step = |p: &TracePoint, from: &BoundaryState| -> Result<(ComplexAction, BoundaryState)> {
        let cont = action_continued(p.x, yc, params, p.v, p.sheet, from);
        match (straight(p), cont) {
            (Ok(s), Ok(c)) if (s.0.sigma - c.0.sigma).norm() <= 1e-9 * (1.0 + c.0.sigma.norm()) => Ok(s),
            (_, Ok(c)) => Ok(c),
            (Ok(s), Err(_)) => Ok(s),
            (Err(e), Err(_)) => Err(e),
        }
    };
    let mut done: Vec<Option<(ComplexAction, BoundaryState)>> = vec![None; pts.len()];
    done[anchor] = Some(straight(&pts[anchor])?);
    for k in anchor + 1..pts.len() {
        let from = done[k - 1].as_ref().map(|d| d.1).unwrap();
        done[k] = Some(step(&pts[k], &from)?);
    }
    for k in (0..anchor).rev() {
        let from = done[k + 1].as_ref().map(|d| d.1).unwrap();
        done[k] = Some(step(&pts[k], &from)?);
    }
    Ok(pts
        .iter()
        .zip(done)
        .map(|(p, d)| {
            let (a, _) = d.unwrap();
            BranchSample {
                x: p.x,
                v: p.v,
                sigma: a.sigma,
                log_psi_mag: -params.b * a.sigma.im,
                sheet: p.sheet,
            }
        })
        .collect())
}

fn finish(params: &BarrierParams, y: f64, label: BranchLabel, mut pts: Vec<TracePoint>) -> Result<BranchCurve> {
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    pts.dedup_by(|a, b| a.x == b.x);
    Ok(BranchCurve {
        y,
        label,
        samples: to_samples(params, y, &pts)?,
    })
}

/// Trace a single branch through `seed` across the x window in both directions.
pub fn trace_branch(
    y: f64,
    x_range: (f64, f64),
    params: &BarrierParams,
    seed: TracePoint,
    label: BranchLabel,
    opts: &ContinuationOptions,
) -> Result<BranchCurve> {
    let (lo, hi) = x_range;
    if seed.x < lo || seed.x > hi {
        return Err(Error::OutOfRange {
            what: "seed x".into(),
            value: seed.x,
            lo,
            hi,
        });
    }
    let keep = |x: f64, _v: Complex64| x >= lo && x <= hi;
    let (fwd, _) = trace_curve(params, y, seed, Vector3::new(1.0, 0.0, 0.0), keep, opts)?;
    let (bwd, _) = trace_curve(params, y, seed, Vector3::new(-1.0, 0.0, 0.0), keep, opts)?;
    let mut pts = fwd;
    pts.extend(bwd.into_iter().skip(1));
    finish(params, y, label, pts)
}

fn refine_fold(params: &BarrierParams, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let d = |v: f64| -> Result<f64> {
        Ok(eval_saddle(params, Complex64::new(v, 0.0), Complex64::new(0.0, 0.0), Sheet::PRINCIPAL)?
            .dx_dv
            .re)
    };
    let mut flo = d(lo)?;
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m == lo || m == hi {
            break;
        }
        let fm = d(m)?;
        if (fm > 0.0) == (flo > 0.0) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
    let v = 0.5 * (lo + hi);
    let x = eval_saddle(params, Complex64::new(v, 0.0), Complex64::new(0.0, 0.0), Sheet::PRINCIPAL)?
        .x
        .re;
    Ok((v, x))
}

/// Seed on the complex pair leaving a real fold at (v_f, x_f); `up` selects Im v > 0.
fn fold_extension(
    params: &BarrierParams,
    vf: f64,
    xf: f64,
    is_max: bool,
    up: bool,
    x_range: (f64, f64),
    opts: &ContinuationOptions,
) -> Result<Vec<TracePoint>> {
    let zero = Complex64::new(0.0, 0.0);
    let j = super::saddle::saddle_jet(params, Complex64::new(vf, 0.0), params.a, zero);
    let x2 = j.deriv(2, 0, 0).re;
    let eps = 1e-6_f64.max(1e-3 * opts.extension);
    let x_seed = if is_max { xf + eps } else { xf - eps };
    let w = (2.0 * eps / x2.abs()).sqrt();
    let guess = Complex64::new(vf, if up { w } else { -w });
    let sp = solve_saddle(x_seed, zero, params, guess, Sheet::PRINCIPAL, &opts.newton)?;
    let (lo, hi) = if is_max {
        (xf, (xf + opts.extension).min(x_range.1))
    } else {
        ((xf - opts.extension).max(x_range.0), xf)
    };
    let keep = |x: f64, _v: Complex64| x >= lo && x <= hi;
    let hint = Vector3::new(if is_max { 1.0 } else { -1.0 }, 0.0, 0.0);
    let start = TracePoint { x: sp.x, v: sp.v, sheet: sp.sheet };
    let (pts, _) = trace_curve(params, 0.0, start, hint, keep, opts)?;
    Ok(pts)
}

/// All branches of the wave function on the line y = const within the x window.
pub fn branch_family(
    params: &BarrierParams,
    y: f64,
    x_range: (f64, f64),
    opts: &ContinuationOptions,
) -> Result<Vec<BranchCurve>> {
    if y == 0.0 {
        real_axis_family(params, x_range, opts)
    } else {
        off_axis_family(params, y, x_range, opts)
    }
}

fn real_axis_family(params: &BarrierParams, x_range: (f64, f64), opts: &ContinuationOptions) -> Result<Vec<BranchCurve>> {
    let (lo, hi) = x_range;
    let zero = Complex64::new(0.0, 0.0);
    let start = TracePoint { x: 0.0, v: zero, sheet: Sheet::PRINCIPAL };
    // trace the whole real curve so folds beyond hi still fix the topology
    let keep = |x: f64, v: Complex64| x >= lo - 10.0 && v.re >= -1e-12;
    let (real, _) = trace_curve(params, 0.0, start, Vector3::new(1.0, 0.0, 0.0), keep, opts)?;

    // folds along the real curve: sign changes of dx/dv
    let mut folds = Vec::new();
    for w in real.windows(2) {
        let (a, b) = (w[0].v.re, w[1].v.re);
        let da = eval_saddle(params, w[0].v, zero, Sheet::PRINCIPAL)?.dx_dv.re;
        let db = eval_saddle(params, w[1].v, zero, Sheet::PRINCIPAL)?.dx_dv.re;
        if da * db < 0.0 || (db == 0.0 && da != 0.0) {
            let (vf, xf) = refine_fold(params, a.min(b), a.max(b))?;
            folds.push((vf, xf, da > 0.0));
        }
    }

    let hybrid = folds.is_empty() && params.alpha0 > 0.0;
    let n_seg = folds.len() + 1;
    let mut segs: Vec<Vec<TracePoint>> = vec![Vec::new(); n_seg];
    for p in real.iter().filter(|p| p.x >= lo && p.x <= hi) {
        let k = folds.iter().filter(|f| p.v.re > f.0).count();
        segs[k].push(*p);
    }
    for (k, &(vf, xf, is_max)) in folds.iter().enumerate() {
        if xf < lo || xf > hi {
            continue;
        }
        let fp = TracePoint { x: xf, v: Complex64::new(vf, 0.0), sheet: Sheet::PRINCIPAL };
        segs[k].push(fp);
        segs[k + 1].push(fp);
        if opts.extension <= 0.0 {
            continue;
        }
        // lower-v side takes Im v > 0 at a maximum, the upper side at a minimum
        let lower_up = is_max;
        let ext_lower = fold_extension(params, vf, xf, is_max, lower_up, x_range, opts)?;
        let ext_upper = fold_extension(params, vf, xf, is_max, !lower_up, x_range, opts)?;
        segs[k].extend(ext_lower);
        segs[k + 1].extend(ext_upper);
    }

    let mut out = Vec::new();
    if hybrid {
        out.push(finish(params, 0.0, BranchLabel::OneThree, segs.remove(0))?);
        for (up, label) in [(true, BranchLabel::ThreeOne), (false, BranchLabel::TwoTwo)] {
            let sp = hybrid_seed(params, up, opts)?;
            let seed = TracePoint { x: sp.x, v: sp.v, sheet: sp.sheet };
            out.push(trace_branch(0.0, x_range, params, seed, label, opts)?);
        }
    } else {
        for (k, seg) in segs.into_iter().enumerate() {
            if !seg.is_empty() {
                out.push(finish(params, 0.0, BranchLabel::ordinal(k), seg)?);
            }
        }
    }
    Ok(out)
}

/// Complex saddle near v0 on y = 0 for a < a0, on the Im v > 0 side if `up`.
fn hybrid_seed(params: &BarrierParams, up: bool, opts: &ContinuationOptions) -> Result<SaddlePoint> {
    let zero = Complex64::new(0.0, 0.0);
    let cw = critical::find_critical_width(params)?;
    let j = super::saddle::saddle_jet(params, Complex64::new(cw.v0, 0.0), cw.a0, zero);
    let c3 = j.deriv(3, 0, 0).re / 6.0;
    let cav = -j.deriv(1, 1, 0).re;
    let w = (cav * (cw.a0 - params.a) / c3).abs().sqrt();
    let xs = eval_saddle(params, Complex64::new(cw.v0, 0.0), zero, Sheet::PRINCIPAL)?.x.re;
    let guess = Complex64::new(cw.v0, if up { w } else { -w });
    let sp = solve_saddle(xs, zero, params, guess, Sheet::PRINCIPAL, &opts.newton)?;
    if (sp.v.im > 0.0) != up {
        return Err(Error::SolverFailure(format!("complex seed collapsed to v = {}", sp.v)));
    }
    Ok(sp)
}

/// Seed of branch 2 off the axis: the second root at x = 0 when it exists,
/// otherwise the y = 0 middle branch continued in y at fixed x.
fn branch_two_seed(params: &BarrierParams, y: f64, opts: &ContinuationOptions) -> Result<TracePoint> {
    let yc = Complex64::new(y, 0.0);
    let v1 = -I * y;
    let a2 = params.alpha_sq(yc)?;
    let guess = v1 + 4.0 * cmath::sqrt((1.0 + a2) * (params.gamma + a2));
    if let Ok(sp) = solve_saddle(0.0, yc, params, guess, Sheet::PRINCIPAL, &opts.newton) {
        if (sp.v - v1).norm() > 1e-6 {
            return Ok(TracePoint { x: 0.0, v: sp.v, sheet: sp.sheet });
        }
    }
    let start = match critical::find_folds(params, 0.0) {
        Ok((c1, c2)) if c1.v.im == 0.0 && c2.v.im == 0.0 => {
            let v = Complex64::new(0.5 * (c1.v.re + c2.v.re), 0.0);
            let x = eval_saddle(params, v, Complex64::new(0.0, 0.0), Sheet::PRINCIPAL)?.x.re;
            SaddlePoint { x, y: Complex64::new(0.0, 0.0), v, sheet: Sheet::PRINCIPAL, residual: 0.0 }
        }
        _ => hybrid_seed(params, false, opts)?,
    };
    let steps = ((y.abs() / 0.02).ceil() as usize).max(20);
    let (mut v, mut sheet) = (start.v, start.sheet);
    let mut prev = v;
    for k in 1..=steps {
        let yk = Complex64::new(y * k as f64 / steps as f64, 0.0);
        let guess = v + (v - prev);
        let sp = solve_saddle(start.x, yk, params, guess, sheet, &opts.newton)?;
        prev = v;
        v = sp.v;
        sheet = sp.sheet;
    }
    Ok(TracePoint { x: start.x, v, sheet })
}

fn off_axis_family(params: &BarrierParams, y: f64, x_range: (f64, f64), opts: &ContinuationOptions) -> Result<Vec<BranchCurve>> {
    let yc = Complex64::new(y, 0.0);
    let (lo, hi) = x_range;
    let mut out = Vec::new();

    let v1 = -I * y;
    let s1 = TracePoint { x: 0.0, v: v1, sheet: Sheet::PRINCIPAL };
    let s2 = branch_two_seed(params, y, opts)?;
    let mut seeds = vec![(s1, BranchLabel::One), (s2, BranchLabel::Two)];

    // without a real exit point there is no third branch
    let extrema = match critical::find_extrema(params) {
        Err(Error::NoRealRoot { .. }) => None,
        other => Some(other?),
    };
    if let (true, Some(ex)) = (params.alpha0 > 0.0, extrema) {
        let xt = ex.x_b + y * y / (4.0 * (ex.x_b - 1.0 + params.gamma));
        let sp3 = solve_saddle(xt, yc, params, Complex64::new(ex.v_b, 0.0), Sheet::PRINCIPAL, &opts.newton)?;
        seeds.push((TracePoint { x: sp3.x, v: sp3.v, sheet: sp3.sheet }, BranchLabel::Three));
    }

    for (seed, label) in seeds {
        let wlo = lo.min(seed.x);
        let whi = hi.max(seed.x);
        let keep = |x: f64, _v: Complex64| x >= wlo && x <= whi;
        let (fwd, _) = trace_curve(params, y, seed, Vector3::new(1.0, 0.0, 0.0), keep, opts)?;
        let (bwd, _) = trace_curve(params, y, seed, Vector3::new(-1.0, 0.0, 0.0), keep, opts)?;
        let mut pts: Vec<TracePoint> = fwd;
        pts.extend(bwd.into_iter().skip(1));
        pts.retain(|p| p.x >= lo && p.x <= hi);
        if !pts.is_empty() {
            out.push(finish(params, y, label, pts)?);
        }
    }
    Ok(out)
}

/// −B Im σ interpolated linearly in x along the branch.
pub fn log_psi(x: f64, branch: &BranchCurve) -> Result<f64> {
    let s = &branch.samples;
    if s.is_empty() || x < s[0].x || x > s[s.len() - 1].x {
        return Err(Error::OutOfRange {
            what: "x".into(),
            value: x,
            lo: s.first().map_or(f64::NAN, |p| p.x),
            hi: s.last().map_or(f64::NAN, |p| p.x),
        });
    }
    let k = s.partition_point(|p| p.x < x);
    if k == 0 {
        return Ok(s[0].log_psi_mag);
    }
    let (a, b) = (&s[k - 1], &s[k]);
    let t = (x - a.x) / (b.x - a.x);
    Ok(a.log_psi_mag + t * (b.log_psi_mag - a.log_psi_mag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn nominal(a: f64) -> BarrierParams {
        BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, a).unwrap()
    }

    fn labels(curves: &[BranchCurve]) -> Vec<&'static str> {
        curves.iter().map(|c| c.label.as_str()).collect()
    }

    #[test]
    fn homogeneous_two_branches_meet_at_turning_point() {
        let p = BarrierParams::new(30.0, 0.2, 0.0, 2.0).unwrap();
        let opts = ContinuationOptions { extension: 0.0, ..Default::default() };
        let fam = branch_family(&p, 0.0, (0.0, 1.5), &opts).unwrap();
        assert_eq!(labels(&fam), vec!["1", "2"]);
        let b1 = &fam[0];
        for s in &b1.samples {
            let w = (1.0 - s.x).sqrt();
            assert!((s.sigma - Complex64::new(0.0, 2.0 / 3.0 * (1.0 - w * w * w))).norm() < 1e-9);
        }
        let last = b1.samples.last().unwrap();
        assert_relative_eq!(last.x, 1.0, epsilon = 1e-3);
        assert_relative_eq!(-last.log_psi_mag / p.b, 2.0 / 3.0, epsilon = 1e-4);
    }

    #[test]
    fn fold_regime_has_three_branches() {
        let p = nominal(2.0);
        let fam = branch_family(&p, 0.0, (0.0, 2.0), &ContinuationOptions::default()).unwrap();
        assert_eq!(labels(&fam), vec!["1", "2", "3"]);
        for c in &fam {
            for w in c.samples.windows(2) {
                assert!(w[1].x > w[0].x);
                assert!((w[1].v - w[0].v).norm() < 0.2);
            }
        }
    }

    #[test]
    fn hybrid_regime_labels() {
        let p = nominal(1.6);
        let fam = branch_family(&p, 0.0, (0.0, 2.0), &ContinuationOptions::default()).unwrap();
        assert_eq!(labels(&fam), vec!["1-3", "3-1", "2-2"]);
    }

    #[test]
    fn tracing_is_deterministic() {
        let p = nominal(2.0);
        let a = branch_family(&p, 0.7, (0.0, 2.0), &ContinuationOptions::default()).unwrap();
        let b = branch_family(&p, 0.7, (0.0, 2.0), &ContinuationOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn log_psi_interpolates_and_bounds() {
        let p = nominal(2.0);
        let fam = branch_family(&p, 0.0, (0.0, 1.0), &ContinuationOptions::default()).unwrap();
        assert_eq!(log_psi(0.0, &fam[0]).unwrap(), 0.0);
        assert!(matches!(log_psi(-0.1, &fam[0]), Err(Error::OutOfRange { .. })));
    }
}
