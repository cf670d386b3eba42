//! Stokes lines of the singular action near the cusp:
//! Im[ζ⁴ + (8i/3)|δ|ζ³] = 0 with ζ = v − v0 − i|δ|.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::unfolding::unfold_cubic;
use crate::error::{Error, Result};
use crate::potential::BarrierParams;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StokesLineSet {
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub origin: Complex64,
    #[serde(serialize_with = "crate::cli::output::ser_complex_vecs")]
    pub lines: Vec<Vec<Complex64>>,
}

/// Options for the predictor-corrector tracer, in units of |δ|.
#[derive(Debug, Clone, Copy)]
pub struct StokesTraceOptions {
    pub step: f64,
    pub radius: f64,
    pub max_corrector: usize,
}

impl Default for StokesTraceOptions {
    fn default() -> Self {
        StokesTraceOptions { step: 0.02, radius: 8.0, max_corrector: 30 }
    }
}

/// Scaled defining function w⁴ + (8i/3)·c·w³ with c ∈ {0, 1}.
fn f(w: Complex64, c: f64) -> Complex64 {
    let w3 = w * w * w;
    w3 * w + Complex64::new(0.0, 8.0 * c / 3.0) * w3
}

fn df(w: Complex64, c: f64) -> Complex64 {
    let w2 = w * w;
    4.0 * w2 * w + Complex64::new(0.0, 8.0 * c) * w2
}

/// Value of the defining function at a v-plane point.
pub fn stokes_condition_2d(v: Complex64, v0: f64, delta: f64) -> Complex64 {
    let z = v - Complex64::new(v0, delta);
    z * z * z * z + Complex64::new(0.0, 8.0 * delta / 3.0) * z * z * z
}

fn correct(mut w: Complex64, c: f64, opts: &StokesTraceOptions) -> Result<Complex64> {
    for _ in 0..opts.max_corrector {
        let val = f(w, c);
        if val.im.abs() <= 1e-14 * val.re.abs().max(1e-300) {
            return Ok(w);
        }
        let g = df(w, c);
        let n2 = g.norm_sqr();
        if n2 < 1e-300 {
            return Err(Error::TracerStall { at: w });
        }
        w -= val.im * Complex64::new(g.im, g.re) / n2;
    }
    let val = f(w, c);
    if val.im.abs() <= 1e-10 * val.re.abs() {
        Ok(w)
    } else {
        Err(Error::TracerStall { at: w })
    }
}

/// Traces one branch of Im f = 0 from `start` in direction `dir` until it
/// leaves the disc or lands on `stop`.
fn trace_from(
    start: Complex64,
    dir: Complex64,
    c: f64,
    stop: Option<Complex64>,
    opts: &StokesTraceOptions,
) -> Result<Vec<Complex64>> {
    let mut pts = vec![start];
    let mut heading = dir / dir.norm();
    let first = correct(start + heading * opts.step, c, opts)?;
    heading = (first - start) / (first - start).norm();
    pts.push(first);
    let mut w = first;
    while w.norm() < opts.radius {
        if let Some(s) = stop {
            if (w - s).norm() < 1.5 * opts.step {
                pts.push(s);
                return Ok(pts);
            }
        }
        let g = df(w, c);
        if g.norm() < 1e-14 {
            return Err(Error::TracerStall { at: w });
        }
        let mut t = g.conj() / g.norm();
        if t.re * heading.re + t.im * heading.im < 0.0 {
            t = -t;
        }
        let next = correct(w + t * opts.step, c, opts)?;
        let moved = next - w;
        if moved.norm() < 0.5 * opts.step || (moved.re * t.re + moved.im * t.im) < 0.0 {
            return Err(Error::TracerStall { at: w });
        }
        heading = moved / moved.norm();
        w = next;
        pts.push(w);
        if pts.len() > 100_000 {
            return Err(Error::TracerStall { at: w });
        }
    }
    Ok(pts)
}

/// Polylines in the scaled plane w = ζ/|δ|. With c = 0 the condition is Im w⁴ = 0.
pub fn scaled_stokes_lines(c: f64, opts: &StokesTraceOptions) -> Result<Vec<Vec<Complex64>>> {
    let zero = Complex64::new(0.0, 0.0);
    let dir = |theta: f64| crate::cmath::from_polar(1.0, theta);
    let mut lines = Vec::new();
    if c == 0.0 {
        for k in 0..8 {
            lines.push(trace_from(zero, dir(k as f64 * PI / 4.0), c, None, opts)?);
        }
        return Ok(lines);
    }
    let saddle = Complex64::new(0.0, -2.0);
    for k in 0..6 {
        let theta = PI / 6.0 + k as f64 * PI / 3.0;
        let stop = if k == 4 { Some(saddle) } else { None };
        lines.push(trace_from(zero, dir(theta), c, stop, opts)?);
    }
    for theta in [0.0, PI, 1.5 * PI] {
        lines.push(trace_from(saddle, dir(theta), c, None, opts)?);
    }
    Ok(lines)
}

/// Stokes lines in the complex v plane for a < a0, through v0 + i|δ|.
pub fn trace_stokes_lines_2d(p: &BarrierParams) -> Result<StokesLineSet> {
    let e = unfold_cubic(p)?;
    if p.a >= e.a0 {
        return Err(Error::InvalidParams(format!(
            "Stokes geometry needs a < a0 (a = {}, a0 = {})",
            p.a, e.a0
        )));
    }
    let d = e.delta(p.a);
    let origin = Complex64::new(e.v0, d);
    let lines = scaled_stokes_lines(1.0, &StokesTraceOptions::default())?
        .into_iter()
        .map(|l| l.into_iter().map(|w| origin + w * d).collect())
        .collect();
    Ok(StokesLineSet { origin, lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wrap(a: f64) -> f64 {
        (a + PI).rem_euclid(2.0 * PI) - PI
    }

    #[test]
    fn degenerate_quartic_gives_eight_rays() {
        let lines = scaled_stokes_lines(0.0, &StokesTraceOptions::default()).unwrap();
        assert_eq!(lines.len(), 8);
        for (k, l) in lines.iter().enumerate() {
            for w in &l[1..] {
                assert!(wrap(w.arg() - k as f64 * PI / 4.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn asymptotic_angles_follow_perturbation_theory() {
        let lines = scaled_stokes_lines(1.0, &StokesTraceOptions::default()).unwrap();
        assert_eq!(lines.len(), 9);
        let mut found = [false; 8];
        for l in &lines {
            let end = *l.last().unwrap();
            if end.norm() < 7.9 {
                continue;
            }
            let rho = end.norm();
            let k = (end.arg() / (PI / 4.0)).round().rem_euclid(8.0) as usize;
            let base = k as f64 * PI / 4.0;
            let predicted = base - 2.0 / (3.0 * rho) * base.cos() + 2.0 / (3.0 * rho * rho) * (2.0 * base).sin();
            assert!(wrap(end.arg() - predicted).abs() < 2.0 / rho.powi(3), "k = {k}, end {end}");
            found[k] = true;
        }
        assert!(found.iter().all(|&f| f));
    }

    #[test]
    fn real_axis_crossed_at_v0() {
        let p = BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, 1.65).unwrap();
        let set = trace_stokes_lines_2d(&p).unwrap();
        let e = unfold_cubic(&p).unwrap();
        let mut crossings = Vec::new();
        for l in &set.lines {
            for w in l.windows(2) {
                if w[0].im * w[1].im <= 0.0 && w[0].im != w[1].im {
                    let t = w[0].im / (w[0].im - w[1].im);
                    crossings.push(w[0].re + t * (w[1].re - w[0].re));
                }
            }
        }
        assert!(crossings.iter().any(|c| (c - e.v0).abs() < 1e-12), "{crossings:?}");
    }

    #[test]
    fn polylines_satisfy_the_condition() {
        let p = BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, 1.65).unwrap();
        let set = trace_stokes_lines_2d(&p).unwrap();
        let e = unfold_cubic(&p).unwrap();
        let d = e.delta(p.a);
        for l in &set.lines {
            for &v in &l[1..] {
                let val = stokes_condition_2d(v, e.v0, d);
                assert!(val.im.abs() <= 1e-8 * val.re.abs(), "{v}: {val}");
            }
        }
    }
}
