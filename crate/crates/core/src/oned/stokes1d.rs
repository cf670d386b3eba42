//! Stokes lines Im φ = 0 of φ(x) = ik∫_{x_c}^x √(1 − (V/E)/cosh²(x₁/a)) dx₁
//! in the complex x plane, starting at the turning point x_c. Lines that run
//! into another turning point end there.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::critical::StokesLineSet;
use crate::cmath;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// x_c = ia·arctan√(E/V − 1).
pub fn turning_point(e: f64, v: f64, a: f64) -> Result<Complex64> {
    if !(v > 0.0 && e > v && a > 0.0) {
        return Err(Error::Domain(format!("turning point needs E > V > 0 (E = {e}, V = {v})")));
    }
    Ok(I * a * (e / v - 1.0).sqrt().atan())
}

struct Phase {
    k: f64,
    nu: f64,
    a: f64,
}

impl Phase {
    fn g_sq(&self, x: Complex64) -> Complex64 {
        let c = cmath::cosh(x / self.a);
        1.0 - self.nu / (c * c)
    }

    /// √(g²) on the sign closest to `near`.
    fn g(&self, x: Complex64, near: Complex64) -> Complex64 {
        let r = cmath::sqrt(self.g_sq(x));
        if (r - near).norm() <= (-r - near).norm() { r } else { -r }
    }

    /// φ increment along the straight segment z0 → z1 with the root continued from g0.
    fn increment(&self, z0: Complex64, z1: Complex64, g0: Complex64) -> (Complex64, Complex64) {
        const N: usize = 4;
        // 5-point Gauss–Legendre on each of N sub-segments
        const X: [f64; 5] = [-0.906_179_845_938_664, -0.538_469_310_105_683, 0.0, 0.538_469_310_105_683, 0.906_179_845_938_664];
        const W: [f64; 5] = [0.236_926_885_056_189, 0.478_628_670_499_366, 0.568_888_888_888_889, 0.478_628_670_499_366, 0.236_926_885_056_189];
        let d = (z1 - z0) / N as f64;
        let mut g = g0;
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 0..N {
            let mid = z0 + d * (n as f64 + 0.5);
            for (xi, wi) in X.iter().zip(W.iter()) {
                let z = mid + d * (0.5 * xi);
                g = self.g(z, g);
                sum += *wi * 0.5 * g;
            }
        }
        let g_end = self.g(z1, g);
        (I * self.k * sum * d, g_end)
    }

    /// φ at x_c + h·e^{iθ} via x = x_c + h t², which removes the square-root endpoint.
    fn phase_from_turning_point(&self, xc: Complex64, end: Complex64) -> (Complex64, Complex64) {
        const X: [f64; 5] = [0.046_910_077_030_668, 0.230_765_344_947_158, 0.5, 0.769_234_655_052_842, 0.953_089_922_969_332];
        const W: [f64; 5] = [0.118_463_442_528_095, 0.239_314_335_249_683, 0.284_444_444_444_444, 0.239_314_335_249_683, 0.118_463_442_528_095];
        let d = end - xc;
        let g_first = cmath::sqrt(self.g_sq(xc + d * (X[0] * X[0])));
        let mut g = g_first;
        let mut sum = Complex64::new(0.0, 0.0);
        for (t, w) in X.iter().zip(W.iter()) {
            g = self.g(xc + d * (t * t), g);
            sum += *w * g * 2.0 * *t;
        }
        (I * self.k * sum * d, self.g(end, g))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Stokes1DOptions {
    /// Step in units of a.
    pub step: f64,
    /// Tracing stops beyond this distance from x_c, in units of a.
    pub radius: f64,
}

impl Default for Stokes1DOptions {
    fn default() -> Self {
        Stokes1DOptions { step: 0.01, radius: 3.0 }
    }
}

fn trace_ray(ph: &Phase, xc: Complex64, theta: f64, opts: &Stokes1DOptions) -> Result<Vec<Complex64>> {
    let h = opts.step * ph.a;
    let pole = I * ph.a * PI / 2.0;
    // other turning points ±x_c + iπa·n
    let targets: Vec<Complex64> = (-2..=2)
        .flat_map(|n| [xc + I * PI * ph.a * n as f64, -xc + I * PI * ph.a * n as f64])
        .filter(|t| (t - xc).norm() > 1e-12)
        .collect();
    let mut pts = vec![xc];
    let guess = xc + cmath::from_polar(h, theta);
    let (_, mut g) = ph.phase_from_turning_point(xc, guess);
    let mut x = guess;
    // Newton on Im φ = 0 along conj(φ')
    let step = |x0: Complex64, x1: Complex64, g0: Complex64| {
        if x0 == xc { ph.phase_from_turning_point(xc, x1) } else { ph.increment(x0, x1, g0) }
    };
    let project = |x0: Complex64, phi0: Complex64, g0: Complex64, mut x: Complex64| -> Result<(Complex64, Complex64, Complex64)> {
        let (mut d, mut gx) = step(x0, x, g0);
        for _ in 0..40 {
            let phi = phi0 + d;
            if phi.im.abs() <= 1e-13 * phi.re.abs().max(1e-300) {
                return Ok((x, phi, gx));
            }
            let gp = I * ph.k * gx;
            x -= I * phi.im * gp.conj() / gp.norm_sqr();
            let r = step(x0, x, g0);
            d = r.0;
            gx = r.1;
        }
        let phi = phi0 + d;
        if phi.im.abs() <= 1e-9 * phi.re.abs() {
            Ok((x, phi, gx))
        } else {
            Err(Error::TracerStall { at: x })
        }
    };
    let first = project(xc, Complex64::new(0.0, 0.0), g, x)?;
    x = first.0;
    let mut phi = first.1;
    g = first.2;
    pts.push(x);
    let mut heading = (x - xc) / (x - xc).norm();
    loop {
        if (x - xc).norm() > opts.radius * ph.a || (x - pole).norm() < 2.0 * h || (x + pole).norm() < 2.0 * h {
            return Ok(pts);
        }
        if let Some(t) = targets.iter().find(|t| (x - **t).norm() < 3.0 * h) {
            pts.push(*t);
            return Ok(pts);
        }
        let gp = I * ph.k * g;
        let mut t = gp.conj() / gp.norm();
        if t.re * heading.re + t.im * heading.im < 0.0 {
            t = -t;
        }
        let (nx, nphi, ng) = project(x, phi, g, x + t * h)?;
        let moved = nx - x;
        if moved.norm() < 0.5 * h || moved.re * t.re + moved.im * t.im <= 0.0 {
            return Err(Error::TracerStall { at: x });
        }
        heading = moved / moved.norm();
        x = nx;
        phi = nphi;
        g = ng;
        pts.push(x);
        if pts.len() > 200_000 {
            return Err(Error::TracerStall { at: x });
        }
    }
}

/// The three Stokes lines leaving the turning point at −π/2, π/6 and 5π/6.
pub fn stokes_lines_1d(e: f64, v: f64, a: f64) -> Result<StokesLineSet> {
    stokes_lines_1d_with(e, v, a, &Stokes1DOptions::default())
}

pub fn stokes_lines_1d_with(e: f64, v: f64, a: f64, opts: &Stokes1DOptions) -> Result<StokesLineSet> {
    let xc = turning_point(e, v, a)?;
    let ph = Phase { k: e.sqrt(), nu: v / e, a };
    let lines = [-PI / 2.0, PI / 6.0, 5.0 * PI / 6.0]
        .iter()
        .map(|&th| trace_ray(&ph, xc, th, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(StokesLineSet { origin: xc, lines })
}

/// φ(x) − φ(x_c) along a polyline, continued vertex by vertex.
pub fn phase_along(e: f64, v: f64, a: f64, line: &[Complex64]) -> Vec<Complex64> {
    let ph = Phase { k: e.sqrt(), nu: v / e, a };
    let mut out = vec![Complex64::new(0.0, 0.0)];
    if line.len() < 2 {
        return out;
    }
    let (mut phi, mut g) = ph.phase_from_turning_point(line[0], line[1]);
    out.push(phi);
    for w in line[1..].windows(2) {
        let (d, g1) = ph.increment(w[0], w[1], g);
        phi += d;
        g = g1;
        out.push(phi);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn turning_point_is_imaginary() {
        let xc = turning_point(1.5, 1.0, 2.0).unwrap();
        assert_eq!(xc.re, 0.0);
        assert!((xc.im - 2.0 * 0.5f64.sqrt().atan()).abs() < 1e-15);
        let c = cmath::cosh(xc / 2.0);
        assert!((1.0 - 1.0 / 1.5 / (c * c)).norm() < 1e-14);
    }

    #[test]
    fn three_lines_one_crossing() {
        let set = stokes_lines_1d(225.0, 150.0, 1.0).unwrap();
        assert_eq!(set.lines.len(), 3);
        let mut crossings = Vec::new();
        for (n, l) in set.lines.iter().enumerate() {
            for w in l.windows(2) {
                if w[0].im > 0.0 && w[1].im <= 0.0 {
                    crossings.push((n, w[0].re));
                }
            }
        }
        assert_eq!(crossings.len(), 1, "{crossings:?}");
        assert_eq!(crossings[0].0, 0);
        assert!(crossings[0].1.abs() < 1e-12);
    }

    #[test]
    fn local_rays_are_120_degrees_apart() {
        let set = stokes_lines_1d(225.0, 150.0, 1.0).unwrap();
        let dirs: Vec<f64> = set.lines.iter().map(|l| (l[1] - l[0]).arg()).collect();
        let sep = |a: f64, b: f64| ((a - b).rem_euclid(2.0 * PI)).min((b - a).rem_euclid(2.0 * PI));
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            assert!((sep(dirs[i], dirs[j]) - 2.0 * PI / 3.0).abs() < 0.02, "{dirs:?}");
        }
    }

    #[test]
    fn traced_lines_keep_im_phi_zero() {
        let (e, v, a) = (225.0, 150.0, 1.0);
        let set = stokes_lines_1d(e, v, a).unwrap();
        for l in &set.lines {
            for phi in phase_along(e, v, a, l).iter().skip(1) {
                assert!(phi.im.abs() <= 1e-8 * phi.re.abs(), "{phi}");
            }
        }
    }
}
