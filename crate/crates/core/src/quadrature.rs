//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands
//! on real intervals. Contours are handled by the caller's parameterization.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-15,
            rel_tol: 1e-13,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let d = h * XGK[j];
        let s = f(c - d)? + f(c + d)?;
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    Ok(Segment {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).norm(),
    })
}

/// Integrate `f` over [a, b], splitting first at the given interior points.
pub fn integrate_with_breaks<F>(f: F, a: f64, b: f64, breaks: &[f64], opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let mut knots = vec![a];
    for &p in breaks {
        if (p - a) * (b - p) > 0.0 {
            knots.push(p);
        }
    }
    knots.push(b);
    let last = knots.len() - 1;
    if b < a {
        knots[1..last].sort_by(|x, y| y.partial_cmp(x).unwrap());
    } else {
        knots[1..last].sort_by(|x, y| x.partial_cmp(y).unwrap());
    }

    let mut segs = Vec::with_capacity(64);
    for w in knots.windows(2) {
        segs.push(gk15(&f, w[0], w[1])?);
    }

    loop {
        let value: Complex64 = segs.iter().map(|s| s.value).sum();
        let error: f64 = segs.iter().map(|s| s.error).sum();
        let target = opts.abs_tol.max(opts.rel_tol * value.norm());
        if error <= target {
            return Ok(QuadResult { value, error, intervals: segs.len() });
        }
        if segs.len() >= opts.max_intervals {
            return Err(Error::QuadratureFailure { estimate: error, requested: target });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, s)| if s.error > acc.1 { (i, s.error) } else { acc });
        let s = segs.swap_remove(worst);
        let m = 0.5 * (s.a + s.b);
        if m == s.a || m == s.b {
            return Err(Error::QuadratureFailure { estimate: error, requested: target });
        }
        segs.push(gk15(&f, s.a, m)?);
        segs.push(gk15(&f, m, s.b)?);
    }
}

pub fn integrate<F>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Result<Complex64>,
{
    integrate_with_breaks(f, a, b, &[], opts)
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F>(f: F, a: f64, b: f64, breaks: &[f64], opts: QuadOptions) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let r = integrate_with_breaks(|t| f(t).map(|v| Complex64::new(v, 0.0)), a, b, breaks, opts)?;
    Ok((r.value.re, r.error))
}

/// Integrate along the straight segment z0 → z1 in the complex plane.
pub fn integrate_segment<F>(f: F, z0: Complex64, z1: Complex64, opts: QuadOptions) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let dz = z1 - z0;
    let r = integrate(|t| Ok(f(z0 + dz * t)? * dz), 0.0, 1.0, opts)?;
    Ok(r)
}
