//! σ(x, y) = i∫₀ˣ√(α²(iv) + 1 − x₁)dx₁ + y√(γ + α²(iv)) − ∫₀^{iv} y₁ ∂_{y₁}√(γ + α²(y₁)) dy₁

use num_complex::Complex64;
use serde::Serialize;

use super::saddle::{eval_saddle, SaddlePoint, Sheet};
use crate::cmath;
use crate::error::{Error, Result};
use crate::potential::{BarrierParams, Profile};
use crate::quadrature::{integrate, QuadOptions};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ComplexAction {
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub sigma: Complex64,
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub dsigma_dx: Complex64,
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub dsigma_dy: Complex64,
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub v: Complex64,
    pub sheet: Sheet,
    pub quad_error: f64,
}

impl ComplexAction {
    /// (∂σ/∂x)² + (∂σ/∂y)² − x − (γ − 1).
    pub fn hj_residual(&self, x: f64, gamma: f64) -> f64 {
        (self.dsigma_dx * self.dsigma_dx + self.dsigma_dy * self.dsigma_dy - x - (gamma - 1.0)).norm()
    }
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_intervals: 4000,
    }
}

/// Sign making the principal root at `z` continuous with `reference`.
fn continued_sign(root: Complex64, reference: Complex64) -> f64 {
    if (root - reference).norm() <= (-root - reference).norm() {
        1.0
    } else {
        -1.0
    }
}

/// ∫ y₁ ∂_{y₁}√(γ + α²(y₁)) dy₁ along a polyline starting at y₁ = 0, with the
/// root continued from +√γ. Returns the integral, its error estimate and the
/// continued root at the final vertex.
pub fn boundary_integral(params: &BarrierParams, path: &[Complex64]) -> Result<(Complex64, f64, Complex64)> {
    let start = cmath::sqrt(params.gamma + params.profile().alpha_sq(path[0])?);
    boundary_integral_from(params, path, start)
}

/// As [`boundary_integral`], with the root at `path[0]` given instead of principal.
pub fn boundary_integral_from(params: &BarrierParams, path: &[Complex64], start: Complex64) -> Result<(Complex64, f64, Complex64)> {
    let prof = params.profile();
    let g = params.gamma;
    let root = |z: Complex64| -> Result<Complex64> { Ok(cmath::sqrt(g + prof.alpha_sq(z)?)) };

    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut current = start;
    for w in path.windows(2) {
        let (z0, z1) = (w[0], w[1]);
        let dz = z1 - z0;
        // Find parameter values where the principal root jumps relative to the continued one.
        const SAMPLES: usize = 64;
        let mut pieces = vec![(0.0_f64, continued_sign(root(z0)?, current))];
        let mut prev_val = current;
        let mut sign = pieces[0].1;
        for j in 1..=SAMPLES {
            let t = j as f64 / SAMPLES as f64;
            let r = root(z0 + dz * t)?;
            let s = continued_sign(r, prev_val);
            if s * sign < 0.0 {
                // bisect the cut crossing between t - 1/SAMPLES and t
                let (mut lo, mut hi) = (t - 1.0 / SAMPLES as f64, t);
                for _ in 0..60 {
                    let m = 0.5 * (lo + hi);
                    let rm = root(z0 + dz * m)?;
                    if continued_sign(rm, prev_val) == sign {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                pieces.push((0.5 * (lo + hi), -sign));
                sign = -sign;
            }
            prev_val = r * sign;
        }
        pieces.push((1.0, sign));
        for k in 0..pieces.len() - 1 {
            let (t0, sg) = pieces[k];
            let t1 = pieces[k + 1].0;
            let f = |t: f64| -> Result<Complex64> {
                let z = z0 + dz * t;
                let rt = root(z)? * sg;
                Ok(z * prof.d_alpha_sq(z)? / (2.0 * rt) * dz)
            };
            let r = integrate(f, t0, t1, quad_opts())?;
            total += r.value;
            err += r.error;
        }
        current = prev_val;
    }
    Ok((total, err, current))
}

/// Boundary integral accumulated from y₁ = 0 to `end`, with the continued root there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryState {
    pub end: Complex64,
    pub value: Complex64,
    pub error: f64,
    pub root: Complex64,
}

fn assemble(
    x: f64,
    y: Complex64,
    params: &BarrierParams,
    v: Complex64,
    sheet: Sheet,
    path: &[Complex64],
) -> Result<ComplexAction> {
    let bi = boundary_integral(params, path)?;
    Ok(assemble_with(x, y, params, v, sheet, bi)?.0)
}

fn assemble_with(
    x: f64,
    y: Complex64,
    params: &BarrierParams,
    v: Complex64,
    sheet: Sheet,
    (t3, qerr, end_root): (Complex64, f64, Complex64),
) -> Result<(ComplexAction, BoundaryState)> {
    let e = eval_saddle(params, v, y, sheet)?;
    if (e.x - x).norm() > 1e-6 * (1.0 + x.abs()) {
        return Err(Error::SolverFailure(format!("v = {v} is not a saddle for x = {x} (X(v) = {})", e.x)));
    }
    let p = e.root_p;
    let s = e.root_s;
    let r = e.r;
    if (end_root - s).norm() > 1e-8 * s.norm().max(1.0) {
        return Err(Error::SolverFailure(format!(
            "sheet mismatch: path-continued root {end_root} differs from tracked root {s}"
        )));
    }
    let sigma = I * (2.0 / 3.0) * (p * p * p - r * r * r) + y * s - t3;
    let action = ComplexAction {
        sigma,
        dsigma_dx: I * r,
        dsigma_dy: s,
        v,
        sheet,
        quad_error: qerr,
    };
    let state = BoundaryState { end: I * v, value: t3, error: qerr, root: end_root };
    Ok((action, state))
}

/// Action at a solved saddle point; the boundary integral runs along [0, iv].
pub fn action(x: f64, y: Complex64, params: &BarrierParams, v: Complex64, sheet: Sheet) -> Result<ComplexAction> {
    assemble(x, y, params, v, sheet, &[Complex64::new(0.0, 0.0), I * v])
}

/// [`action`] together with the boundary-integral state at iv.
pub fn action_with_state(
    x: f64,
    y: Complex64,
    params: &BarrierParams,
    v: Complex64,
    sheet: Sheet,
) -> Result<(ComplexAction, BoundaryState)> {
    let bi = boundary_integral(params, &[Complex64::new(0.0, 0.0), I * v])?;
    assemble_with(x, y, params, v, sheet, bi)
}

/// Action with the boundary integral continued from a nearby state along the
/// segment `from.end` → iv, so the root follows the same path as the saddle.
pub fn action_continued(
    x: f64,
    y: Complex64,
    params: &BarrierParams,
    v: Complex64,
    sheet: Sheet,
    from: &BoundaryState,
) -> Result<(ComplexAction, BoundaryState)> {
    let (seg, err, root) = boundary_integral_from(params, &[from.end, I * v], from.root)?;
    assemble_with(x, y, params, v, sheet, (from.value + seg, from.error + err, root))
}

pub fn action_at(sp: &SaddlePoint, params: &BarrierParams) -> Result<ComplexAction> {
    action(sp.x, sp.y, params, sp.v, sp.sheet)
}

/// Same action with the boundary integral taken along 0 → iv/2 + offset → iv.
pub fn action_detour(
    x: f64,
    y: Complex64,
    params: &BarrierParams,
    v: Complex64,
    sheet: Sheet,
    offset: Complex64,
) -> Result<ComplexAction> {
    let end = I * v;
    assemble(x, y, params, v, sheet, &[Complex64::new(0.0, 0.0), 0.5 * end + offset, end])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hj::saddle::{solve_saddle, NewtonOptions};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nominal(a: f64) -> BarrierParams {
        BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, a).unwrap()
    }

    #[test]
    fn homogeneous_turning_point_action() {
        let p = BarrierParams::new(30.0, 0.2, 0.0, 2.0).unwrap();
        let v = c(2.0 * 0.2_f64.sqrt(), 0.0);
        let s = action(1.0, c(0.0, 0.0), &p, v, Sheet::PRINCIPAL).unwrap();
        assert!((s.sigma - c(0.0, 2.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn homogeneous_matches_wkb_off_axis() {
        let p = BarrierParams::new(30.0, 0.2, 0.0, 2.0).unwrap();
        let g = 0.2_f64.sqrt();
        for (x, y) in [(0.3, 0.5), (0.9, -1.2), (0.05, 2.0)] {
            let w = (1.0_f64 - x).sqrt();
            let v = c(2.0 * g * (1.0 - w), -y);
            let s = action(x, c(y, 0.0), &p, v, Sheet::PRINCIPAL).unwrap();
            let expect = c(y * g, 2.0 / 3.0 * (1.0 - w * w * w));
            assert!((s.sigma - expect).norm() < 1e-12, "{x} {y}: {}", s.sigma);
        }
    }

    #[test]
    fn reference_point_is_zero() {
        let p = nominal(2.0);
        let s = action(0.0, c(0.0, 0.0), &p, c(0.0, 0.0), Sheet::PRINCIPAL).unwrap();
        assert_eq!(s.sigma.norm(), 0.0);
    }

    #[test]
    fn boundary_gradient_on_wire() {
        let p = nominal(2.0);
        for y in [-1.5, 0.4, 2.2] {
            let s = action(0.0, c(y, 0.0), &p, c(0.0, -y), Sheet::PRINCIPAL).unwrap();
            let a2 = p.alpha_sq(c(y, 0.0)).unwrap();
            assert!((s.dsigma_dy - cmath::sqrt(0.2 + a2)).norm() < 1e-14);
            assert!((s.dsigma_dx - c(0.0, 1.0) * cmath::sqrt(1.0 + a2)).norm() < 1e-14);
            assert!(s.sigma.im.abs() < 1e-13);
        }
    }

    #[test]
    fn detour_agrees_with_straight_path() {
        let p = nominal(2.0);
        let opts = NewtonOptions::default();
        let sp = solve_saddle(0.8, c(0.6, 0.0), &p, c(0.9, -0.5), Sheet::PRINCIPAL, &opts).unwrap();
        let a = action(sp.x, sp.y, &p, sp.v, sp.sheet).unwrap();
        let b = action_detour(sp.x, sp.y, &p, sp.v, sp.sheet, c(0.2, 0.1)).unwrap();
        assert!((a.sigma - b.sigma).norm() < 1e-8);
    }

    #[test]
    fn extremum_b_action_closed_form() {
        // At point b, r = 0, so Im σ reduces to the penetration exponent per 2B.
        let p = nominal(2.0);
        let vb = 2.522_998_747_180_070_6;
        let e = eval_saddle(&p, c(vb, 0.0), c(0.0, 0.0), Sheet::PRINCIPAL).unwrap();
        assert!(e.r.norm() < 1e-12);
        let s = action(e.x.re, c(0.0, 0.0), &p, c(vb, 0.0), Sheet::PRINCIPAL).unwrap();
        let ab = e.alpha_sq.re;
        let a0 = 2.0 / 3.0 * (1.0 + ab).sqrt() * (1.0 - 0.6 - 2.0 * ab);
        let n = 200_000;
        let h = vb / n as f64;
        let mut a1 = 0.0;
        for k in 0..n {
            let t = (k as f64 + 0.5) * h;
            a1 += (0.2 + 0.03 * (2.0 * t * t / 4.0).exp()).sqrt() * h;
        }
        assert_relative_eq!(s.sigma.im, a0 + a1, max_relative = 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn hj_identity_and_gradients(x in 0.05..0.95f64, y in -2.0..2.0f64) {
            let p = nominal(2.0);
            let opts = NewtonOptions::default();
            let g = 0.2_f64.sqrt();
            let guess = c(2.0 * g * (1.0 - (1.0 - x).sqrt()), -y);
            let sp = solve_saddle(x, c(y, 0.0), &p, guess, Sheet::PRINCIPAL, &opts).unwrap();
            let a = action_at(&sp, &p).unwrap();
            prop_assert!(a.hj_residual(x, 0.2) < 1e-10);

            let h = 1e-5;
            let at = |xx: f64, yy: f64| {
                let s = solve_saddle(xx, c(yy, 0.0), &p, sp.v, sp.sheet, &opts).unwrap();
                action_at(&s, &p).unwrap().sigma
            };
            let dx = (at(x + h, y) - at(x - h, y)) / (2.0 * h);
            let dy = (at(x, y + h) - at(x, y - h)) / (2.0 * h);
            prop_assert!((dx - a.dsigma_dx).norm() < 1e-6 * a.dsigma_dx.norm().max(1.0));
            prop_assert!((dy - a.dsigma_dy).norm() < 1e-6 * a.dsigma_dy.norm().max(1.0));
        }
    }
}
