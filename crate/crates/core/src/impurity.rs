//! First-order perturbation theory for a localized impurity in the barrier
//! of a homogeneous wire: σ = σ0 + σ1 with σ0 = ky + i∫₀ˣ√(1 − x₁)dx₁.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{impurity_u, ImpurityParams, ImpurityValidity};
use crate::quadrature::{integrate_with_breaks, QuadOptions};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Integrand magnitude, relative to peak, at which the semi-infinite tail is cut.
pub const TAIL_BOUND: f64 = 1e-16;

/// √(1 − x), continued to x > 1 as −i√(x − 1) so the wave beyond the exit point is outgoing.
pub fn sqrt_one_minus(x: f64) -> Complex64 {
    if x <= 1.0 {
        Complex64::new((1.0 - x).sqrt(), 0.0)
    } else {
        Complex64::new(0.0, -(x - 1.0).sqrt())
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k * k < 1.0) {
        return Err(Error::Domain(format!("k² = {} must be < 1 for an underbarrier state", k * k)));
    }
    Ok(())
}

pub fn sigma0(x: f64, y: f64, k: f64) -> Result<Complex64> {
    check_k(k)?;
    let w = sqrt_one_minus(x);
    Ok(k * y + I * (2.0 / 3.0) * (1.0 - (1.0 - x) * w))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sigma1 {
    #[serde(serialize_with = "crate::cli::output::ser_complex")]
    pub value: Complex64,
    pub quad_error: f64,
    /// Bound on the discarded tail of the semi-infinite integral, relative to its peak integrand.
    pub tail_bound: f64,
}

fn quad_opts() -> QuadOptions {
    QuadOptions { abs_tol: 0.0, rel_tol: 1e-11, max_intervals: 4000 }
}

fn clamp_breaks(lo: f64, hi: f64, pts: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let (a, b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let mut v: Vec<f64> = pts.into_iter().filter(|&t| t > a && t < b).collect();
    v.sort_by(|p, q| p.partial_cmp(q).unwrap());
    v.dedup();
    v
}

/// σ1(x, y) as the sum of the boundary integral over y₁ ∈ [0, ∞) and the x₁ integral along the characteristic.
pub fn sigma1(x: f64, y: f64, p: &ImpurityParams) -> Result<Sigma1> {
    p.validate()?;
    check_k(p.k)?;
    if p.k == 0.0 {
        return Err(Error::Domain("σ1 needs a nonzero tangent momentum k".into()));
    }
    if p.u == 0.0 {
        return Ok(Sigma1 { value: Complex64::new(0.0, 0.0), quad_error: 0.0, tail_bound: 0.0 });
    }
    let k = p.k;
    let a = p.a_imp;
    let c = y - 2.0 * I * k * sqrt_one_minus(x);
    let zero = Complex64::new(0.0, 0.0);

    let shift = c + 2.0 * I * k;
    let width = a * (1.0 / TAIL_BOUND).ln().sqrt();
    let g = |y1: f64| Ok(impurity_u(zero, Complex64::new(y1, 0.0) + shift, p)? / (2.0 * k));
    let first = if shift.re >= 0.0 {
        let breaks = clamp_breaks(0.0, width, [a, 3.0 * a]);
        integrate_with_breaks(g, 0.0, width, &breaks, quad_opts())?
    } else {
        // peak inside [0, ∞): full-line Gaussian integral a√π minus the (−∞, 0] tail
        let total = -2.0 * p.u * (-(p.l * p.l) / (a * a)).exp() * a * std::f64::consts::PI.sqrt() / (2.0 * k);
        let breaks = clamp_breaks(-width, 0.0, [-3.0 * a, -a]);
        let tail = integrate_with_breaks(g, -width, 0.0, &breaks, quad_opts())?;
        crate::quadrature::QuadResult { value: total - tail.value, ..tail }
    };

    // x₁ = 1 − s² on [0, min(x, 1)], x₁ = 1 + s² beyond the turning point
    let s_of = |x1: f64| (1.0 - x1).abs().sqrt();
    let centre = [p.l - 3.0 * a, p.l - a, p.l, p.l + a, p.l + 3.0 * a];
    let s_lo = s_of(x.min(1.0));
    let inner_breaks = clamp_breaks(s_lo, 1.0, centre.iter().filter(|&&t| t <= 1.0).map(|&t| s_of(t)));
    let inner = integrate_with_breaks(
        |s| Ok(I * impurity_u(Complex64::new(1.0 - s * s, 0.0), c + 2.0 * I * k * s, p)?),
        s_lo,
        1.0,
        &inner_breaks,
        quad_opts(),
    )?;
    let mut value = first.value + inner.value;
    let mut quad_error = first.error + inner.error;
    if x > 1.0 {
        let s_hi = (x - 1.0).sqrt();
        let outer_breaks = clamp_breaks(0.0, s_hi, centre.iter().filter(|&&t| t > 1.0).map(|&t| s_of(t)));
        let outer = integrate_with_breaks(
            |s| Ok(-impurity_u(Complex64::new(1.0 + s * s, 0.0), c + 2.0 * k * s, p)?),
            0.0,
            s_hi,
            &outer_breaks,
            quad_opts(),
        )?;
        value += outer.value;
        quad_error += outer.error;
    }
    Ok(Sigma1 { value, quad_error, tail_bound: TAIL_BOUND })
}

/// Closed-form on-trajectory enhancement exponent B·a²·l·u·E / (8k²(2k² − l)), E = exp((4k² − l²)/a²).
pub fn enhancement_exponent_closed_form(p: &ImpurityParams, b: f64) -> f64 {
    let k2 = p.k * p.k;
    b * p.a_imp.powi(2) * p.l * p.u * p.log_enhancement().exp() / (8.0 * k2 * (2.0 * k2 - p.l))
}

/// Small-a limit of −B·Im σ1 on the trajectory including the mirror Gaussian at x = −l:
/// B·a²·l²·u·E / (4k²(4k⁴ − l²)).
pub fn enhancement_exponent_two_gaussian(p: &ImpurityParams, b: f64) -> f64 {
    let k2 = p.k * p.k;
    b * p.a_imp.powi(2) * p.l * p.l * p.u * p.log_enhancement().exp() / (4.0 * k2 * (4.0 * k2 * k2 - p.l * p.l))
}

/// −B·Im σ1 at (x, 2k√(x − 1)) from quadrature.
pub fn enhancement_exponent_quadrature(x: f64, p: &ImpurityParams, b: f64) -> Result<f64> {
    if x <= 1.0 {
        return Err(Error::Domain(format!("trajectory point needs x > 1, got {x}")));
    }
    let y = 2.0 * p.k * (x - 1.0).sqrt();
    Ok(-b * sigma1(x, y, p)?.value.im)
}

fn regime_check(p: &ImpurityParams, b: f64) -> Result<ImpurityValidity> {
    let v = p.validity(b);
    if !v.window {
        return Err(Error::RegimeViolation(format!(
            "l < 2k² < 2 fails (margin {:.3e})",
            v.window_margin
        )));
    }
    if !v.perturbative {
        return Err(Error::RegimeViolation(format!(
            "u·exp((4k² − l²)/a²) ≪ 1 fails (log margin {:.3})",
            v.perturbative_margin
        )));
    }
    if !v.semiclassical {
        return Err(Error::RegimeViolation(format!(
            "exp((4k² − l²)/a²) ≪ B fails (log margin {:.3})",
            v.semiclassical_margin
        )));
    }
    Ok(v)
}

/// ln|ψ(x, y)| = −B·Im(σ0 + σ1) beyond the exit point, without the (x − 1)^{−1/4} prefactor.
pub fn psi_profile_outside(x: f64, y: f64, p: &ImpurityParams, b: f64) -> Result<f64> {
    if x <= 1.0 {
        return Err(Error::Domain(format!("profile is defined beyond the exit point, got x = {x}")));
    }
    regime_check(p, b)?;
    let s0 = sigma0(x, y, p.k)?;
    let s1 = sigma1(x, y, p)?;
    Ok(-b * (s0 + s1.value).im)
}

/// The asymptotic profile: ln|ψ| = −2B/3 + exponent·exp(−d²/a²)·cos(4kd/a²), d = y − 2k√(x − 1).
pub fn psi_profile_asymptotic(x: f64, y: f64, p: &ImpurityParams, b: f64, exponent: f64) -> f64 {
    let d = y - 2.0 * p.k * (x - 1.0).sqrt();
    let a2 = p.a_imp * p.a_imp;
    -2.0 * b / 3.0 + exponent * (-d * d / a2).exp() * (4.0 * p.k * d / a2).cos()
}

/// Transverse offsets of the n-th zero of the cosine modulation.
pub fn modulation_zero(n: i32, p: &ImpurityParams) -> f64 {
    std::f64::consts::PI * p.a_imp * p.a_imp / (8.0 * p.k) * (2 * n + 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnhancementReport {
    /// ln(u_eff / u) = (4k² − l²)/a².
    pub log_enhancement: f64,
    pub u_eff: f64,
    pub validity: ImpurityValidity,
    /// True when k = 0: no tangent momentum, the plain WKB exponent applies.
    pub wkb_only: bool,
    /// l > 1: the impurity sits beyond the exit point x = 1.
    pub after_exit_point: bool,
    pub exponent_closed_form: f64,
    pub exponent_two_gaussian: f64,
}

pub fn enhancement_report(p: &ImpurityParams, b: f64) -> EnhancementReport {
    let le = p.log_enhancement();
    let wkb_only = p.k == 0.0;
    EnhancementReport {
        log_enhancement: le,
        u_eff: p.u * le.exp(),
        validity: p.validity(b),
        wkb_only,
        after_exit_point: p.l > 1.0,
        exponent_closed_form: if wkb_only { 0.0 } else { enhancement_exponent_closed_form(p, b) },
        exponent_two_gaussian: if wkb_only { 0.0 } else { enhancement_exponent_two_gaussian(p, b) },
    }
}
