//! Cubic unfolding x − x0 + i·c_y·y = c3 (v − v0)³ − c_av (a − a0)(v − v0) of the
//! saddle equation around the cusp, and the local expansion of the action.

use num_complex::Complex64;
use serde::Serialize;

use super::width::{find_critical_width, CriticalWidth};
use crate::error::{Error, Result};
use crate::hj::saddle::saddle_jet;
use crate::jet::{Axis, Jet};
use crate::potential::BarrierParams;

/// Default near-critical window as a fraction of a0.
pub const WINDOW_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularExpansion {
    pub a0: f64,
    pub x0: f64,
    pub v0: f64,
    pub c_lin_y: f64,
    pub c_cubic: f64,
    pub c_lin_av: f64,
    /// ∂x/∂a at the cusp; shifts the fold pair along x at first order in a − a0.
    pub x_shift: f64,
    pub delta_coeff: f64,
    pub d_coeff: f64,
    pub tan_theta: f64,
    pub theta_deg: f64,
}

impl SingularExpansion {
    /// δ = delta_coeff·√|a − a0|.
    pub fn delta(&self, a: f64) -> f64 {
        self.delta_coeff * (a - self.a0).abs().sqrt()
    }

    /// Δ = D·|a − a0|^{3/2}.
    pub fn big_delta(&self, a: f64) -> f64 {
        self.d_coeff * (a - self.a0).abs().powf(1.5)
    }
}

pub fn expansion_at(p: &BarrierParams, w: &CriticalWidth) -> Result<SingularExpansion> {
    let j = saddle_jet(p, Complex64::new(w.v0, 0.0), w.a0, Complex64::new(0.0, 0.0));
    let c_cubic = j.deriv(3, 0, 0).re / 6.0;
    let c_lin_av = -j.deriv(1, 1, 0).re;
    let c_lin_y = (Complex64::i() * j.deriv(0, 0, 1)).re;
    let x_shift = j.deriv(0, 1, 0).re;
    if c_cubic <= 0.0 || c_lin_av <= 0.0 || c_lin_y == 0.0 {
        return Err(Error::SolverFailure(format!(
            "degenerate cusp: c3 = {c_cubic}, c_av = {c_lin_av}, c_y = {c_lin_y}"
        )));
    }
    let ratio = c_lin_av / (3.0 * c_cubic);
    Ok(SingularExpansion {
        a0: w.a0,
        x0: w.x0,
        v0: w.v0,
        c_lin_y,
        c_cubic,
        c_lin_av,
        x_shift,
        delta_coeff: ratio.sqrt(),
        d_coeff: 2.0 * c_cubic / c_lin_y * ratio.powf(1.5),
        tan_theta: c_lin_y,
        theta_deg: c_lin_y.atan().to_degrees(),
    })
}

fn check_window(p: &BarrierParams, w: &CriticalWidth) -> Result<()> {
    let window = WINDOW_FRACTION * w.a0;
    let offset = p.a - w.a0;
    if offset.abs() > window {
        return Err(Error::WindowViolation { offset, window });
    }
    Ok(())
}

pub fn unfold_cubic(p: &BarrierParams) -> Result<SingularExpansion> {
    let w = find_critical_width(p)?;
    check_window(p, &w)?;
    expansion_at(p, &w)
}

/// Singular points in the real (x, y) plane near the cusp.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityPositions {
    /// The two-decimal listing: {x0 ± c_y|Δ|, 0} above a0, {x0, ±c_y Δ} below.
    pub literal: Vec<(f64, f64)>,
    /// Cubic-model prediction including the first-order x shift.
    pub predicted: Vec<(f64, f64)>,
    /// Fold pair tracked directly on the full saddle equation.
    pub tracked: Vec<(f64, f64)>,
    pub big_delta: f64,
    pub a_below_a0: bool,
}

pub fn singularity_positions(p: &BarrierParams) -> Result<SingularityPositions> {
    let e = unfold_cubic(p)?;
    let eps = p.a - e.a0;
    let big = e.big_delta(p.a);
    let xc = e.x0 + e.x_shift * eps;
    let (literal, predicted) = if eps > 0.0 {
        let half = 2.0 * e.c_cubic * e.delta(p.a).powi(3);
        (
            vec![(e.x0 + e.c_lin_y * big, 0.0), (e.x0 - e.c_lin_y * big, 0.0)],
            vec![(xc + half, 0.0), (xc - half, 0.0)],
        )
    } else {
        (
            vec![(e.x0, e.c_lin_y * big), (e.x0, -e.c_lin_y * big)],
            vec![(xc, big), (xc, -big)],
        )
    };
    let tracked = super::folds::fold_pierce_points(p)?
        .into_iter()
        .map(|f| (f.x.re, f.y))
        .collect();
    Ok(SingularityPositions { literal, predicted, tracked, big_delta: big, a_below_a0: eps < 0.0 })
}

/// Local form ∂(iσ)/∂x ≈ constant + linear·(v − v0 − δ) and the quartic
/// coefficient of the integrated singular action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionExpansion {
    pub constant: f64,
    pub linear: f64,
    pub quartic: f64,
    /// The two offsets ±δ (imaginary for a < a0); the second is the |δ| → −|δ| image.
    pub deltas: [(f64, f64); 2],
}

/// r = √(1 + α² − x) = P − (v + iy)/(2S) as a jet.
fn r_jet(p: &BarrierParams, v: f64, a: f64) -> Jet {
    let jv = Jet::var(Complex64::new(v, 0.0), Axis::V);
    let ja = Jet::var(Complex64::new(a, 0.0), Axis::A);
    let jy = Jet::var(Complex64::new(0.0, 0.0), Axis::Y);
    let a2 = (jv * jv * 2.0 / (ja * ja)).exp() * p.alpha0_sq();
    let big_p = (a2 + Complex64::new(1.0, 0.0)).sqrt();
    let big_s = (a2 + Complex64::new(p.gamma, 0.0)).sqrt();
    big_p - (jv + jy * Complex64::i()) / (big_s * 2.0)
}

pub fn action_expansion_coeffs(p: &BarrierParams) -> Result<ActionExpansion> {
    let e = unfold_cubic(p)?;
    let r = r_jet(p, e.v0, e.a0);
    let constant = -r.value().re;
    let linear = -r.deriv(1, 0, 0).re;
    let d = e.delta(p.a);
    let deltas = if p.a >= e.a0 { [(d, 0.0), (-d, 0.0)] } else { [(0.0, d), (0.0, -d)] };
    Ok(ActionExpansion { constant, linear, quartic: 0.75 * e.c_cubic * linear, deltas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hj::saddle::{eval_saddle, Sheet};

    fn nominal() -> BarrierParams {
        BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, 1.7).unwrap()
    }

    #[test]
    fn coefficients_match_independent_derivatives() {
        let e = unfold_cubic(&nominal()).unwrap();
        // frozen from a sympy differentiation of the saddle equation
        assert!((e.c_cubic - 0.919).abs() < 1e-3, "{e:?}");
        assert!((e.c_lin_av - 0.868).abs() < 1e-3, "{e:?}");
        assert!((e.c_lin_y - 0.237).abs() < 1e-3, "{e:?}");
        assert!((e.delta_coeff - 0.561).abs() < 1e-3, "{e:?}");
        assert!((e.d_coeff - 1.369).abs() < 1e-3, "{e:?}");
        assert_eq!(e.tan_theta, e.c_lin_y);
    }

    #[test]
    fn window_is_enforced() {
        let p = nominal().with_a(2.5);
        assert!(matches!(unfold_cubic(&p), Err(Error::WindowViolation { .. })));
    }

    #[test]
    fn cubic_reproduces_saddle_equation_locally() {
        let e = unfold_cubic(&nominal()).unwrap();
        let p = nominal().with_a(e.a0);
        for u in [0.01, -0.02, 0.015] {
            let v = Complex64::new(e.v0 + u, 0.0);
            let x = eval_saddle(&p, v, Complex64::new(0.0, 0.0), Sheet::PRINCIPAL).unwrap().x.re;
            let cubic = e.x0 + e.c_cubic * u * u * u;
            assert!((x - cubic).abs() < 1e-6 + 5.0 * u.powi(4), "u = {u}");
        }
    }

    #[test]
    fn action_gradient_constant_is_minus_r() {
        let a = action_expansion_coeffs(&nominal()).unwrap();
        let e = unfold_cubic(&nominal()).unwrap();
        let p = nominal().with_a(e.a0);
        let s = eval_saddle(&p, Complex64::new(e.v0, 0.0), Complex64::new(0.0, 0.0), Sheet::PRINCIPAL).unwrap();
        assert!((a.constant + s.r.re).abs() < 1e-12);
        let h = 1e-5;
        let rp = eval_saddle(&p, Complex64::new(e.v0 + h, 0.0), Complex64::new(0.0, 0.0), Sheet::PRINCIPAL).unwrap();
        let rm = eval_saddle(&p, Complex64::new(e.v0 - h, 0.0), Complex64::new(0.0, 0.0), Sheet::PRINCIPAL).unwrap();
        let fd = -(rp.r.re - rm.r.re) / (2.0 * h);
        assert!((a.linear - fd).abs() < 1e-6);
    }

    #[test]
    fn delta_sign_flip_gives_conjugate_pair() {
        let a = action_expansion_coeffs(&nominal()).unwrap();
        assert_eq!(a.deltas[0].1, -a.deltas[1].1);
        assert!(a.deltas[0].1 > 0.0);
    }
}
