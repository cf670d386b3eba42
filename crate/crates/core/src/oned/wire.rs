//! Zero-field wire: −ψ'' − u0β²(y)ψ = (E + u0)ψ in units ħ²/2m = 1, so the
//! boundary wave has κ = √(E + u0) and the local wavenumber √(E + u0 + u0β²).

use serde::{Deserialize, Serialize};

use super::scatter::{scatter, ScatterOptions};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WireShape {
    /// β(y) = β0·exp(−y²/a²).
    Gaussian,
    /// β(y) = β0/cosh(y/a).
    Sech,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireProfile {
    pub beta0: f64,
    pub a: f64,
    pub shape: WireShape,
}

impl WireProfile {
    pub fn beta_sq(&self, y: f64) -> f64 {
        let b2 = self.beta0 * self.beta0;
        match self.shape {
            WireShape::Gaussian => b2 * (-2.0 * y * y / (self.a * self.a)).exp(),
            WireShape::Sech => b2 / (y / self.a).cosh().powi(2),
        }
    }

    /// Half-width beyond which u0β² is below 1e−12 of its peak.
    fn extent(&self) -> f64 {
        match self.shape {
            WireShape::Gaussian => self.a * (0.5 * 1e12f64.ln()).sqrt(),
            WireShape::Sech => self.a * 1e6f64.acosh(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WireZeroFieldResult {
    pub r_mag: f64,
    pub log_r: f64,
    /// κ = √(E + u0).
    pub kappa: f64,
    pub flux_error: f64,
}

pub fn wire_overbarrier_reflection(profile: &WireProfile, e: f64, u0: f64) -> Result<WireZeroFieldResult> {
    if !(u0 > 0.0 && e > -u0 && profile.a > 0.0) {
        return Err(Error::Domain(format!("zero-field wire needs u0 > 0 and E > −u0 (E = {e}, u0 = {u0})")));
    }
    let kappa = (e + u0).sqrt();
    let q = |y: f64| e + u0 + u0 * profile.beta_sq(y);
    let q_max = e + u0 + u0 * profile.beta0 * profile.beta0;
    let s = scatter(q, kappa, profile.extent(), q_max, &ScatterOptions::default())?;
    Ok(WireZeroFieldResult { r_mag: s.r_mag, log_r: s.r_mag.ln(), kappa, flux_error: s.flux_error })
}

/// log|R| over a sweep of widths, fitted by log|R| = intercept − c·κa.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WireSweep {
    pub widths: Vec<f64>,
    pub log_r: Vec<f64>,
    pub exponent_fit: f64,
    pub intercept: f64,
    /// ‖fit − data‖₂ / ‖data‖₂.
    pub relative_residual: f64,
}

pub fn wire_width_sweep(beta0: f64, shape: WireShape, e: f64, u0: f64, widths: &[f64]) -> Result<WireSweep> {
    if widths.len() < 2 {
        return Err(Error::InvalidParams("width sweep needs at least two widths".into()));
    }
    let kappa = (e + u0).sqrt();
    let log_r = widths
        .iter()
        .map(|&a| wire_overbarrier_reflection(&WireProfile { beta0, a, shape }, e, u0).map(|r| r.log_r))
        .collect::<Result<Vec<_>>>()?;
    Ok(fit_log_r(kappa, widths, &log_r))
}

/// Least-squares line through (κa, log|R|).
pub fn fit_log_r(kappa: f64, widths: &[f64], log_r: &[f64]) -> WireSweep {
    let n = widths.len() as f64;
    let xs: Vec<f64> = widths.iter().map(|a| kappa * a).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = log_r.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(log_r).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let res: f64 = xs.iter().zip(log_r).map(|(x, y)| (intercept + slope * x - y).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = log_r.iter().map(|y| y * y).sum::<f64>().sqrt();
    WireSweep {
        widths: widths.to_vec(),
        log_r: log_r.to_vec(),
        exponent_fit: -slope,
        intercept,
        relative_residual: res / norm,
    }
}

/// Semiclassical local wavenumber √(E + u0 + u0β²(y)) against the phase
/// derivative of the numerical solution; returns the worst relative deviation over `ys`.
pub fn wavenumber_check(profile: &WireProfile, e: f64, u0: f64, ys: &[f64]) -> Result<f64> {
    let kappa = (e + u0).sqrt();
    let l = profile.extent();
    let q = |y: f64| e + u0 + u0 * profile.beta_sq(y);
    let q_max = e + u0 + u0 * profile.beta0 * profile.beta0;
    let h = 2.0 * std::f64::consts::PI / q_max.sqrt() / 400.0;
    let mut samples: Vec<(f64, f64)> = Vec::new();
    // RK4 from +L with the transmitted wave; local wavenumber is Im(ψ'/ψ)
    let mut y = l;
    let mut s = [
        crate::cmath::exp(num_complex::Complex64::new(0.0, kappa * l)),
        num_complex::Complex64::new(0.0, kappa) * crate::cmath::exp(num_complex::Complex64::new(0.0, kappa * l)),
    ];
    let f = |y: f64, s: [num_complex::Complex64; 2]| [s[1], -q(y) * s[0]];
    let mut targets: Vec<f64> = ys.to_vec();
    targets.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut ti = 0;
    while y > -l && ti < targets.len() {
        if y <= targets[ti] {
            samples.push((y, (s[1] / s[0]).im));
            ti += 1;
            continue;
        }
        let hh = -h.min(y - targets[ti]).max(1e-12);
        let k1 = f(y, s);
        let k2 = f(y + 0.5 * hh, [s[0] + 0.5 * hh * k1[0], s[1] + 0.5 * hh * k1[1]]);
        let k3 = f(y + 0.5 * hh, [s[0] + 0.5 * hh * k2[0], s[1] + 0.5 * hh * k2[1]]);
        let k4 = f(y + hh, [s[0] + hh * k3[0], s[1] + hh * k3[1]]);
        s[0] += hh / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        s[1] += hh / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        y += hh;
    }
    if samples.len() != ys.len() {
        return Err(Error::OutOfRange { what: "wavenumber probe".into(), value: targets[ti.min(targets.len() - 1)], lo: -l, hi: l });
    }
    Ok(samples
        .iter()
        .map(|&(y, k)| (k / q(y).sqrt() - 1.0).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_wire_does_not_reflect() {
        let r = wire_overbarrier_reflection(&WireProfile { beta0: 0.0, a: 1.0, shape: WireShape::Gaussian }, 0.0, 1.0).unwrap();
        assert!(r.r_mag < 1e-12);
    }

    #[test]
    fn reflection_decays_with_width() {
        let s = wire_width_sweep(1.0, WireShape::Gaussian, 0.0, 1.0, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        for w in s.log_r.windows(2) {
            assert!(w[1] < w[0]);
        }
        assert!(s.exponent_fit > 0.0 && s.exponent_fit <= 3.0, "{s:?}");
    }

    #[test]
    fn local_wavenumber_matches_semiclassical_form() {
        let p = WireProfile { beta0: 1.0, a: 6.0, shape: WireShape::Gaussian };
        let dev = wavenumber_check(&p, 0.0, 1.0, &[-3.0, -1.0, 0.0, 2.0, 5.0]).unwrap();
        assert!(dev < 0.01, "{dev}");
    }

    #[test]
    fn flux_conserved() {
        for shape in [WireShape::Gaussian, WireShape::Sech] {
            let r = wire_overbarrier_reflection(&WireProfile { beta0: 0.7, a: 2.0, shape }, 0.5, 1.0).unwrap();
            assert!(r.flux_error < 1e-8);
        }
    }
}
