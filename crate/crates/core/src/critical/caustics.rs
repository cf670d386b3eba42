//! Classical trajectories reflected from the caustic x − x0 = η·tanθ.
//!
//! Each member is the parabola x = X_m − (η − b)²/(4c) with energy γ − 1,
//! where c = (x0 − 1 + γ + b·t)/(1 + t²) and t = tanθ.

use roots::{find_root_brent, SimpleConvergency};
use serde::Serialize;

use super::unfolding::{expansion_at, SingularExpansion};
use super::width::find_critical_width;
use crate::error::{Error, Result};
use crate::potential::BarrierParams;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausticTrajectory {
    pub b: f64,
    pub eta: Vec<f64>,
    pub x: Vec<f64>,
    /// Point where ∂x/∂η = tanθ.
    pub tangency: (f64, f64),
    /// Point where ∂x/∂b = 0 (the family's envelope).
    pub envelope: (f64, f64),
    pub max_energy_residual: f64,
}

#[derive(Debug, Clone, Copy)]
struct Family {
    x0: f64,
    gamma: f64,
    t: f64,
}

impl Family {
    fn c(&self, b: f64) -> f64 {
        (self.x0 - 1.0 + self.gamma + b * self.t) / (1.0 + self.t * self.t)
    }

    fn x_max(&self, b: f64) -> f64 {
        let t = self.t;
        (self.x0 + (1.0 - self.gamma) * t * t + b * t) / (1.0 + t * t)
    }

    fn x(&self, eta: f64, b: f64) -> f64 {
        self.x_max(b) - (eta - b).powi(2) / (4.0 * self.c(b))
    }

    fn dx_db(&self, eta: f64, b: f64) -> f64 {
        let t = self.t;
        let c = self.c(b);
        let u = eta - b;
        t / (1.0 + t * t) + u / (2.0 * c) + u * u * t / ((1.0 + t * t) * 4.0 * c * c)
    }

    /// −¼ẋ² + ¼η̇² − x along η = b + 2√c·τ, x = X_m − τ².
    fn energy(&self, eta: f64, b: f64) -> f64 {
        let c = self.c(b);
        let tau = (eta - b) / (2.0 * c.sqrt());
        let xdot = -2.0 * tau;
        let etadot = 2.0 * c.sqrt();
        -0.25 * xdot * xdot + 0.25 * etadot * etadot - self.x(eta, b)
    }
}

fn family(p: &BarrierParams) -> Result<(Family, SingularExpansion)> {
    let w = find_critical_width(p)?;
    let e = expansion_at(p, &w)?;
    Ok((Family { x0: e.x0, gamma: p.gamma, t: e.tan_theta }, e))
}

pub fn caustic_trajectories(p: &BarrierParams, b_values: &[f64]) -> Result<Vec<CausticTrajectory>> {
    let (fam, _) = family(p)?;
    const SAMPLES: usize = 201;
    b_values
        .iter()
        .map(|&b| {
            let c = fam.c(b);
            if !(c > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "b = {b} gives a trajectory with no turning point (c = {c})"
                )));
            }
            let eta_t = b - 2.0 * fam.t * c;
            let tangency = (eta_t, fam.x(eta_t, b));
            let g = |eta: f64| fam.dx_db(eta, b);
            // the other root of the quadratic ∂x/∂b sits at η − b = −2c/t
            let gap = if fam.t == 0.0 { 1.0 } else { (2.0 * c / fam.t - 2.0 * fam.t * c).abs() };
            let mut conv = SimpleConvergency { eps: 1e-15, max_iter: 200 };
            let eta_e = find_root_brent(eta_t - 0.5 * gap, eta_t + 0.5 * gap, &g, &mut conv)
                .map_err(|e| Error::SolverFailure(format!("envelope root: {e:?}")))?;
            let half = 2.0 * c.sqrt() * 1.5;
            let (eta, x): (Vec<f64>, Vec<f64>) = (0..SAMPLES)
                .map(|k| {
                    let eta = b - half + 2.0 * half * k as f64 / (SAMPLES - 1) as f64;
                    (eta, fam.x(eta, b))
                })
                .unzip();
            let max_energy_residual = eta
                .iter()
                .map(|&e| (fam.energy(e, b) - (p.gamma - 1.0)).abs())
                .fold(0.0, f64::max);
            Ok(CausticTrajectory {
                b,
                eta,
                x,
                tangency,
                envelope: (eta_e, fam.x(eta_e, b)),
                max_energy_residual,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nominal() -> BarrierParams {
        BarrierParams::with_alpha0_sq(30.0, 0.2, 0.03, 1.7).unwrap()
    }

    #[test]
    fn energy_is_gamma_minus_one() {
        let bs: Vec<f64> = (0..9).map(|k| -0.4 + 0.1 * k as f64).collect();
        for tr in caustic_trajectories(&nominal(), &bs).unwrap() {
            assert!(tr.max_energy_residual < 1e-12, "b = {}", tr.b);
        }
    }

    #[test]
    fn tangency_and_envelope_lie_on_caustic_line() {
        let (fam, e) = family(&nominal()).unwrap();
        let bs: Vec<f64> = (0..21).map(|k| -0.2 + 0.02 * k as f64).collect();
        let trs = caustic_trajectories(&nominal(), &bs).unwrap();
        for tr in &trs {
            for (eta, x) in [tr.tangency, tr.envelope] {
                assert!((x - e.x0 - eta * e.tan_theta).abs() < 1e-6, "b = {}", tr.b);
            }
            let h = 1e-6;
            let slope = (fam.x(tr.tangency.0 + h, tr.b) - fam.x(tr.tangency.0 - h, tr.b)) / (2.0 * h);
            assert!((slope - e.tan_theta).abs() < 1e-6);
        }
        for w in trs.windows(2) {
            let slope = (w[1].envelope.1 - w[0].envelope.1) / (w[1].envelope.0 - w[0].envelope.0);
            assert!((slope - e.tan_theta).abs() < 1e-4);
        }
    }

    #[test]
    fn rejects_trajectories_without_turning_point() {
        assert!(caustic_trajectories(&nominal(), &[-50.0]).is_err());
    }
}
