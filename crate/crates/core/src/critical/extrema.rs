use num_complex::Complex64;
use roots::{find_root_brent, SimpleConvergency};
use serde::Serialize;

use super::v_scan_max;
use crate::error::{Error, Result};
use crate::potential::BarrierParams;

/// The two real roots of v = 2√(1 + α²(iv))√(γ + α²(iv)) and x = 1 + α²(iv).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrema {
    pub v_a: f64,
    pub x_a: f64,
    pub v_b: f64,
    pub x_b: f64,
}

pub(crate) fn alpha_sq_real(p: &BarrierParams, v: f64) -> Result<f64> {
    Ok(p.alpha_sq_iv(Complex64::new(v, 0.0))?.re)
}

fn fixed_point_gap(p: &BarrierParams, v: f64) -> Result<f64> {
    let a = alpha_sq_real(p, v)?;
    Ok(v - 2.0 * ((1.0 + a) * (p.gamma + a)).sqrt())
}

pub fn find_extrema(p: &BarrierParams) -> Result<Extrema> {
    const N: usize = 4000;
    let hi = v_scan_max(p);
    let f = |v: f64| fixed_point_gap(p, v).unwrap_or(f64::NAN);
    let mut roots = Vec::new();
    let mut prev = (0.0, f(0.0));
    for k in 1..=N {
        let v = hi * k as f64 / N as f64;
        let fv = f(v);
        if prev.1 * fv <= 0.0 && prev.1 != 0.0 {
            let mut conv = SimpleConvergency { eps: 1e-15, max_iter: 200 };
            let r = find_root_brent(prev.0, v, &f, &mut conv)
                .map_err(|e| Error::SolverFailure(format!("extremum polish: {e:?}")))?;
            roots.push(r);
        }
        prev = (v, fv);
    }
    if roots.is_empty() {
        return Err(Error::NoRealRoot { lo: 0.0, hi });
    }
    let v_a = roots[0];
    let v_b = *roots.last().unwrap();
    Ok(Extrema {
        v_a,
        x_a: 1.0 + alpha_sq_real(p, v_a)?,
        v_b,
        x_b: 1.0 + alpha_sq_real(p, v_b)?,
    })
}
