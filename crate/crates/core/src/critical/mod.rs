//! Critical geometry of the saddle equation: extrema, folds, the cusp, the
//! cubic unfolding, Stokes lines in the v plane and caustic trajectories.

pub mod caustics;
pub mod extrema;
pub mod folds;
pub mod stokes2d;
pub mod unfolding;
pub mod width;

pub use caustics::{caustic_trajectories, CausticTrajectory};
pub use extrema::{find_extrema, Extrema};
pub use folds::{find_folds, fold_pierce_points, FoldPoint};
pub use stokes2d::{trace_stokes_lines_2d, StokesLineSet};
pub use unfolding::{action_expansion_coeffs, unfold_cubic, ActionExpansion, SingularExpansion};
pub use width::{find_critical_width, CriticalWidth};

use serde::Serialize;

use crate::error::Result;
use crate::potential::BarrierParams;

/// Everything the critical module reports for one parameter set.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalSet {
    pub extrema: Extrema,
    pub folds: Option<(FoldPoint, FoldPoint)>,
    pub width: CriticalWidth,
    pub expansion: SingularExpansion,
    /// D·|a0 − a|^{3/2}; the sign of a − a0 is reported separately.
    pub delta: f64,
    pub a_above_a0: bool,
}

pub fn critical_set(p: &BarrierParams) -> Result<CriticalSet> {
    let width = find_critical_width(p)?;
    let expansion = unfolding::expansion_at(p, &width)?;
    let extrema = find_extrema(p)?;
    let folds = find_folds(p, 0.0).ok();
    Ok(CriticalSet {
        extrema,
        folds,
        delta: expansion.d_coeff * (width.a0 - p.a).abs().powf(1.5),
        a_above_a0: p.a > width.a0,
        width,
        expansion,
    })
}

/// Upper end of the real-v scan: where α²(iv) reaches 1e6, kept under the exponent cap.
pub(crate) fn v_scan_max(p: &BarrierParams) -> f64 {
    if p.alpha0 == 0.0 {
        return 10.0 + 4.0 * p.gamma.sqrt();
    }
    let l = (1e6 / p.alpha0_sq()).ln().max(1.0);
    let v = p.a * (0.5 * l).sqrt();
    let cap = p.a * (0.5 * 600.0_f64).sqrt();
    v.min(cap)
}
